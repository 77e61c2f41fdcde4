// Command-line front end: parameter generation, key lifecycle, exchange and
// attack demos, and the graph experiments. Every artifact is canonical JSON
// (or CSV/DOT for the graph tables) written to --out or stdout.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "osidh/attack.hpp"
#include "osidh/error.hpp"
#include "osidh/graphstats.hpp"
#include "osidh/wire.hpp"

using namespace osidh;
using wire::Json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitAmbiguous = 3;

struct Common {
    std::string modpoly_dir;
    std::string out;
    bool pretty = false;

    ModPolyDB db() const
    {
        if (!modpoly_dir.empty())
            return load_db(modpoly_dir);
        return load_db(default_modpoly_dir());  // honours OSIDH_MODPOLY_DIR
    }

    void emit(const std::string &text) const
    {
        if (out.empty() || out == "-") {
            std::cout << text;
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f)
            fail(ErrorKind::InvalidArgument, "cannot write " + out);
        f << text;
    }

    void emit(const Json &doc) const { emit((pretty ? doc.dump(2) : wire::dump(doc)) + "\n"); }
};

struct ParamFlags {
    u64 p = 0;
    u64 ell = 2;
    i64 disc = -3;
    int n = 0;
    std::vector<u64> primes;
    i64 r = 1;
    u64 seed = 0;
    bool allow_collisions = false;

    void add(CLI::App *cmd)
    {
        cmd->add_option("--p", p, "field characteristic")->required();
        cmd->add_option("--ell", ell, "inert prime of the chain")->capture_default_str();
        cmd->add_option("--disc", disc, "fundamental discriminant")->capture_default_str();
        cmd->add_option("--n", n, "chain length")->required();
        cmd->add_option("--primes", primes, "split primes q_i")->delimiter(',')->required();
        cmd->add_option("--r", r, "exponent bound")->capture_default_str();
        cmd->add_option("--seed", seed, "chain seed")->required();
        cmd->add_flag("--allow-collisions", allow_collisions, "accept colliding direction-table prefixes");
    }

    PublicParams make(const ModPolyDB &db) const
    {
        return param_gen(db, p, disc, ell, n, primes, r, seed, {.allow_collisions = allow_collisions});
    }
};

Json read_json(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        fail(ErrorKind::InvalidArgument, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return wire::parse(ss.str());
}

[[noreturn]] void report(int code, std::string_view kind, const std::string &message)
{
    Json body = Json::object();
    body["error"] = std::string(kind);
    body["message"] = message;
    std::cerr << wire::dump(body) << "\n";
    std::exit(code);
}

Json facts_json(const ReproReport &r)
{
    Json facts = Json::array();
    for (const auto &f : r.facts)
        facts.push_back({{"name", f.name}, {"pass", f.pass}, {"detail", f.detail}});
    return {{"facts", facts}, {"all_pass", r.all_pass()}};
}

Json graph_json(const GraphReport &g)
{
    Json doc = Json::object();
    Json vertices = Json::array(), edges = Json::array(), comps = Json::array(), floor = Json::array();
    for (const auto &v : g.vertices)
        vertices.push_back(v.to_string());
    for (const auto &e : g.edges)
        edges.push_back({{"a", e.a.to_string()}, {"b", e.b.to_string()}, {"level", e.level},
                         {"multiplicity", e.multiplicity}});
    for (const auto &c : g.components) {
        Json comp = Json::array();
        for (const auto &v : c)
            comp.push_back(v.to_string());
        comps.push_back(comp);
    }
    for (const auto &[v, d] : g.depth)
        floor.push_back(v.to_string());
    doc["vertices"] = vertices;
    doc["edges"] = edges;
    doc["components"] = comps;
    doc["floor"] = floor;
    doc["level"] = g.level;
    return doc;
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Oriented supersingular isogeny Diffie-Hellman toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--modpoly-dir", common.modpoly_dir, "modular polynomial directory (else $OSIDH_MODPOLY_DIR)");
    app.add_option("--out", common.out, "output path (default stdout)");
    app.add_flag("--pretty", common.pretty, "indent JSON output");

    ParamFlags pf_params, pf_demo;
    auto *params_cmd = app.add_subcommand("params", "generate public parameters");
    pf_params.add(params_cmd);

    std::string params_path, key_path, peer_path, mode = "full", input_path, target_path;
    u64 key_seed = 0;
    auto *keygen_cmd = app.add_subcommand("keygen", "draw a secret key");
    keygen_cmd->add_option("--params", params_path)->required();
    keygen_cmd->add_option("--seed", key_seed)->required();

    auto *publish_cmd = app.add_subcommand("publish", "compute the public message for a key");
    publish_cmd->add_option("--params", params_path)->required();
    publish_cmd->add_option("--key", key_path)->required();
    publish_cmd->add_option("--mode", mode)->check(CLI::IsMember({"naive", "full"}))->capture_default_str();

    auto *derive_cmd = app.add_subcommand("derive", "derive the shared secret from a peer message");
    derive_cmd->add_option("--params", params_path)->required();
    derive_cmd->add_option("--key", key_path)->required();
    derive_cmd->add_option("--peer", peer_path)->required();
    derive_cmd->add_option("--mode", mode)->check(CLI::IsMember({"naive", "full"}))->capture_default_str();

    auto *demo_cmd = app.add_subcommand("exchange-demo", "run both parties of the full protocol");
    pf_demo.add(demo_cmd);
    int attempts = 3;
    demo_cmd->add_option("--attempts", attempts, "key pairs to try on Ambiguous")->capture_default_str();

    auto *attack_cmd = app.add_subcommand("attack-naive", "recover a naive-protocol key from its public chain");
    attack_cmd->add_option("--input", input_path, "transcript {params, E_chain, F_chain}");
    attack_cmd->add_option("--params", params_path, "params file (E_chain = public chain)");
    attack_cmd->add_option("--target", target_path, "naive public chain F");

    u64 gp = 0, gell = 2;
    std::optional<i64> gdisc;
    int max_depth = 8;
    auto *ss_cmd = app.add_subcommand("ss-count", "count supersingular j-invariants by BFS");
    ss_cmd->add_option("--p", gp)->required();
    ss_cmd->add_option("--ell", gell)->capture_default_str();
    ss_cmd->add_option("--disc", gdisc, "CM discriminant of the start point");

    i64 fdisc = -3;
    auto *forget_cmd = app.add_subcommand("forgetful-table", "forgetful map statistics as CSV");
    forget_cmd->add_option("--p", gp)->required();
    forget_cmd->add_option("--ell", gell)->capture_default_str();
    forget_cmd->add_option("--disc", fdisc)->capture_default_str();
    forget_cmd->add_option("--max-depth", max_depth)->capture_default_str();

    std::string start = "0", format = "json";
    bool restrict_fp = false;
    std::vector<int> connectors;
    auto *volcano_cmd = app.add_subcommand("volcano", "explore an isogeny graph component");
    volcano_cmd->add_option("--p", gp)->required();
    volcano_cmd->add_option("--ell", gell)->capture_default_str();
    volcano_cmd->add_option("--start", start, "start j as \"a+b*u\"")->capture_default_str();
    volcano_cmd->add_flag("--restrict-fp", restrict_fp, "keep only j in F_p");
    volcano_cmd->add_option("--connectors", connectors, "extra levels joining components")->delimiter(',');
    volcano_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}))->capture_default_str();

    auto *r71_cmd = app.add_subcommand("repro-71", "check the p = 71 chain facts");
    u64 r71_q = 7;
    r71_cmd->add_option("--q", r71_q)->capture_default_str();
    auto *r353_cmd = app.add_subcommand("repro-353", "rebuild the F_353 2-cordillera");

    CLI11_PARSE(app, argc, argv);

    try {
        auto db = common.db();
        if (params_cmd->parsed()) {
            common.emit(wire::encode(pf_params.make(db)));
        } else if (keygen_cmd->parsed()) {
            auto P = wire::decode_params(read_json(params_path), db);
            common.emit(wire::encode(keygen(P, key_seed)));
        } else if (publish_cmd->parsed()) {
            auto P = wire::decode_params(read_json(params_path), db);
            auto sk = wire::decode_key(read_json(key_path), P);
            common.emit(mode == "naive" ? wire::encode(naive_public(P, sk)) : wire::encode(public_data(P, sk)));
        } else if (derive_cmd->parsed()) {
            auto P = wire::decode_params(read_json(params_path), db);
            auto sk = wire::decode_key(read_json(key_path), P);
            auto peer = read_json(peer_path);
            auto secret = mode == "naive" ? naive_shared(P, sk, wire::decode_chain(peer, P))
                                          : derive(P, sk, wire::decode_public_data(peer, P));
            common.emit(wire::encode(secret));
        } else if (demo_cmd->parsed()) {
            auto P = pf_demo.make(db);
            auto run = run_exchange(P, pf_demo.seed, attempts);
            Json doc = Json::object();
            doc["params"] = wire::encode(P);
            doc["alice"] = {{"key", wire::encode(run.alice)}, {"public", wire::encode(run.alice_msg)},
                            {"secret", wire::encode(run.alice_secret)}};
            doc["bob"] = {{"key", wire::encode(run.bob)}, {"public", wire::encode(run.bob_msg)},
                          {"secret", wire::encode(run.bob_secret)}};
            doc["attempts"] = run.attempts;
            doc["aborts"] = run.aborts;
            doc["agreed"] = run.agreed();
            common.emit(doc);
            if (!run.agreed())
                report(kExitValidation, "Disagreement", "derived secrets differ");
        } else if (attack_cmd->parsed()) {
            PublicParams P;
            ModularChain E, F;
            if (!input_path.empty()) {
                auto doc = read_json(input_path);
                for (const char *key : {"params", "E_chain", "F_chain"})
                    if (!doc.is_object() || !doc.contains(key))
                        fail(ErrorKind::Malformed, std::string("/") + key + ": missing");
                P = wire::decode_params(doc["params"], db);
                E = wire::decode_chain(doc["E_chain"], P);
                F = wire::decode_chain(doc["F_chain"], P);
            } else {
                if (params_path.empty() || target_path.empty())
                    fail(ErrorKind::InvalidArgument, "attack-naive needs --input, or --params with --target");
                P = wire::decode_params(read_json(params_path), db);
                E = P.chain;
                F = wire::decode_chain(read_json(target_path), P);
            }
            common.emit(wire::encode(recover_naive(P, E, F)));
        } else if (ss_cmd->parsed()) {
            auto field = Field::make(gp);
            ModularPolys mp(db, field, {static_cast<int>(gell)});
            auto g = enumerate_ss(mp, gell, gdisc);
            validate_report(mp, g);
            u64 formula = ss_count_formula(gp);
            common.emit(Json{{"p", std::to_string(gp)},
                             {"ell", gell},
                             {"bfs", g.vertices.size()},
                             {"formula", formula},
                             {"components", g.components.size()},
                             {"match", g.vertices.size() == formula}});
            if (g.vertices.size() != formula)
                report(kExitValidation, "CountMismatch", "BFS count differs from the closed form");
        } else if (forget_cmd->parsed()) {
            auto field = Field::make(gp);
            ModularPolys mp(db, field, {static_cast<int>(gell)});
            auto order = OrderParams::make(fdisc, gell);
            if (kronecker(fdisc, gp) == 1)
                fail(ErrorKind::BadOrientation, "p splits in the discriminant");
            common.emit(forgetful_csv(forgetful_table(mp, order, max_depth)));
        } else if (volcano_cmd->parsed()) {
            auto field = Field::make(gp);
            std::vector<int> levels{static_cast<int>(gell)};
            levels.insert(levels.end(), connectors.begin(), connectors.end());
            ModularPolys mp(db, field, levels);
            auto g = volcano_components(mp, gell, field->parse(start), restrict_fp, connectors);
            validate_report(mp, g);
            if (format == "dot")
                common.emit(to_dot(g));
            else
                common.emit(graph_json(g));
        } else if (r71_cmd->parsed()) {
            auto r = reproduce_71(db, r71_q);
            common.emit(facts_json(r));
            if (!r.all_pass())
                report(kExitValidation, "ReproductionFailed", "a p = 71 fact failed");
        } else if (r353_cmd->parsed()) {
            GraphReport g;
            auto r = reproduce_353(db, &g);
            auto doc = facts_json(r);
            doc["graph"] = graph_json(g);
            common.emit(doc);
            if (!r.all_pass())
                report(kExitValidation, "ReproductionFailed", "an F_353 fact failed");
        }
    } catch (const Error &e) {
        report(e.kind() == ErrorKind::Ambiguous ? kExitAmbiguous : kExitValidation, to_string(e.kind()), e.what());
    } catch (const std::exception &e) {
        report(1, "Internal", e.what());
    }
    return 0;
}
