#include "osidh/graphstats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "osidh/chains.hpp"
#include "osidh/error.hpp"

namespace osidh {

namespace {

// Class-number-one CM points.
const std::vector<std::pair<i64, const char *>> &cm_table()
{
    static const std::vector<std::pair<i64, const char *>> table{
        {-3, "0"},
        {-4, "1728"},
        {-7, "-3375"},
        {-8, "8000"},
        {-11, "-32768"},
        {-19, "-884736"},
        {-43, "-884736000"},
        {-67, "-147197952000"},
        {-163, "-262537412640768000"},
    };
    return table;
}

std::vector<std::vector<Fp2>> components_of(const std::vector<Fp2> &vertices, const std::vector<GraphEdge> &edges,
                                            int level)
{
    std::map<Fp2, std::vector<Fp2>> adj;
    for (const auto &v : vertices)
        adj[v];
    for (const auto &e : edges)
        if (e.level == level) {
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }
    std::set<Fp2> seen;
    std::vector<std::vector<Fp2>> out;
    for (const auto &v : vertices) {
        if (seen.count(v))
            continue;
        std::vector<Fp2> comp;
        std::deque<Fp2> todo{v};
        seen.insert(v);
        while (!todo.empty()) {
            auto x = todo.front();
            todo.pop_front();
            comp.push_back(x);
            for (const auto &y : adj[x])
                if (seen.insert(y).second)
                    todo.push_back(y);
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end());
    return out;
}

GraphReport bfs(const ModularPolys &mp, const Fp2 &start, const std::vector<int> &levels, bool restrict_to_fp)
{
    GraphReport out;
    out.level = levels.front();
    std::set<Fp2> seen{start};
    std::deque<Fp2> todo{start};
    while (!todo.empty()) {
        auto a = todo.front();
        todo.pop_front();
        for (int m : levels) {
            auto roots = roots_in_fp2(mp.instantiate(m, a).poly);
            for (size_t i = 0; i < roots.size();) {
                size_t k = i;
                while (k < roots.size() && roots[k] == roots[i])
                    ++k;
                const auto &b = roots[i];
                int mult = static_cast<int>(k - i);
                i = k;
                if (restrict_to_fp && !b.in_base_field())
                    continue;
                if (a <= b)
                    out.edges.push_back({a, b, m, mult});
                if (seen.insert(b).second)
                    todo.push_back(b);
            }
        }
    }
    out.vertices.assign(seen.begin(), seen.end());
    out.components = components_of(out.vertices, out.edges, out.level);
    return out;
}

}  // namespace

u64 ss_count_formula(u64 p)
{
    if (p < 5)
        fail(ErrorKind::InvalidArgument, "supersingular count formula needs p >= 5");
    static constexpr u64 extra[12] = {0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2};
    return p / 12 + extra[p % 12];
}

Fp2 cm_j_invariant(i64 disc, const Field *field)
{
    for (const auto &[d, j] : cm_table())
        if (d == disc)
            return Fp2(field, field->reduce_decimal(j), 0);
    fail(ErrorKind::InvalidArgument, "no class-number-one CM point for disc " + std::to_string(disc));
}

i64 supersingular_cm_disc(u64 p)
{
    for (const auto &[d, j] : cm_table())
        if (kronecker(d, p) != 1)
            return d;
    fail(ErrorKind::NotFound, "no class-number-one discriminant is non-split at p = " + std::to_string(p));
}

GraphReport enumerate_ss(const ModularPolys &mp, u64 ell, std::optional<i64> disc)
{
    u64 p = mp.field()->p();
    i64 d = disc ? *disc : supersingular_cm_disc(p);
    if (kronecker(d, p) == 1)
        fail(ErrorKind::BadOrientation, "p = " + std::to_string(p) + " splits in disc " + std::to_string(d));
    return bfs(mp, cm_j_invariant(d, mp.field()), {static_cast<int>(ell)}, false);
}

GraphReport volcano_components(const ModularPolys &mp, u64 ell, const Fp2 &start, bool restrict_to_fp,
                               const std::vector<int> &connectors)
{
    std::vector<int> levels{static_cast<int>(ell)};
    levels.insert(levels.end(), connectors.begin(), connectors.end());
    auto out = bfs(mp, start, levels, restrict_to_fp);
    // Leaves of an ell-volcano sit on its floor; the surface is left unannotated.
    std::map<Fp2, int> degree;
    for (const auto &e : out.edges)
        if (e.level == out.level) {
            degree[e.a] += e.multiplicity;
            if (!(e.a == e.b))
                degree[e.b] += 1;
        }
    for (const auto &comp : out.components) {
        if (comp.size() < 3)
            continue;
        for (const auto &v : comp)
            if (degree[v] == 1)
                out.depth[v] = -1;
    }
    return out;
}

void validate_report(const ModularPolys &mp, const GraphReport &report)
{
    for (const auto &e : report.edges)
        if (!mp.eval_pair(e.level, e.a, e.b).is_zero())
            fail(ErrorKind::InvariantViolation, "edge (" + e.a.to_string() + ", " + e.b.to_string() +
                                                    ") is not a root of Phi_" + std::to_string(e.level));
}

std::string to_dot(const GraphReport &report)
{
    std::ostringstream out;
    out << "graph isogenies {\n";
    for (const auto &v : report.vertices) {
        out << "  \"" << v.to_string() << "\"";
        if (auto it = report.depth.find(v); it != report.depth.end())
            out << " [floor=true]";
        out << ";\n";
    }
    for (const auto &e : report.edges) {
        out << "  \"" << e.a.to_string() << "\" -- \"" << e.b.to_string() << "\" [label=" << e.level;
        if (e.multiplicity > 1)
            out << ", multiplicity=" << e.multiplicity;
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::vector<ForgetfulRow> forgetful_table(const ModularPolys &mp, const OrderParams &params, int max_depth)
{
    if (max_depth < 0)
        fail(ErrorKind::InvalidArgument, "depth must be non-negative");
    // Number of descending chains at the deepest level.
    double chains = max_depth == 0 ? 1 : (params.ell + 1) * std::pow(double(params.ell), max_depth - 1);
    if (chains > double(1 << 20))
        fail(ErrorKind::TooDeep, "depth " + std::to_string(max_depth) + " needs " + std::to_string(chains) +
                                     " chains, more than 2^20");
    const Field *field = mp.field();
    double log_p = std::log(double(field->p()));
    int ell = static_cast<int>(params.ell);

    // Children depend only on the last two j's, so chains are tracked as (prev, cur) pairs.
    std::set<std::pair<Fp2, Fp2>> frontier;
    Fp2 j0 = cm_j_invariant(params.disc, field);
    std::set<Fp2> X{j0};
    std::vector<ForgetfulRow> rows{{0, 1, 1, std::log(double(-params.disc)) / log_p, class_number(params, 0)}};
    for (const auto &c : children(mp, j0, std::nullopt, params.ell))
        frontier.insert({j0, c});
    for (int i = 1; i <= max_depth; ++i) {
        if (i > 1) {
            std::set<std::pair<Fp2, Fp2>> next;
            for (const auto &[prev, cur] : frontier)
                for (const auto &c : children(mp, cur, prev, params.ell))
                    next.insert({cur, c});
            frontier = std::move(next);
        }
        std::set<Fp2> Y;
        for (const auto &pc : frontier)
            Y.insert(pc.second);
        X.insert(Y.begin(), Y.end());
        double lambda = (2.0 * i * std::log(double(ell)) + std::log(double(-params.disc))) / log_p;
        rows.push_back({i, Y.size(), X.size(), lambda, class_number(params, i)});
    }
    return rows;
}

std::string forgetful_csv(const std::vector<ForgetfulRow> &rows)
{
    std::ostringstream out;
    out << "depth,Y,X,lambda,h\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto &r : rows)
        out << r.depth << ',' << r.Y << ',' << r.X << ',' << r.lambda << ',' << r.h << '\n';
    return out.str();
}

bool ReproReport::all_pass() const
{
    return std::all_of(facts.begin(), facts.end(), [](const ReproFact &f) { return f.pass; });
}

namespace {

std::string js(const std::vector<Fp2> &xs)
{
    std::string out = "(";
    for (size_t i = 0; i < xs.size(); ++i)
        out += (i ? "," : "") + xs[i].to_string();
    return out + ")";
}

}  // namespace

ReproReport reproduce_71(const ModPolyDB &db, u64 q)
{
    auto F = Field::make(71);
    ModularPolys mp(db, F, {2, static_cast<int>(q)});
    auto order = OrderParams::make(-3, 2);
    auto ideal = split_prime(order, q);
    auto table = build_direction_table(mp, order, {ideal}, false);
    ModularChain chain{2, {}};
    for (i64 x : {0, 40, 17, 41, 66})
        chain.j.push_back(F->from_int(x));

    ReproReport out;
    bool valid = true;
    std::string why = "valid descending chain";
    try {
        validate_chain(mp, chain, base_j(-3, F.get()));
    } catch (const Error &e) {
        valid = false;
        why = e.what();
    }
    out.facts.push_back({"chain (0,40,17,41,66) is a descending 2-chain", valid, why});
    auto plus = act_prime(mp, chain, q, 1, table);
    auto minus = act_prime(mp, chain, q, -1, table);
    bool begins = plus.j[0] == F->from_int(0) && plus.j[1] == F->from_int(40) && minus.j[0] == F->from_int(0) &&
                  minus.j[1] == F->from_int(40);
    out.facts.push_back({"q-image begins (0,40)", begins, "+: " + js(plus.j) + "  -: " + js(minus.j)});
    bool coincide = plus.prefix(3) == minus.prefix(3) && plus.j[2] == F->from_int(48) && plus.j[3] == F->from_int(48);
    out.facts.push_back({"both signs agree through depth 3, ending (48,48)", coincide,
                         js(plus.prefix(3).j) + " vs " + js(minus.prefix(3).j)});
    std::set<Fp2> ends{plus.end(), minus.end()};
    bool separate = ends == std::set<Fp2>{F->from_int(66), F->from_int(40)};
    out.facts.push_back({"signs separate at depth 4 into {66, 40}", separate,
                         "+: " + plus.end().to_string() + "  -: " + minus.end().to_string()});
    return out;
}

ReproReport reproduce_353(const ModPolyDB &db, GraphReport *graph)
{
    auto F = Field::make(353);
    ModularPolys mp(db, F, {2, 7, 13});
    auto report = volcano_components(mp, 2, F->from_int(160), true, {7, 13});
    validate_report(mp, report);

    std::set<Fp2> expected;
    for (i64 x : {160, 230, 270, 298, 66, 182, 197, 236, 253, 264, 304, 330})
        expected.insert(F->from_int(x));
    std::set<Fp2> got(report.vertices.begin(), report.vertices.end());

    ReproReport out;
    out.facts.push_back({"vertex set is the 12 listed j-invariants", got == expected, js(report.vertices)});
    std::string comps;
    for (const auto &c : report.components)
        comps += js(c);
    out.facts.push_back({"two 2-volcano components", report.components.size() == 2, comps});
    bool shapes = report.components.size() == 2;
    for (const auto &c : report.components) {
        int floor = 0;
        for (const auto &v : c)
            floor += report.depth.count(v) ? 1 : 0;
        shapes = shapes && c.size() == 6 && floor == 4;
    }
    out.facts.push_back({"each component has 2 surface and 4 floor vertices", shapes, comps});
    if (graph)
        *graph = std::move(report);
    return out;
}

}  // namespace osidh
