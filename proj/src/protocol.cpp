#include "osidh/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "osidh/ec.hpp"
#include "osidh/error.hpp"

namespace osidh {

std::vector<u64> PublicParams::prime_list() const
{
    std::vector<u64> out;
    for (const auto &I : primes)
        out.push_back(I.q);
    return out;
}

namespace {

std::vector<int> levels_for(u64 ell, const std::vector<u64> &primes)
{
    std::vector<int> levels{static_cast<int>(ell)};
    for (u64 q : primes)
        levels.push_back(static_cast<int>(q));
    return levels;
}

void check_compatibility(const FieldParams &fp, i64 disc, u64 ell, const std::vector<u64> &primes)
{
    auto order = OrderParams::make(disc, ell);
    if (kronecker(disc, fp.p) == 1)
        fail(ErrorKind::BadOrientation, "p = " + std::to_string(fp.p) + " splits in disc " + std::to_string(disc));
    if (fp.p == ell)
        fail(ErrorKind::InvalidArgument, "p must differ from l");
    std::set<u64> seen;
    for (u64 q : primes) {
        if (q == fp.p)
            fail(ErrorKind::InvalidArgument, "q = " + std::to_string(q) + " equals p");
        if (!seen.insert(q).second)
            fail(ErrorKind::InvalidArgument, "q = " + std::to_string(q) + " listed twice");
        split_prime(order, q);
    }
}

std::string sizing_warning(u64 ell, int n, size_t t, i64 r)
{
    // The exponent box must not outgrow the class group: (2r+1)^t <= l^n.
    double box = static_cast<double>(t) * std::log2(static_cast<double>(2 * r + 1));
    double group = static_cast<double>(n) * std::log2(static_cast<double>(ell));
    if (box <= group)
        return {};
    return "sizing: t log2(2r+1) = " + std::to_string(box) + " exceeds n log2(l) = " + std::to_string(group);
}

std::vector<std::string> warnings_for(const PublicParams &P)
{
    std::vector<std::string> out;
    if (auto w = sizing_warning(P.ell, P.n, P.primes.size(), P.r); !w.empty())
        out.push_back(w);
    for (const auto &dir : P.table.primes)
        if (!dir.collisions.empty())
            out.push_back("direction table for q = " + std::to_string(dir.q) + " has " +
                          std::to_string(dir.collisions.size()) + " colliding prefixes");
    return out;
}

bool same_directions(const PrimeDirections &x, const PrimeDirections &y)
{
    return x.q == y.q && x.depth == y.depth && x.images == y.images && x.collisions == y.collisions;
}

}  // namespace

PublicParams param_gen(const ModPolyDB &db, u64 p, i64 disc, u64 ell, int n, std::vector<u64> primes, i64 r,
                       u64 seed, const ParamOptions &options)
{
    if (n < 0 || r < 0)
        fail(ErrorKind::InvalidArgument, "n and r must be non-negative");
    PublicParams P;
    P.field = create_field(p);
    std::sort(primes.begin(), primes.end());
    check_compatibility(P.field, disc, ell, primes);
    P.disc = disc;
    P.ell = ell;
    P.n = n;
    P.r = r;
    P.seed = seed;
    P.allow_collisions = options.allow_collisions;
    P.F = Field::make(p);
    P.mp = std::make_shared<const ModularPolys>(db, P.F, levels_for(ell, primes));
    auto order = P.order();
    for (u64 q : primes)
        P.primes.push_back(split_prime(order, q));
    P.chain = generate_chain(*P.mp, ell, disc, n, seed);
    P.table = build_direction_table(*P.mp, order, P.primes, !options.allow_collisions);
    P.warnings = warnings_for(P);
    return P;
}

void bind_and_validate(PublicParams &P, const ModPolyDB &db)
{
    auto fp = create_field(P.field.p);
    if (!(fp == P.field))
        fail(ErrorKind::InvariantViolation, "field nonresidue does not match p");
    auto primes = P.prime_list();
    if (!std::is_sorted(primes.begin(), primes.end()))
        fail(ErrorKind::InvariantViolation, "primes must be increasing");
    try {
        check_compatibility(P.field, P.disc, P.ell, primes);
    } catch (const Error &e) {
        fail(ErrorKind::InvariantViolation, e.what());
    }
    if (P.n < 0 || P.r < 0)
        fail(ErrorKind::InvariantViolation, "n and r must be non-negative");
    if (!P.F || P.F->p() != P.field.p)
        P.F = Field::make(P.field.p);
    P.mp = std::make_shared<const ModularPolys>(db, P.F, levels_for(P.ell, primes));
    auto order = P.order();
    for (const auto &I : P.primes)
        if (!(split_prime(order, I.q) == I))
            fail(ErrorKind::InvariantViolation, "split prime data for q = " + std::to_string(I.q) + " is wrong");
    if (P.chain.ell != P.ell || P.chain.length() != P.n)
        fail(ErrorKind::InvariantViolation, "public chain has the wrong degree or length");
    Fp2 j0 = base_j(P.disc, P.F.get());
    validate_chain(*P.mp, P.chain, j0);
    if (!(generate_chain(*P.mp, P.ell, P.disc, P.n, P.seed) == P.chain))
        fail(ErrorKind::InvariantViolation, "public chain is not the one generated from the recorded seed");
    if (P.table.ell != P.ell || P.table.primes.size() != P.primes.size())
        fail(ErrorKind::InvariantViolation, "direction table does not cover the primes");
    for (size_t i = 0; i < P.primes.size(); ++i) {
        const auto &dir = P.table.primes[i];
        if (dir.q != P.primes[i].q || dir.depth != min_separation_depth(order, P.primes[i]))
            fail(ErrorKind::InvariantViolation, "direction table entry for q = " + std::to_string(dir.q) +
                                                    " has the wrong prime or depth");
    }
    validate_table(*P.mp, P.table, j0);
    DirectionTable rebuilt;
    try {
        rebuilt = build_direction_table(*P.mp, order, P.primes, !P.allow_collisions);
    } catch (const Error &e) {
        fail(ErrorKind::InvariantViolation, std::string("direction table cannot be rebuilt: ") + e.what());
    }
    for (size_t i = 0; i < P.primes.size(); ++i)
        if (!same_directions(rebuilt.primes[i], P.table.primes[i]))
            fail(ErrorKind::InvariantViolation,
                 "direction table for q = " + std::to_string(P.primes[i].q) + " differs from the rebuilt table");
    if (P.warnings != warnings_for(P))
        fail(ErrorKind::InvariantViolation, "recorded warnings do not match the parameters");
}

SecretKey keygen(const PublicParams &params, u64 seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> dist(-params.r, params.r);
    SecretKey sk;
    for (size_t i = 0; i < params.primes.size(); ++i)
        sk.e.push_back(dist(rng));
    return sk;
}

void validate_key(const PublicParams &params, const SecretKey &sk)
{
    if (sk.e.size() != params.primes.size())
        fail(ErrorKind::InvariantViolation, "secret key has " + std::to_string(sk.e.size()) + " exponents, expected " +
                                                std::to_string(params.primes.size()));
    for (i64 x : sk.e)
        if (x < -params.r || x > params.r)
            fail(ErrorKind::InvariantViolation, "exponent " + std::to_string(x) + " outside [-r, r]");
}

ModularChain naive_public(const PublicParams &params, const SecretKey &sk)
{
    validate_key(params, sk);
    return act_vector(*params.mp, params.chain, params.prime_list(), sk.e, params.table);
}

SharedSecret naive_shared(const PublicParams &params, const SecretKey &sk, const ModularChain &other)
{
    validate_key(params, sk);
    if (other.ell != params.ell || other.length() != params.n)
        fail(ErrorKind::InvariantViolation, "peer chain has the wrong degree or length");
    validate_chain(*params.mp, other, params.j0());
    return {act_vector(*params.mp, other, params.prime_list(), sk.e, params.table).end()};
}

PublicData public_data(const PublicParams &params, const SecretKey &sk)
{
    validate_key(params, sk);
    auto F = act_vector(*params.mp, params.chain, params.prime_list(), sk.e, params.table);
    PublicData out;
    out.end = F.end();
    for (const auto &I : params.primes) {
        for (int sign : {1, -1}) {
            std::vector<Fp2> dir;
            auto cur = F;
            for (i64 s = 0; s < params.r; ++s) {
                cur = act_prime(*params.mp, cur, I.q, sign, params.table);
                dir.push_back(cur.end());
            }
            (sign > 0 ? out.forward : out.backward).push_back(std::move(dir));
        }
    }
    return out;
}

void validate_public_data(const PublicParams &params, const PublicData &data)
{
    size_t t = params.primes.size();
    if (data.forward.size() != t || data.backward.size() != t)
        fail(ErrorKind::InvariantViolation, "public data must carry one chain per prime and direction");
    auto same_field = [&](const Fp2 &x) { return x.field() && x.field()->p() == params.field.p; };
    if (!same_field(data.end))
        fail(ErrorKind::InvariantViolation, "public data lives over a different field");
    for (size_t i = 0; i < t; ++i) {
        for (const auto *dirs : {&data.forward, &data.backward}) {
            const auto &dir = (*dirs)[i];
            if (static_cast<i64>(dir.size()) != params.r)
                fail(ErrorKind::InvariantViolation, "direction chain for q = " + std::to_string(params.primes[i].q) +
                                                        " must have length r");
            Fp2 prev = data.end;
            for (size_t k = 0; k < dir.size(); ++k) {
                if (!same_field(dir[k]))
                    fail(ErrorKind::InvariantViolation, "public data lives over a different field");
                if (!params.mp->eval_pair(static_cast<int>(params.primes[i].q), prev, dir[k]).is_zero())
                    fail(ErrorKind::InvariantViolation, "direction chain for q = " +
                                                            std::to_string(params.primes[i].q) + " breaks at rung " +
                                                            std::to_string(k + 1));
                prev = dir[k];
            }
        }
    }
}

SharedSecret derive(const PublicParams &params, const SecretKey &sk, const PublicData &other)
{
    validate_key(params, sk);
    validate_public_data(params, other);
    const auto &mp = *params.mp;
    size_t t = params.primes.size();
    // chains[i][0 or 1]: base followed by the remaining rungs in each direction.
    std::vector<std::array<std::vector<Fp2>, 2>> chains(t);
    for (size_t i = 0; i < t; ++i) {
        chains[i][0] = {other.end};
        chains[i][0].insert(chains[i][0].end(), other.forward[i].begin(), other.forward[i].end());
        chains[i][1] = {other.end};
        chains[i][1].insert(chains[i][1].end(), other.backward[i].begin(), other.backward[i].end());
    }
    Fp2 base = other.end;
    for (size_t i = 0; i < t; ++i) {
        i64 e = sk.e[i];
        auto &walk = chains[i][e < 0 ? 1 : 0];
        u64 qi = params.primes[i].q;
        for (i64 step = 0; step < std::abs(e); ++step) {
            if (walk.size() < 2)
                fail(ErrorKind::ChainExhausted, "direction chain for q = " + std::to_string(qi) + " is exhausted");
            Fp2 next = walk[1];
            // Push every later prime's chains across the q_i-step base -> next.
            for (size_t k = i + 1; k < t; ++k) {
                u64 qk = params.primes[k].q;
                for (auto &old : chains[k]) {
                    std::vector<Fp2> moved{next};
                    for (size_t m = 1; m < old.size(); ++m)
                        moved.push_back(ladder_step(mp, moved.back(), old[m], qk, qi));
                    old = std::move(moved);
                }
            }
            walk.erase(walk.begin());
            base = next;
        }
    }
    return {base};
}

SharedSecret direct_secret(const PublicParams &params, const std::vector<i64> &e)
{
    return {act_vector(*params.mp, params.chain, params.prime_list(), e, params.table).end()};
}

ExchangeResult run_exchange(const PublicParams &params, u64 seed, int max_attempts)
{
    ExchangeResult res;
    std::mt19937_64 seeds(seed);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        res.attempts = attempt + 1;
        res.alice = keygen(params, seeds());
        res.bob = keygen(params, seeds());
        try {
            res.alice_msg = public_data(params, res.alice);
            res.bob_msg = public_data(params, res.bob);
            res.alice_secret = derive(params, res.alice, res.bob_msg);
            res.bob_secret = derive(params, res.bob, res.alice_msg);
            return res;
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::Ambiguous)
                throw;
            res.aborts.push_back(e.what());
        }
    }
    fail(ErrorKind::Ambiguous, "exchange aborted on ambiguity " + std::to_string(max_attempts) + " times");
}

}  // namespace osidh
