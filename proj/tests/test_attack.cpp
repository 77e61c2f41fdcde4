#include <doctest.h>

#include "osidh/attack.hpp"
#include "osidh/error.hpp"
#include "osidh/wire.hpp"

using namespace osidh;

namespace {

const ModPolyDB &shipped()
{
    static const ModPolyDB db = load_db(OSIDH_TEST_DATA_DIR);
    return db;
}

const PublicParams &desk()
{
    static const PublicParams P = param_gen(shipped(), 1073741789, -3, 2, 10, {7, 13, 19}, 2, 5);
    return P;
}

}  // namespace

TEST_CASE("zero key recovers the identity at every level")
{
    const auto &P = desk();
    auto t = recover_naive(P, P.chain, P.chain);
    REQUIRE(t.levels.size() == 10);
    for (const auto &level : t.levels)
        for (const auto &s : level.survivors)
            CHECK(s.is_identity());
    CHECK(t.recovered.is_identity());
    CHECK(t.levels[0].skipped);  // h(O_1) = 1 for disc -3, l = 2
}

TEST_CASE("planted keys are recovered")
{
    const auto &P = desk();
    auto order = P.order();
    for (u64 s = 0; s < 20; ++s) {
        auto a = keygen(P, 100 + s);
        auto F = naive_public(P, a);
        auto t = recover_naive(P, P.chain, F);
        auto planted = class_of_vector(P.primes, a.e, order, P.n);
        CHECK(t.recovered == planted);
        CHECK(t.alternatives.empty());
        REQUIRE(t.exponents);
        CHECK(class_of_vector(P.primes, *t.exponents, order, P.n) == planted);
        // Replays on the full chain.
        CHECK(act_vector(*P.mp, P.chain, P.prime_list(), *t.exponents, P.table) == F);

        // Linear work: l candidates per non-skipped level.
        int calls = 0;
        for (const auto &level : t.levels) {
            CHECK(level.tested.size() <= 2);
            if (!level.skipped) {
                CHECK(level.tested.size() == 2);
                CHECK(level.survivors.size() == 1);
            }
            calls += static_cast<int>(level.tested.size());
        }
        CHECK(t.act_calls <= calls);
        CHECK(t.act_calls <= 2 * P.n);

        // The recovered key breaks any exchange with this Alice.
        auto B = naive_public(P, keygen(P, 900 + s));
        CHECK(act_vector(*P.mp, B, P.prime_list(), *t.exponents, P.table).end() == naive_shared(P, a, B).j);
    }
}

TEST_CASE("any descending chain is reachable")
{
    // The class group acts transitively on descending chains from j0, so an
    // arbitrary chain is a valid transcript; only the search bound can fail.
    const auto &P = desk();
    auto G = generate_chain(*P.mp, 2, -3, P.n, 777);
    auto t = recover_naive(P, P.chain, G);
    REQUIRE(t.exponents);
    CHECK(act_vector(*P.mp, P.chain, P.prime_list(), *t.exponents, P.table) == G);

    auto narrow = param_gen(shipped(), 1073741789, -3, 2, 10, {7}, 1, 5);
    int exhausted = 0;
    for (u64 seed = 0; seed < 5; ++seed) {
        try {
            recover_naive(narrow, narrow.chain, generate_chain(*narrow.mp, 2, -3, 10, 1000 + seed));
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::SmoothSearchExhausted);
            ++exhausted;
        }
    }
    CHECK(exhausted > 0);

    CHECK_THROWS_AS(recover_naive(P, P.chain, G.prefix(5)), Error);
    auto broken = G;
    broken.j[7] = broken.j[7] + P.F->one();
    CHECK_THROWS_AS(recover_naive(P, P.chain, broken), Error);
}

TEST_CASE("transcript serializes")
{
    const auto &P = desk();
    auto t = recover_naive(P, P.chain, naive_public(P, {{2, -1, 1}}));
    auto doc = wire::encode(t);
    CHECK(doc["type"] == "AttackTranscript");
    CHECK(doc["levels"].size() == 10);
    CHECK(wire::decode_class(doc["recovered"]) == t.recovered);
}
