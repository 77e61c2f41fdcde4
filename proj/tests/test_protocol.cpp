#include <doctest.h>

#include <random>
#include <set>

#include "osidh/error.hpp"
#include "osidh/protocol.hpp"
#include "osidh/wire.hpp"

using namespace osidh;

namespace {

constexpr u64 kP30 = 1073741789;  // largest prime below 2^30 that is 2 mod 3

const ModPolyDB &shipped()
{
    static const ModPolyDB db = load_db(OSIDH_TEST_DATA_DIR);
    return db;
}

const PublicParams &desk()
{
    static const PublicParams P = param_gen(shipped(), kP30, -3, 2, 16, {7, 13, 19}, 2, 42);
    return P;
}

ErrorKind kind_of(auto &&fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("parameter generation")
{
    const auto &P = desk();
    CHECK(P.chain.length() == 16);
    CHECK(P.prime_list() == std::vector<u64>{7, 13, 19});
    CHECK(P.warnings.empty());
    CHECK(P.table.primes.size() == 3);

    // Same seed, same parameters; primes arrive in any order.
    auto again = param_gen(shipped(), kP30, -3, 2, 16, {19, 7, 13}, 2, 42);
    CHECK(again.chain == P.chain);

    CHECK(kind_of([] { param_gen(shipped(), 1009, -3, 2, 4, {7}, 1, 0); }) == ErrorKind::BadOrientation);
    CHECK(kind_of([] { param_gen(shipped(), 5003, -3, 2, 4, {5}, 1, 0); }) == ErrorKind::NotSplit);
    CHECK(kind_of([] { param_gen(shipped(), 5003, -3, 2, 4, {7, 7}, 1, 0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { param_gen(shipped(), 5003, -3, 2, 4, {31}, 1, 0); }) == ErrorKind::MissingLevel);

    // 5^3 = 125 > 2^4.
    auto small = param_gen(shipped(), 5003, -3, 2, 4, {7, 13, 19}, 2, 1);
    REQUIRE(small.warnings.size() == 1);
    CHECK(small.warnings[0].rfind("sizing", 0) == 0);
    // 5^1 <= 2^3: the boundary itself is fine.
    CHECK(param_gen(shipped(), 5003, -3, 2, 3, {7}, 2, 1).warnings.empty());

    SUBCASE("p = 71 needs colliding prefixes")
    {
        CHECK(kind_of([] { param_gen(shipped(), 71, -3, 2, 4, {7}, 2, 3); }) == ErrorKind::PrefixCollision);
        auto p71 = param_gen(shipped(), 71, -3, 2, 4, {7}, 2, 3, {.allow_collisions = true});
        CHECK(p71.chain.j.front().is_zero());
        REQUIRE(p71.warnings.size() == 1);
        CHECK(p71.warnings[0].find("colliding") != std::string::npos);
    }
}

TEST_CASE("key generation")
{
    const auto &P = desk();
    CHECK(keygen(P, 5) == keygen(P, 5));
    std::set<i64> seen;
    for (u64 s = 0; s < 1000; ++s)
        for (i64 x : keygen(P, s).e) {
            CHECK(x >= -2);
            CHECK(x <= 2);
            seen.insert(x);
        }
    CHECK(seen.size() == 5);

    auto zero_r = param_gen(shipped(), 5003, -3, 2, 4, {7, 13}, 0, 1);
    CHECK(keygen(zero_r, 9).e == std::vector<i64>{0, 0});
    CHECK(kind_of([&] { validate_key(P, {{3, 0, 0}}); }) == ErrorKind::InvariantViolation);
    CHECK(kind_of([&] { validate_key(P, {{0, 0}}); }) == ErrorKind::InvariantViolation);
}

TEST_CASE("naive protocol")
{
    const auto &P = desk();
    SecretKey zero{{0, 0, 0}};
    CHECK(naive_public(P, zero) == P.chain);
    CHECK(naive_shared(P, zero, P.chain).j == P.chain.end());

    for (u64 s = 0; s < 50; ++s) {
        auto a = keygen(P, 2 * s), b = keygen(P, 2 * s + 1);
        auto A = naive_public(P, a), B = naive_public(P, b);
        validate_chain(*P.mp, A, P.j0());
        CHECK(naive_shared(P, a, B) == naive_shared(P, b, A));
    }

    // [q_7]^2 is nontrivial at depth 16, so q_7 and its conjugate differ.
    CHECK(naive_public(P, {{1, 0, 0}}).end() != naive_public(P, {{-1, 0, 0}}).end());
}

TEST_CASE("full protocol")
{
    const auto &P = desk();
    SecretKey zero{{0, 0, 0}};
    auto msg0 = public_data(P, zero);
    CHECK(msg0.end == P.chain.end());
    CHECK(msg0.forward[0][0] == act_prime(*P.mp, P.chain, 7, 1, P.table).end());
    CHECK(derive(P, zero, msg0).j == P.chain.end());

    int ambiguous = 0;
    for (u64 s = 0; s < 50; ++s) {
        auto a = keygen(P, 1000 + 2 * s), b = keygen(P, 1001 + 2 * s);
        try {
            auto A = public_data(P, a), B = public_data(P, b);
            CHECK(A.end == naive_public(P, a).end());
            auto ka = derive(P, a, B), kb = derive(P, b, A);
            CHECK(ka == kb);
            std::vector<i64> sum;
            for (size_t i = 0; i < 3; ++i)
                sum.push_back(a.e[i] + b.e[i]);
            CHECK(ka == direct_secret(P, sum));
            CHECK(ka == naive_shared(P, a, naive_public(P, b)));
        } catch (const Error &e) {
            REQUIRE(e.kind() == ErrorKind::Ambiguous);
            ++ambiguous;
        }
    }
    CHECK(ambiguous == 0);

    auto msg = public_data(P, {{0, 2, 0}});
    CHECK(derive(P, {{1, 0, 0}}, msg).j == public_data(P, {{1, 2, 0}}).end);
    CHECK(derive(P, {{0, 0, 1}}, msg0).j == msg0.forward[2][0]);
    CHECK(derive(P, {{0, -2, 0}}, msg0).j == msg0.backward[1][1]);

    SUBCASE("malformed messages")
    {
        auto bad = msg0;
        bad.forward[1].pop_back();
        CHECK(kind_of([&] { derive(P, zero, bad); }) == ErrorKind::InvariantViolation);
        bad = msg0;
        bad.backward[0][1] = bad.backward[0][1] + P.F->one();
        CHECK(kind_of([&] { derive(P, zero, bad); }) == ErrorKind::InvariantViolation);
    }

    auto run = run_exchange(P, 7);
    CHECK(run.agreed());
    CHECK(run.attempts >= 1);
}

TEST_CASE("wire round trips")
{
    const auto &P = desk();
    auto text = wire::dump(wire::encode(P));
    auto Q = wire::decode_params(wire::parse(text), shipped());
    CHECK(wire::dump(wire::encode(Q)) == text);
    CHECK(Q.chain == P.chain);

    auto sk = keygen(P, 3);
    auto data = public_data(P, sk);
    CHECK(wire::decode_key(wire::encode(sk), Q) == sk);
    CHECK(wire::decode_public_data(wire::encode(data), Q) == data);
    auto F = naive_public(P, sk);
    CHECK(wire::decode_chain(wire::encode(F), Q) == F);
    SharedSecret k{data.end};
    CHECK(wire::decode_secret(wire::encode(k), Q) == k);

    auto order = P.order();
    auto cls = OrderClass::from_element(order, 16, 12345, 678);
    CHECK(wire::decode_class(wire::encode(cls)) == cls);

    // Keys are sorted and big integers are strings.
    auto doc = wire::encode(data);
    CHECK(doc["osidh_v"] == 1);
    CHECK(doc["p"] == std::to_string(kP30));
    CHECK(wire::dump(doc).find("{\"backward\"") == 0);

    SUBCASE("params over p = 71 with collisions round-trip")
    {
        auto p71 = param_gen(shipped(), 71, -3, 2, 4, {7}, 2, 3, {.allow_collisions = true});
        auto back = wire::decode_params(wire::encode(p71), shipped());
        CHECK(back.table.primes[0].collisions == p71.table.primes[0].collisions);
    }
}

TEST_CASE("wire validators")
{
    const auto &P = desk();
    auto data = public_data(P, keygen(P, 11));
    auto good = wire::encode(data);

    auto tampered = good;
    tampered["forward"][1][1] = (data.forward[1][1] + P.F->one()).to_string();
    CHECK(kind_of([&] { wire::decode_public_data(tampered, P); }) == ErrorKind::InvariantViolation);

    tampered = good;
    tampered["p"] = "1073741827";
    CHECK(kind_of([&] { wire::decode_public_data(tampered, P); }) == ErrorKind::InvariantViolation);

    tampered = good;
    tampered["forward"][0][0] = "5+";
    try {
        wire::decode_public_data(tampered, P);
        FAIL("accepted");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Malformed);
        CHECK(std::string(e.what()).rfind("/forward/0/0:", 0) == 0);
    }

    CHECK(kind_of([] { wire::parse("{\"osidh_v\": 1,"); }) == ErrorKind::Malformed);
    tampered = good;
    tampered["osidh_v"] = 2;
    CHECK(kind_of([&] { wire::decode_public_data(tampered, P); }) == ErrorKind::Malformed);
    CHECK(kind_of([&] { wire::decode_chain(good, P); }) == ErrorKind::Malformed);

    auto pdoc = wire::encode(P);
    pdoc["seed"] = "43";
    CHECK(kind_of([&] { wire::decode_params(pdoc, shipped()); }) == ErrorKind::InvariantViolation);
    pdoc = wire::encode(P);
    pdoc["primes"][0]["lambda"] = 5;
    CHECK(kind_of([&] { wire::decode_params(pdoc, shipped()); }) == ErrorKind::InvariantViolation);
    pdoc = wire::encode(P);
    pdoc["table"]["primes"][2]["entries"][0]["image"][1] = P.F->from_int(7).to_string();
    CHECK(kind_of([&] { wire::decode_params(pdoc, shipped()); }) == ErrorKind::InvariantViolation);
}

TEST_CASE("single-field mutations of public data are rejected")
{
    const auto &P = desk();
    auto good = wire::encode(public_data(P, keygen(P, 12)));
    auto chain_good = wire::encode(naive_public(P, keygen(P, 13)));

    // Every leaf, with its JSON pointer.
    auto leaves = [](const wire::Json &doc) {
        std::vector<wire::Json::json_pointer> out;
        auto flat = doc.flatten();
        for (const auto &[ptr, value] : flat.items())
            out.emplace_back(ptr);
        return out;
    };

    std::mt19937_64 rng(2024);
    int rejected = 0, total = 0;
    for (const auto *base : {&good, &chain_good}) {
        auto ptrs = leaves(*base);
        for (int trial = 0; trial < 500; ++trial) {
            auto doc = *base;
            auto &leaf = doc[ptrs[rng() % ptrs.size()]];
            switch (rng() % 4) {
            case 0:  // another field element
                leaf = P.F->random(rng).to_string();
                break;
            case 1:  // wrong JSON type
                leaf = leaf.is_string() ? wire::Json(7) : wire::Json("7");
                break;
            case 2:  // numeric nudge
                if (leaf.is_number_integer())
                    leaf = leaf.get<i64>() + 1;
                else
                    leaf = leaf.get<std::string>() + "0";
                break;
            default:  // drop the leaf
                leaf = nullptr;
                break;
            }
            if (doc == *base)
                continue;
            ++total;
            try {
                if (base == &good)
                    wire::decode_public_data(doc, P);
                else
                    wire::decode_chain(doc, P);
            } catch (const Error &e) {
                if (e.kind() == ErrorKind::Malformed || e.kind() == ErrorKind::InvariantViolation)
                    ++rejected;
            }
        }
    }
    CHECK(total >= 990);
    CHECK(rejected == total);
}
