#include <doctest.h>

#include <set>

#include "osidh/error.hpp"
#include "osidh/quadorder.hpp"

using namespace osidh;

namespace {

const OrderParams eis = OrderParams::make(-3, 2);
const OrderParams gauss = OrderParams::make(-4, 3);

// Euler-criterion Legendre symbol as an independent check on kronecker().
int euler(i64 a, u64 p)
{
    u64 r = static_cast<u64>(((a % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p));
    if (r == 0)
        return 0;
    return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace

TEST_CASE("class numbers of the 2-tower over Z[zeta_3]")
{
    CHECK(class_number(eis, 0) == 1);
    CHECK(class_number(eis, 1) == 1);
    CHECK(class_number(eis, 2) == 2);
    CHECK(class_number(eis, 3) == 4);
    CHECK(unit_index(-3) == 3);
    CHECK(unit_index(-4) == 2);
    CHECK(unit_index(-7) == 1);
}

TEST_CASE("kronecker symbol")
{
    CHECK(kronecker(-3, 7) == 1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-3, 1) == 1);
    CHECK(kronecker(-4, 2) == 0);
    for (u64 p : {5, 7, 11, 13, 17, 19, 23, 71, 353, 1009})
        for (i64 a : {-3, -4, -7, -8, -11, 5, 12})
            CHECK(kronecker(a, p) == euler(a, p));
    // Multiplicativity in the modulus.
    for (i64 a : {-3, -4, -7})
        for (u64 m : {3, 5, 15, 21, 35, 12, 40})
            for (u64 k : {7, 8, 9})
                CHECK(kronecker(a, m * k) == kronecker(a, m) * kronecker(a, k));
}

TEST_CASE("split primes")
{
    auto q7 = split_prime(eis, 7);
    CHECK(q7.lambda == 2);
    CHECK(q7.lambda_bar == 4);
    CHECK(ideal_generator(eis, 7, 4) == std::pair<i64, i64>{3, 1});
    for (u64 q : {7, 13, 19, 31, 37}) {
        auto I = split_prime(eis, q);
        CHECK((I.lambda * I.lambda + I.lambda + 1) % q == 0);
        CHECK(I.a * I.a - I.a * I.b + I.b * I.b == static_cast<i64>(q));
        CHECK(((I.a + I.b * static_cast<i64>(I.lambda)) % static_cast<i64>(q)) == 0);
    }
    bool not_split = false;
    try {
        split_prime(eis, 5);
    } catch (const Error &e) {
        not_split = e.kind() == ErrorKind::NotSplit;
    }
    CHECK(not_split);
}

TEST_CASE("embedding of q_7 in the tower")
{
    auto q7 = split_prime(eis, 7);
    CHECK(class_embed(q7, eis, 0).is_identity());
    auto c2 = class_embed(q7, eis, 2);
    CHECK(!c2.is_identity());
    CHECK(c2.order() == 2);
    CHECK(class_embed(q7, eis, 3).order() == 2);
    CHECK(class_embed(q7, eis, 4).order() == 4);
    for (int n = 0; n <= 10; ++n)
        for (u64 q : {7, 13, 19})
            CHECK((class_embed(split_prime(eis, q), eis, n) * class_embed(split_prime(eis, q), eis, n, -1)).is_identity());
}

TEST_CASE("enumeration matches the class number formula")
{
    CHECK(class_enumerate(eis, 0).size() == 1);
    CHECK(class_enumerate(eis, 2).size() == 2);
    for (int n = 0; n <= 10; ++n) {
        CHECK(class_enumerate(eis, n).size() == class_number(eis, n));
        CHECK(class_enumerate(gauss, n).size() == class_number(gauss, n));
    }
    auto P5 = OrderParams::make(-3, 5);
    for (int n = 0; n <= 5; ++n)
        CHECK(class_enumerate(P5, n).size() == class_number(P5, n));
}

TEST_CASE("group axioms")
{
    for (const auto &P : {eis, gauss}) {
        for (int n = 1; n <= 4; ++n) {
            auto all = class_enumerate(P, n);
            auto id = OrderClass::identity(P, n);
            for (const auto &x : all) {
                CHECK((x * x.inv()).is_identity());
                CHECK(x * id == x);
                for (const auto &y : all) {
                    CHECK(x * y == y * x);
                    for (const auto &z : all)
                        CHECK((x * y) * z == x * (y * z));
                }
            }
        }
        for (int n = 5; n <= 6; ++n) {
            auto all = class_enumerate(P, n);
            std::mt19937_64 rng(static_cast<u64>(n));
            for (int it = 0; it < 2000; ++it) {
                const auto &x = all[rng() % all.size()];
                const auto &y = all[rng() % all.size()];
                const auto &z = all[rng() % all.size()];
                CHECK((x * y) * z == x * (y * z));
                CHECK((x * x.inv()).is_identity());
            }
        }
    }
    bool mismatch = false;
    try {
        (void)(OrderClass::identity(eis, 2) * OrderClass::identity(eis, 3));
    } catch (const Error &e) {
        mismatch = e.kind() == ErrorKind::DepthMismatch;
    }
    CHECK(mismatch);
}

TEST_CASE("kernel generator")
{
    auto k2 = kernel_generator(eis, 2);
    auto all2 = class_enumerate(eis, 2);
    CHECK(!k2.is_identity());
    CHECK(std::count(all2.begin(), all2.end(), k2) == 1);
    for (const auto &P : {eis, gauss}) {
        for (int n = 2; n <= 8; ++n) {
            auto k = kernel_generator(P, n);
            CHECK(k.order() == P.ell);
            CHECK(k.project(n - 1).is_identity());
        }
    }
}

TEST_CASE("smooth representatives")
{
    auto q7 = split_prime(eis, 7), q13 = split_prime(eis, 13), q19 = split_prime(eis, 19);
    CHECK(smooth_representative(OrderClass::identity(eis, 6), {q7, q13}, 2) == std::vector<i64>{0, 0});
    CHECK(smooth_representative(class_embed(q7, eis, 2), {q7}, 1) == std::vector<i64>{1});
    std::vector<SplitPrimeIdeal> primes{q7, q13, q19};
    std::mt19937_64 rng(9);
    for (int it = 0; it < 100; ++it) {
        std::vector<i64> e(3);
        for (auto &x : e)
            x = static_cast<i64>(rng() % 5) - 2;
        auto target = class_of_vector(primes, e, eis, 10);
        auto rep = smooth_representative(target, primes, 2);
        REQUIRE(rep.has_value());
        CHECK(class_of_vector(primes, *rep, eis, 10) == target);
        auto key = [](const std::vector<i64> &v) {
            std::vector<i64> k;
            for (i64 x : v)
                k.push_back(magnitude_rank(x));
            return k;
        };
        CHECK(key(*rep) <= key(e));
    }
}

TEST_CASE("size-ordered enumeration")
{
    std::vector<std::vector<i64>> seen;
    for_each_exponent_by_size({1, 1}, [&](const std::vector<i64> &e) {
        seen.push_back(e);
        return true;
    });
    CHECK(seen.size() == 9);
    CHECK(seen[0] == std::vector<i64>{0, 0});
    CHECK(seen[1] == std::vector<i64>{0, 1});
    CHECK(seen[2] == std::vector<i64>{0, -1});
    CHECK(seen[3] == std::vector<i64>{1, 0});
    CHECK(seen.back() == std::vector<i64>{-1, -1});
}

TEST_CASE("exponent map injectivity")
{
    auto q7 = split_prime(eis, 7), q13 = split_prime(eis, 13);
    auto w = exponent_map_injective({q7}, {1}, eis, 2);
    CHECK(!w.injective);
    CHECK(w.first == std::vector<i64>{-1});
    CHECK(w.second == std::vector<i64>{1});
    CHECK(exponent_map_injective({}, {}, eis, 4).injective);
    CHECK(exponent_map_injective({q7, q13}, {1, 1}, eis, 12).injective);
}

TEST_CASE("separation depth")
{
    auto first_order_above_two = [](const SplitPrimeIdeal &I) {
        for (int i = 0;; ++i)
            if (class_embed(I, eis, i).order() > 2)
                return i;
    };
    auto q7 = split_prime(eis, 7), q13 = split_prime(eis, 13);
    CHECK(min_separation_depth(eis, q7) == 4);
    CHECK(min_separation_depth(eis, q13) == 4);
    CHECK(first_order_above_two(q13) == 4);
    for (u64 q : {7, 13, 19}) {
        auto I = split_prime(eis, q);
        int bound = 0;
        while ((u64{1} << bound) < q)
            ++bound;
        CHECK(min_separation_depth(eis, I) <= bound + 2);
        CHECK(min_separation_depth(eis, I) == first_order_above_two(I));
    }
}
