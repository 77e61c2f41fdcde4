#pragma once

#include <map>
#include <optional>
#include <vector>

#include "osidh/algebra.hpp"
#include "osidh/modpoly.hpp"
#include "osidh/quadorder.hpp"

namespace osidh {

/// (j_0, ..., j_n) with Phi_l(j_i, j_{i+1}) = 0 and no backtracking.
struct ModularChain {
    u64 ell = 2;
    std::vector<Fp2> j;

    int length() const { return static_cast<int>(j.size()) - 1; }
    const Fp2 &end() const { return j.back(); }
    ModularChain prefix(int depth) const;

    friend bool operator==(const ModularChain &x, const ModularChain &y) { return x.ell == y.ell && x.j == y.j; }
};

/// Roots of Phi_l(j_cur, Y), one copy of the parent removed.
std::vector<Fp2> children(const ModularPolys &mp, const Fp2 &j_cur, const std::optional<Fp2> &j_prev, u64 ell);

Fp2 base_j(i64 disc, const Field *field);
ModularChain generate_chain(const ModularPolys &mp, u64 ell, i64 disc, int n, u64 seed);
/// Throws InvariantViolation naming the failing index.
void validate_chain(const ModularPolys &mp, const ModularChain &chain, const Fp2 &j0);

/// Shallow images of chain prefixes under q (+1) and its conjugate (-1).
struct PrimeDirections {
    u64 q = 0;
    int depth = 0;  // separation depth; prefixes have at most depth + 1 entries
    std::map<std::pair<std::vector<Fp2>, int>, std::vector<Fp2>> images;
    /// j-tuples reached by several oriented prefixes with different images;
    /// the stored image follows the smallest kernel polynomial at each step.
    std::vector<std::vector<Fp2>> collisions;
};

struct DirectionTable {
    u64 ell = 2;
    std::vector<PrimeDirections> primes;

    const PrimeDirections *find(u64 q) const;
};

/// With strict set, any collision raises PrefixCollision.
DirectionTable build_direction_table(const ModularPolys &mp, const OrderParams &params,
                                     const std::vector<SplitPrimeIdeal> &primes, bool strict = true);
/// Throws InvariantViolation unless every entry is a level ladder prefix.
void validate_table(const ModularPolys &mp, const DirectionTable &table, const Fp2 &j0);

/// The common root of Phi_l(j'_i, Y) and Phi_q(j_{i+1}, Y).
Fp2 ladder_step(const ModularPolys &mp, const Fp2 &j_child_prev, const Fp2 &j_parent_next, u64 ell, u64 q);
/// All distinct common roots (diagnostics).
std::vector<Fp2> ladder_candidates(const ModularPolys &mp, const Fp2 &j_child_prev, const Fp2 &j_parent_next, u64 ell,
                                   u64 q);

ModularChain act_prime(const ModularPolys &mp, const ModularChain &chain, u64 q, int sign, const DirectionTable &table);
ModularChain act_vector(const ModularPolys &mp, const ModularChain &chain, const std::vector<u64> &primes,
                        const std::vector<i64> &exponents, const DirectionTable &table);

/// True when Phi_q(j_i, j'_i) = 0 at every rung.
bool is_level_ladder(const ModularPolys &mp, const ModularChain &parent, const ModularChain &child, u64 q);

}  // namespace osidh
