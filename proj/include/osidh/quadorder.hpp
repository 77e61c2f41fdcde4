#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osidh/algebra.hpp"

namespace osidh {

/// Kronecker symbol (a/m) for m >= 1.
int kronecker(i64 a, u64 m);
/// [O_K^x : Z^x] for class-number-one discriminants.
int unit_index(i64 disc);

/// O_K = Z[w] with w^2 + t w + s = 0, plus the inert prime l of the tower.
struct OrderParams {
    i64 disc = -3;
    i64 t = 1;
    i64 s = 1;
    u64 ell = 2;

    static OrderParams make(i64 disc, u64 ell);

    /// l^n, failing with TooLarge past 2^62.
    u64 modulus(int n) const;

    friend bool operator==(const OrderParams &, const OrderParams &) = default;
};

u64 class_number(const OrderParams &params, int n);

/// A class of Cl(Z + l^n O_K), stored as the canonical a + b w modulo l^n.
class OrderClass {
  public:
    OrderClass() = default;
    /// Canonicalizes an arbitrary unit a + b w (integers, may be negative).
    static OrderClass from_element(const OrderParams &params, int n, i64 a, i64 b);
    static OrderClass identity(const OrderParams &params, int n);

    const OrderParams &params() const { return _params; }
    int depth() const { return _n; }
    u64 a() const { return _a; }
    u64 b() const { return _b; }

    bool is_identity() const;
    OrderClass inv() const;
    OrderClass pow(i64 e) const;
    u64 order() const;
    /// Image in Cl(O_{n-k}).
    OrderClass project(int depth) const;
    /// Class of the same residue a + b w read modulo l^depth, depth >= n.
    OrderClass lift(int depth) const;

    friend OrderClass operator*(const OrderClass &x, const OrderClass &y);
    friend bool operator==(const OrderClass &x, const OrderClass &y);
    friend bool operator<(const OrderClass &x, const OrderClass &y)
    {
        return std::pair{x._a, x._b} < std::pair{y._a, y._b};
    }

    std::string to_string() const;

  private:
    OrderClass(const OrderParams &params, int n, u64 a, u64 b) : _params(params), _n(n), _a(a), _b(b) {}
    static OrderClass canonical(const OrderParams &params, int n, u64 a, u64 b);

    OrderParams _params;
    int _n = 0;
    u64 _a = 0;
    u64 _b = 0;
};

/// A prime of O_K over a split rational prime q: (q, w - lambda).
struct SplitPrimeIdeal {
    u64 q = 0;
    u64 lambda = 0;      // smaller root of x^2 + t x + s mod q
    u64 lambda_bar = 0;  // the other root
    i64 a = 0;           // generator a + b w of norm q with a + b*lambda = 0 mod q
    i64 b = 0;

    friend bool operator==(const SplitPrimeIdeal &, const SplitPrimeIdeal &) = default;
};

SplitPrimeIdeal split_prime(const OrderParams &params, u64 q);
/// Generator of a given eigenvalue: smallest b > 0, then smallest a.
std::pair<i64, i64> ideal_generator(const OrderParams &params, u64 q, u64 eigenvalue);

/// Class of the ideal (sign = +1) or of its conjugate (sign = -1).
OrderClass class_embed(const SplitPrimeIdeal &ideal, const OrderParams &params, int n, int sign = 1);
OrderClass class_of_vector(const std::vector<SplitPrimeIdeal> &primes, const std::vector<i64> &exponents,
                           const OrderParams &params, int n);

std::vector<OrderClass> class_enumerate(const OrderParams &params, int n);
/// Generator of ker(Cl(O_n) -> Cl(O_{n-1})), n >= 2.
OrderClass kernel_generator(const OrderParams &params, int n);

/// Exponent vector with |e_i| <= r hitting target; smallest in the lexicographic
/// order where each coordinate runs 0, 1, -1, 2, -2, ...
std::optional<std::vector<i64>> smooth_representative(const OrderClass &target,
                                                      const std::vector<SplitPrimeIdeal> &primes, i64 r);

struct InjectivityResult {
    bool injective = true;
    std::vector<i64> first;   // earlier vector in lexicographic scan
    std::vector<i64> second;  // later vector with the same class
};

InjectivityResult exponent_map_injective(const std::vector<SplitPrimeIdeal> &primes, const std::vector<i64> &bounds,
                                         const OrderParams &params, int n);

/// Smallest depth at which [q]^2 is not principal.
int min_separation_depth(const OrderParams &params, const SplitPrimeIdeal &ideal);

/// Iterates every vector in the box prod [-r_i, r_i] in lexicographic order.
template <class Fn>
void for_each_exponent(const std::vector<i64> &bounds, Fn &&fn)
{
    std::vector<i64> e(bounds.size());
    for (size_t i = 0; i < e.size(); ++i)
        e[i] = -bounds[i];
    while (true) {
        if (!fn(static_cast<const std::vector<i64> &>(e)))
            return;
        size_t k = e.size();
        while (k > 0 && e[k - 1] == bounds[k - 1]) {
            e[k - 1] = -bounds[k - 1];
            --k;
        }
        if (k == 0)
            return;
        ++e[k - 1];
    }
}

/// Rank of an exponent in the order 0, 1, -1, 2, -2, ...
inline i64 magnitude_rank(i64 e)
{
    return e > 0 ? 2 * e - 1 : -2 * e;
}

/// Same box as for_each_exponent, coordinates visited in magnitude_rank order.
template <class Fn>
void for_each_exponent_by_size(const std::vector<i64> &bounds, Fn &&fn)
{
    std::vector<i64> ranks(bounds.size()), e(bounds.size());
    for (size_t i = 0; i < bounds.size(); ++i)
        ranks[i] = bounds[i];  // rank box [0, 2r] shifted to [-r, r]
    for_each_exponent(ranks, [&](const std::vector<i64> &k) {
        for (size_t i = 0; i < k.size(); ++i) {
            i64 rank = k[i] + bounds[i];
            e[i] = rank % 2 ? (rank + 1) / 2 : -rank / 2;
        }
        return fn(static_cast<const std::vector<i64> &>(e));
    });
}

}  // namespace osidh
