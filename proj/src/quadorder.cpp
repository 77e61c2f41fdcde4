#include "osidh/quadorder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "osidh/error.hpp"

namespace osidh {

namespace {

u64 reduce(i64 x, u64 m)
{
    i64 r = x % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

bool coprime_to(u64 x, u64 ell)
{
    return x % ell != 0;
}

struct Elt {
    u64 a, b;
};

// (a + b w)(c + d w) with w^2 = -t w - s, everything mod m.
Elt mul(const OrderParams &P, Elt x, Elt y, u64 m)
{
    u64 ac = mul_mod(x.a, y.a, m), bd = mul_mod(x.b, y.b, m);
    u64 ad = mul_mod(x.a, y.b, m), bc = mul_mod(x.b, y.a, m);
    u64 s = reduce(P.s, m), t = reduce(P.t, m);
    u64 a = (ac + m - mul_mod(s, bd, m)) % m;
    u64 b = ((ad + bc) % m + m - mul_mod(t, bd, m)) % m;
    return {a, b};
}

u64 norm_mod(const OrderParams &P, Elt x, u64 m)
{
    u64 aa = mul_mod(x.a, x.a, m), ab = mul_mod(x.a, x.b, m), bb = mul_mod(x.b, x.b, m);
    return (aa + m - mul_mod(reduce(P.t, m), ab, m) + mul_mod(reduce(P.s, m), bb, m)) % m;
}

// Units of O_K modulo {+1, -1}; the sign is absorbed by the scalars.
std::vector<Elt> unit_reps(const OrderParams &P, u64 m)
{
    std::vector<Elt> u{{1 % m, 0}};
    if (P.disc == -3) {
        u.push_back({0, 1 % m});
        u.push_back({reduce(-1, m), reduce(-1, m)});  // w^2 = -1 - w
    } else if (P.disc == -4) {
        u.push_back({0, 1 % m});
    }
    return u;
}

Elt scale_out(const OrderParams &P, Elt x, u64 m)
{
    if (coprime_to(x.b, P.ell)) {
        u64 inv = inv_mod(x.b, m);
        return {mul_mod(x.a, inv, m), 1 % m};
    }
    u64 inv = inv_mod(x.a, m);
    return {1 % m, mul_mod(x.b, inv, m)};
}

}  // namespace

int kronecker(i64 a, u64 m)
{
    if (m == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    while (m % 2 == 0) {
        m /= 2;
        i64 r = ((a % 8) + 8) % 8;
        if (r % 2 == 0)
            return 0;
        if (r == 3 || r == 5)
            result = -result;
    }
    if (m == 1)
        return result;
    // Jacobi symbol (a/m) for odd m.
    u64 x = reduce(a, m), y = m;
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            if (y % 8 == 3 || y % 8 == 5)
                result = -result;
        }
        std::swap(x, y);
        if (x % 4 == 3 && y % 4 == 3)
            result = -result;
        x %= y;
    }
    return y == 1 ? result : 0;
}

int unit_index(i64 disc)
{
    if (disc == -3)
        return 3;
    if (disc == -4)
        return 2;
    return 1;
}

OrderParams OrderParams::make(i64 disc, u64 ell)
{
    if (disc >= 0 || (((disc % 4) + 4) % 4 != 0 && ((disc % 4) + 4) % 4 != 1))
        fail(ErrorKind::InvalidArgument, "not an imaginary quadratic discriminant: " + std::to_string(disc));
    static const std::set<i64> class_number_one{-3, -4, -7, -8, -11, -19, -43, -67, -163};
    if (!class_number_one.count(disc))
        fail(ErrorKind::InvalidArgument, "discriminant " + std::to_string(disc) + " does not have class number one");
    if (!is_prime(ell))
        fail(ErrorKind::NotPrime, "l = " + std::to_string(ell) + " is not prime");
    if (kronecker(disc, ell) != -1)
        fail(ErrorKind::InvalidArgument, "l = " + std::to_string(ell) + " is not inert in disc " + std::to_string(disc));
    OrderParams P;
    P.disc = disc;
    P.ell = ell;
    if (((disc % 4) + 4) % 4 == 1) {
        P.t = 1;
        P.s = (1 - disc) / 4;
    } else {
        P.t = 0;
        P.s = -disc / 4;
    }
    return P;
}

u64 OrderParams::modulus(int n) const
{
    if (n < 0)
        fail(ErrorKind::InvalidArgument, "negative depth");
    u128 m = 1;
    for (int i = 0; i < n; ++i) {
        m *= ell;
        if (m >= (u128{1} << 62))
            fail(ErrorKind::TooLarge, "l^n exceeds 2^62");
    }
    return static_cast<u64>(m);
}

u64 class_number(const OrderParams &P, int n)
{
    if (n <= 0)
        return 1;
    u64 h = static_cast<u64>(static_cast<i64>(P.ell) - kronecker(P.disc, P.ell));
    h *= P.modulus(n - 1);
    return h / static_cast<u64>(unit_index(P.disc));
}

// ---------------------------------------------------------------- OrderClass

OrderClass OrderClass::canonical(const OrderParams &P, int n, u64 a, u64 b)
{
    u64 m = P.modulus(n);
    if (m == 1)
        return {P, n, 0, 0};
    Elt x{a % m, b % m};
    if (!coprime_to(norm_mod(P, x, m) % P.ell, P.ell))
        fail(ErrorKind::InvalidArgument, "element is not a unit modulo l^n");
    Elt best{m, m};
    for (const Elt &u : unit_reps(P, m)) {
        Elt y = scale_out(P, mul(P, x, u, m), m);
        if (std::pair{y.a, y.b} < std::pair{best.a, best.b})
            best = y;
    }
    return {P, n, best.a, best.b};
}

OrderClass OrderClass::from_element(const OrderParams &P, int n, i64 a, i64 b)
{
    u64 m = P.modulus(n);
    return canonical(P, n, reduce(a, m), reduce(b, m));
}

OrderClass OrderClass::identity(const OrderParams &P, int n)
{
    return from_element(P, n, 1, 0);
}

bool OrderClass::is_identity() const
{
    return *this == identity(_params, _n);
}

OrderClass operator*(const OrderClass &x, const OrderClass &y)
{
    if (x._n != y._n || !(x._params == y._params))
        fail(ErrorKind::DepthMismatch, "class operands live in different groups");
    u64 m = x._params.modulus(x._n);
    Elt z = mul(x._params, {x._a, x._b}, {y._a, y._b}, m);
    return OrderClass::canonical(x._params, x._n, z.a, z.b);
}

bool operator==(const OrderClass &x, const OrderClass &y)
{
    if (x._n != y._n || !(x._params == y._params))
        fail(ErrorKind::DepthMismatch, "class operands live in different groups");
    return x._a == y._a && x._b == y._b;
}

OrderClass OrderClass::inv() const
{
    // The conjugate is the inverse up to the rational norm.
    u64 m = _params.modulus(_n);
    u64 t = reduce(_params.t, m);
    return canonical(_params, _n, (_a + m - mul_mod(t, _b, m)) % m, (m - _b) % m);
}

OrderClass OrderClass::pow(i64 e) const
{
    OrderClass base = e < 0 ? inv() : *this;
    u64 k = static_cast<u64>(e < 0 ? -e : e);
    OrderClass acc = identity(_params, _n);
    while (k) {
        if (k & 1)
            acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

u64 OrderClass::order() const
{
    OrderClass id = identity(_params, _n);
    OrderClass x = *this;
    u64 k = 1;
    while (!(x == id)) {
        x = x * *this;
        ++k;
    }
    return k;
}

OrderClass OrderClass::project(int depth) const
{
    if (depth > _n || depth < 0)
        fail(ErrorKind::DepthMismatch, "projection target deeper than source");
    return canonical(_params, depth, _a, _b);
}

OrderClass OrderClass::lift(int depth) const
{
    if (depth < _n)
        fail(ErrorKind::DepthMismatch, "lift target shallower than source");
    if (_n == 0)
        return identity(_params, depth);
    return canonical(_params, depth, _a, _b);
}

std::string OrderClass::to_string() const
{
    return "[" + std::to_string(_a) + "+" + std::to_string(_b) + "w mod " + std::to_string(_params.ell) + "^" +
           std::to_string(_n) + "]";
}

// ---------------------------------------------------------------- split primes

std::pair<i64, i64> ideal_generator(const OrderParams &P, u64 q, u64 eigenvalue)
{
    // Norm form a^2 - t ab + s b^2 = q bounds |b| <= 2 sqrt(q/|D|) and |a| <= 2 sqrt(q s).
    i64 bmax = static_cast<i64>(std::sqrt(4.0 * static_cast<double>(q) / static_cast<double>(-P.disc))) + 2;
    i64 amax = static_cast<i64>(std::sqrt(4.0 * static_cast<double>(q) * static_cast<double>(P.s))) + 2;
    // Smallest positive b first, then smallest a: picks 3 + w over its associates -1 + 2w, 2 + 3w.
    for (i64 b = 1; b <= bmax; ++b) {
        for (i64 a = -amax; a <= amax; ++a) {
            i64 norm = a * a - P.t * a * b + P.s * b * b;
            if (norm != static_cast<i64>(q))
                continue;
            if (reduce(a + b * static_cast<i64>(eigenvalue), q) == 0)
                return {a, b};
        }
    }
    fail(ErrorKind::NotFound, "no generator of norm " + std::to_string(q));
}

SplitPrimeIdeal split_prime(const OrderParams &P, u64 q)
{
    if (!is_prime(q) || q == 2)
        fail(ErrorKind::NotPrime, "q = " + std::to_string(q) + " must be an odd prime");
    if (q == P.ell)
        fail(ErrorKind::InvalidArgument, "q must differ from l");
    if (kronecker(P.disc, q) != 1)
        fail(ErrorKind::NotSplit, "q = " + std::to_string(q) + " does not split in disc " + std::to_string(P.disc));
    std::vector<u64> roots;
    for (u64 x = 0; x < q; ++x) {
        i64 v = static_cast<i64>(x * x) + P.t * static_cast<i64>(x) + P.s;
        if (reduce(v, q) == 0)
            roots.push_back(x);
    }
    if (roots.size() != 2)
        fail(ErrorKind::NotSplit, "eigenvalue equation has no distinct roots mod " + std::to_string(q));
    SplitPrimeIdeal I;
    I.q = q;
    I.lambda = roots[0];
    I.lambda_bar = roots[1];
    std::tie(I.a, I.b) = ideal_generator(P, q, I.lambda);
    return I;
}

OrderClass class_embed(const SplitPrimeIdeal &I, const OrderParams &P, int n, int sign)
{
    if (sign > 0)
        return OrderClass::from_element(P, n, I.a, I.b);
    return OrderClass::from_element(P, n, I.a - P.t * I.b, -I.b);
}

OrderClass class_of_vector(const std::vector<SplitPrimeIdeal> &primes, const std::vector<i64> &e,
                           const OrderParams &P, int n)
{
    if (primes.size() != e.size())
        fail(ErrorKind::InvalidArgument, "exponent vector length differs from prime count");
    OrderClass acc = OrderClass::identity(P, n);
    for (size_t i = 0; i < primes.size(); ++i)
        acc = acc * class_embed(primes[i], P, n).pow(e[i]);
    return acc;
}

std::vector<OrderClass> class_enumerate(const OrderParams &P, int n)
{
    if (class_number(P, n) > (u64{1} << 20))
        fail(ErrorKind::TooLarge, "class group too large to enumerate");
    u64 m = P.modulus(n);
    if (m == 1)
        return {OrderClass::identity(P, n)};
    // Every coset has a representative x + w or 1 + y w with l | y.
    std::set<OrderClass> seen;
    auto visit = [&](u64 a, u64 b) {
        if (norm_mod(P, {a, b}, m) % P.ell != 0)
            seen.insert(OrderClass::from_element(P, n, static_cast<i64>(a), static_cast<i64>(b)));
    };
    for (u64 x = 0; x < m; ++x)
        visit(x, 1);
    for (u64 y = 0; y < m; y += P.ell)
        visit(1, y);
    return {seen.begin(), seen.end()};
}

OrderClass kernel_generator(const OrderParams &P, int n)
{
    if (n < 2)
        fail(ErrorKind::InvalidArgument, "kernel generator needs depth >= 2");
    i64 step = static_cast<i64>(P.modulus(n - 1));
    for (i64 y = 0; y < static_cast<i64>(P.ell); ++y) {
        for (i64 x = 0; x < static_cast<i64>(P.ell); ++x) {
            auto c = OrderClass::from_element(P, n, 1 + step * x, step * y);
            if (!c.is_identity())
                return c;
        }
    }
    fail(ErrorKind::NotFound, "kernel of the projection is trivial");
}

std::optional<std::vector<i64>> smooth_representative(const OrderClass &target,
                                                      const std::vector<SplitPrimeIdeal> &primes, i64 r)
{
    const auto &P = target.params();
    int n = target.depth();
    size_t t = primes.size();
    if (t == 0)
        return target.is_identity() ? std::optional<std::vector<i64>>(std::vector<i64>{}) : std::nullopt;
    size_t left = t / 2, right = t - left;
    std::vector<SplitPrimeIdeal> lp(primes.begin(), primes.begin() + static_cast<long>(left));
    std::vector<SplitPrimeIdeal> rp(primes.begin() + static_cast<long>(left), primes.end());

    // First visit keeps the smallest right half for each class.
    std::map<OrderClass, std::vector<i64>> right_table;
    for_each_exponent_by_size(std::vector<i64>(right, r), [&](const std::vector<i64> &e) {
        right_table.emplace(class_of_vector(rp, e, P, n), e);
        return true;
    });
    std::optional<std::vector<i64>> found;
    for_each_exponent_by_size(std::vector<i64>(left, r), [&](const std::vector<i64> &e) {
        auto need = target * class_of_vector(lp, e, P, n).inv();
        auto it = right_table.find(need);
        if (it == right_table.end())
            return true;
        std::vector<i64> v = e;
        v.insert(v.end(), it->second.begin(), it->second.end());
        found = std::move(v);
        return false;
    });
    return found;
}

InjectivityResult exponent_map_injective(const std::vector<SplitPrimeIdeal> &primes, const std::vector<i64> &bounds,
                                         const OrderParams &P, int n)
{
    InjectivityResult res;
    std::map<OrderClass, std::vector<i64>> seen;
    for_each_exponent(bounds, [&](const std::vector<i64> &e) {
        auto [it, fresh] = seen.emplace(class_of_vector(primes, e, P, n), e);
        if (fresh)
            return true;
        res.injective = false;
        res.first = it->second;
        res.second = e;
        return false;
    });
    return res;
}

int min_separation_depth(const OrderParams &P, const SplitPrimeIdeal &I)
{
    for (int i = 0;; ++i) {
        if (!class_embed(I, P, i).pow(2).is_identity())
            return i;
    }
}

}  // namespace osidh
