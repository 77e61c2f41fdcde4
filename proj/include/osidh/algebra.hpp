#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace osidh {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Scalar arithmetic modulo a 64-bit modulus.
u64 mul_mod(u64 x, u64 y, u64 m);
u64 pow_mod(u64 x, u128 e, u64 m);
u64 inv_mod(u64 x, u64 m);
bool is_prime(u64 n);
/// Reduces a signed decimal integer of arbitrary length modulo m.
u64 reduce_decimal(std::string_view digits, u64 m);
/// Legendre symbol of x modulo an odd prime p, in {-1, 0, 1}.
int legendre(u64 x, u64 p);

/// The pair (p, d) with F_{p^2} = F_p(u), u^2 = d, d the least positive nonresidue.
struct FieldParams {
    u64 p = 0;
    u64 d = 0;

    friend bool operator==(const FieldParams &, const FieldParams &) = default;
};

inline constexpr u64 kMaxCharacteristic = u64{1} << 62;

FieldParams create_field(u64 p);

class Field;

/// Element a + b*u of F_{p^2}. A default-constructed element is the zero of
/// whatever field it is combined with.
class Fp2 {
  public:
    Fp2() = default;
    Fp2(const Field *field, u64 a, u64 b) : _field(field), _a(a), _b(b) {}

    u64 a() const { return _a; }
    u64 b() const { return _b; }
    const Field *field() const { return _field; }

    bool is_zero() const { return _a == 0 && _b == 0; }
    bool is_one() const { return _a == 1 && _b == 0; }
    bool in_base_field() const { return _b == 0; }

    Fp2 operator-() const;
    Fp2 &operator+=(const Fp2 &y);
    Fp2 &operator-=(const Fp2 &y);
    Fp2 &operator*=(const Fp2 &y);
    Fp2 &operator/=(const Fp2 &y);

    friend Fp2 operator+(Fp2 x, const Fp2 &y) { return x += y; }
    friend Fp2 operator-(Fp2 x, const Fp2 &y) { return x -= y; }
    friend Fp2 operator*(Fp2 x, const Fp2 &y) { return x *= y; }
    friend Fp2 operator/(Fp2 x, const Fp2 &y) { return x /= y; }

    Fp2 scaled(u64 c) const;
    Fp2 inv() const;
    Fp2 pow(u128 e) const;
    Fp2 frobenius() const;

    friend bool operator==(const Fp2 &x, const Fp2 &y) { return x._a == y._a && x._b == y._b; }
    friend std::strong_ordering operator<=>(const Fp2 &x, const Fp2 &y)
    {
        if (auto c = x._a <=> y._a; c != 0)
            return c;
        return x._b <=> y._b;
    }

    /// Canonical text form "a+b*u" in decimal.
    std::string to_string() const;

  private:
    const Field *_field = nullptr;
    u64 _a = 0;
    u64 _b = 0;
};

class Field {
  public:
    explicit Field(FieldParams params) : _params(params) {}

    static std::shared_ptr<const Field> make(u64 p);

    const FieldParams &params() const { return _params; }
    u64 p() const { return _params.p; }
    u64 d() const { return _params.d; }
    u128 size() const { return u128{_params.p} * _params.p; }

    Fp2 zero() const { return {this, 0, 0}; }
    Fp2 one() const { return {this, 1, 0}; }
    Fp2 u() const { return {this, 0, 1}; }
    Fp2 element(u64 a, u64 b) const { return {this, a % _params.p, b % _params.p}; }
    Fp2 from_int(i64 x) const;
    Fp2 random(std::mt19937_64 &rng) const;

    /// Reduces a signed decimal integer of arbitrary length modulo p.
    u64 reduce_decimal(std::string_view digits) const;
    /// Parses "a+b*u" (or a bare residue "a").
    Fp2 parse(std::string_view text) const;

  private:
    FieldParams _params;
};

/// Univariate polynomial over F_{p^2}, low degree first, no trailing zeros.
class Poly {
  public:
    Poly() = default;
    explicit Poly(const Field *field) : _field(field) {}
    Poly(const Field *field, std::vector<Fp2> coeffs);

    static Poly constant(const Fp2 &c);
    static Poly x(const Field *field);
    /// X - r
    static Poly linear(const Fp2 &root);
    static Poly from_roots(const Field *field, const std::vector<Fp2> &roots);

    const Field *field() const { return _field; }
    int degree() const { return static_cast<int>(_c.size()) - 1; }
    bool is_zero() const { return _c.empty(); }
    bool is_one() const { return _c.size() == 1 && _c[0].is_one(); }
    const std::vector<Fp2> &coeffs() const { return _c; }
    Fp2 coeff(int i) const;
    Fp2 lead() const;

    Fp2 eval(const Fp2 &x) const;
    Poly derivative() const;
    Poly monic() const;

    Poly operator-() const;
    Poly &operator+=(const Poly &g);
    Poly &operator-=(const Poly &g);
    friend Poly operator+(Poly f, const Poly &g) { return f += g; }
    friend Poly operator-(Poly f, const Poly &g) { return f -= g; }
    friend Poly operator*(const Poly &f, const Poly &g);
    friend Poly operator*(const Fp2 &c, const Poly &f);
    friend Poly operator*(const Poly &f, const Fp2 &c) { return c * f; }

    friend bool operator==(const Poly &f, const Poly &g) { return f._c == g._c; }
    friend bool operator<(const Poly &f, const Poly &g);

    std::vector<std::string> encode() const;

  private:
    void trim();

    const Field *_field = nullptr;
    std::vector<Fp2> _c;
};

std::pair<Poly, Poly> divrem(const Poly &f, const Poly &g);
inline Poly operator/(const Poly &f, const Poly &g) { return divrem(f, g).first; }
inline Poly operator%(const Poly &f, const Poly &g) { return divrem(f, g).second; }

Poly gcd_monic(Poly f, Poly g);
Poly mul_mod(const Poly &f, const Poly &g, const Poly &m);
Poly pow_mod(const Poly &base, u128 e, const Poly &m);
/// Product of the distinct irreducible factors of f (requires deg f < p).
Poly squarefree_part(const Poly &f);

/// All roots of f in F_{p^2} with multiplicity, sorted by (a, b).
std::vector<Fp2> roots_in_fp2(const Poly &f, u64 seed = 0);
/// Distinct roots only.
std::vector<Fp2> distinct_roots(const Poly &f, u64 seed = 0);

/// Res_x(f, g).
Fp2 resultant(const Poly &f, const Poly &g);
/// Res_x(f(x), g(x, Y)) as a polynomial in Y for monic f, where g is given
/// by its coefficients in x, each a polynomial in Y.
Poly resultant_in_y(const Poly &f, const std::vector<Poly> &g_coeffs_in_x);

}  // namespace osidh
