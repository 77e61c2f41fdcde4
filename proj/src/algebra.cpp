#include "osidh/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>

#include "osidh/error.hpp"

namespace osidh {

u64 mul_mod(u64 x, u64 y, u64 m)
{
    return static_cast<u64>((u128{x} * y) % m);
}

u64 pow_mod(u64 x, u128 e, u64 m)
{
    u64 r = 1 % m;
    x %= m;
    while (e) {
        if (e & 1)
            r = mul_mod(r, x, m);
        x = mul_mod(x, x, m);
        e >>= 1;
    }
    return r;
}

u64 inv_mod(u64 x, u64 m)
{
    i64 r0 = static_cast<i64>(m), r1 = static_cast<i64>(x % m);
    i64 s0 = 0, s1 = 1;
    while (r1) {
        i64 q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
    }
    if (r0 != 1)
        fail(ErrorKind::DivisionByZero, "element is not invertible modulo " + std::to_string(m));
    return static_cast<u64>(s0 < 0 ? s0 + static_cast<i64>(m) : s0);
}

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % small == 0)
            return n == small;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // deterministic witness set for 64-bit inputs
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

int legendre(u64 x, u64 p)
{
    x %= p;
    if (x == 0)
        return 0;
    return pow_mod(x, (p - 1) / 2, p) == 1 ? 1 : -1;
}

u64 reduce_decimal(std::string_view digits, u64 m)
{
    bool negative = false;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (digits.empty())
        fail(ErrorKind::ParseError, "empty integer");
    u64 r = 0;
    for (char ch : digits) {
        if (ch < '0' || ch > '9')
            fail(ErrorKind::ParseError, "invalid digit in integer");
        r = (mul_mod(r, 10, m) + static_cast<u64>(ch - '0')) % m;
    }
    return negative && r ? m - r : r;
}

FieldParams create_field(u64 p)
{
    if (p < 5)
        fail(ErrorKind::TooSmall, "characteristic must be at least 5, got " + std::to_string(p));
    if (p >= kMaxCharacteristic)
        fail(ErrorKind::TooLarge, "characteristic must be below 2^62");
    if (!is_prime(p))
        fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    u64 d = 2;
    while (legendre(d, p) != -1)
        ++d;
    return {p, d};
}

// ---------------------------------------------------------------- Fp2

namespace {

const Field *pick(const Fp2 &x, const Fp2 &y)
{
    return x.field() ? x.field() : y.field();
}

}  // namespace

Fp2 Fp2::operator-() const
{
    if (!_field)
        return *this;
    u64 p = _field->p();
    return {_field, _a ? p - _a : 0, _b ? p - _b : 0};
}

Fp2 &Fp2::operator+=(const Fp2 &y)
{
    _field = pick(*this, y);
    if (!_field)
        return *this;
    u64 p = _field->p();
    _a += y._a;
    if (_a >= p)
        _a -= p;
    _b += y._b;
    if (_b >= p)
        _b -= p;
    return *this;
}

Fp2 &Fp2::operator-=(const Fp2 &y)
{
    return *this += -y;
}

Fp2 &Fp2::operator*=(const Fp2 &y)
{
    _field = pick(*this, y);
    if (!_field)
        return *this;
    u64 p = _field->p();
    u64 bd = mul_mod(_b, y._b, p);
    u128 re = u128{_a} * y._a + u128{bd} * _field->d();
    u128 im = u128{_a} * y._b + u128{_b} * y._a;
    _a = static_cast<u64>(re % p);
    _b = static_cast<u64>(im % p);
    return *this;
}

Fp2 &Fp2::operator/=(const Fp2 &y)
{
    return *this *= y.inv();
}

Fp2 Fp2::scaled(u64 c) const
{
    if (!_field)
        return *this;
    u64 p = _field->p();
    c %= p;
    return {_field, mul_mod(_a, c, p), mul_mod(_b, c, p)};
}

Fp2 Fp2::inv() const
{
    if (is_zero() || !_field)
        fail(ErrorKind::DivisionByZero, "inverse of zero in F_p^2");
    u64 p = _field->p();
    // (a + bu)^-1 = (a - bu) / (a^2 - d b^2)
    u64 norm = (mul_mod(_a, _a, p) + p - mul_mod(mul_mod(_b, _b, p), _field->d(), p)) % p;
    u64 ninv = inv_mod(norm, p);
    return {_field, mul_mod(_a, ninv, p), mul_mod(_b ? p - _b : 0, ninv, p)};
}

Fp2 Fp2::pow(u128 e) const
{
    Fp2 r = _field ? _field->one() : Fp2{};
    Fp2 x = *this;
    while (e) {
        if (e & 1)
            r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

Fp2 Fp2::frobenius() const
{
    if (!_field)
        return *this;
    return {_field, _a, _b ? _field->p() - _b : 0};
}

std::string Fp2::to_string() const
{
    return std::to_string(_a) + "+" + std::to_string(_b) + "*u";
}

// ---------------------------------------------------------------- Field

std::shared_ptr<const Field> Field::make(u64 p)
{
    return std::make_shared<const Field>(create_field(p));
}

Fp2 Field::from_int(i64 x) const
{
    i64 r = x % static_cast<i64>(p());
    if (r < 0)
        r += static_cast<i64>(p());
    return {this, static_cast<u64>(r), 0};
}

Fp2 Field::random(std::mt19937_64 &rng) const
{
    std::uniform_int_distribution<u64> dist(0, p() - 1);
    u64 a = dist(rng);
    u64 b = dist(rng);
    return {this, a, b};
}

u64 Field::reduce_decimal(std::string_view digits) const
{
    return osidh::reduce_decimal(digits, p());
}

namespace {

u64 parse_residue(std::string_view s, u64 p)
{
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        fail(ErrorKind::ParseError, "invalid residue '" + std::string(s) + "'");
    if (v >= p)
        fail(ErrorKind::ParseError, "residue " + std::string(s) + " not reduced modulo " + std::to_string(p));
    return v;
}

}  // namespace

Fp2 Field::parse(std::string_view text) const
{
    auto plus = text.find('+');
    if (plus == std::string_view::npos)
        return {this, parse_residue(text, p()), 0};
    auto a = text.substr(0, plus);
    auto rest = text.substr(plus + 1);
    if (rest.size() < 2 || rest.substr(rest.size() - 2) != "*u")
        fail(ErrorKind::ParseError, "expected 'a+b*u', got '" + std::string(text) + "'");
    return {this, parse_residue(a, p()), parse_residue(rest.substr(0, rest.size() - 2), p())};
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Field *field, std::vector<Fp2> coeffs) : _field(field), _c(std::move(coeffs))
{
    for (auto &c : _c) {
        if (!c.field() && _field)
            c = Fp2(_field, c.a(), c.b());
    }
    trim();
}

void Poly::trim()
{
    while (!_c.empty() && _c.back().is_zero())
        _c.pop_back();
}

Poly Poly::constant(const Fp2 &c)
{
    return Poly(c.field(), {c});
}

Poly Poly::x(const Field *field)
{
    return Poly(field, {field->zero(), field->one()});
}

Poly Poly::linear(const Fp2 &root)
{
    const Field *f = root.field();
    return Poly(f, {-root, f->one()});
}

Poly Poly::from_roots(const Field *field, const std::vector<Fp2> &roots)
{
    Poly r = Poly::constant(field->one());
    for (const auto &z : roots)
        r = r * Poly::linear(Fp2(field, z.a(), z.b()));
    return r;
}

Fp2 Poly::coeff(int i) const
{
    if (i < 0 || i >= static_cast<int>(_c.size()))
        return _field ? _field->zero() : Fp2{};
    return _c[i];
}

Fp2 Poly::lead() const
{
    return _c.empty() ? Fp2{} : _c.back();
}

Fp2 Poly::eval(const Fp2 &x) const
{
    Fp2 r = _field ? _field->zero() : Fp2{};
    for (auto it = _c.rbegin(); it != _c.rend(); ++it)
        r = r * x + *it;
    return r;
}

Poly Poly::derivative() const
{
    if (_c.size() <= 1)
        return Poly(_field);
    std::vector<Fp2> d(_c.size() - 1);
    for (size_t i = 1; i < _c.size(); ++i)
        d[i - 1] = _c[i].scaled(i);
    return Poly(_field, std::move(d));
}

Poly Poly::monic() const
{
    if (_c.empty())
        return *this;
    return lead().inv() * *this;
}

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto &c : r._c)
        c = -c;
    return r;
}

Poly &Poly::operator+=(const Poly &g)
{
    if (!_field)
        _field = g._field;
    if (g._c.size() > _c.size())
        _c.resize(g._c.size(), _field ? _field->zero() : Fp2{});
    for (size_t i = 0; i < g._c.size(); ++i)
        _c[i] += g._c[i];
    trim();
    return *this;
}

Poly &Poly::operator-=(const Poly &g)
{
    return *this += -g;
}

Poly operator*(const Poly &f, const Poly &g)
{
    const Field *field = f._field ? f._field : g._field;
    if (f.is_zero() || g.is_zero())
        return Poly(field);
    std::vector<Fp2> r(f._c.size() + g._c.size() - 1, field->zero());
    for (size_t i = 0; i < f._c.size(); ++i) {
        if (f._c[i].is_zero())
            continue;
        for (size_t j = 0; j < g._c.size(); ++j)
            r[i + j] += f._c[i] * g._c[j];
    }
    return Poly(field, std::move(r));
}

Poly operator*(const Fp2 &c, const Poly &f)
{
    Poly r = f;
    if (!r._field)
        r._field = c.field();
    for (auto &x : r._c)
        x *= c;
    r.trim();
    return r;
}

bool operator<(const Poly &f, const Poly &g)
{
    if (f.degree() != g.degree())
        return f.degree() < g.degree();
    // compare from the constant term up
    return std::lexicographical_compare(f._c.begin(), f._c.end(), g._c.begin(), g._c.end());
}

std::vector<std::string> Poly::encode() const
{
    std::vector<std::string> out;
    out.reserve(_c.size());
    for (const auto &c : _c)
        out.push_back(c.to_string());
    return out;
}

std::pair<Poly, Poly> divrem(const Poly &f, const Poly &g)
{
    if (g.is_zero())
        fail(ErrorKind::DivisionByZero, "polynomial division by zero");
    const Field *field = f.field() ? f.field() : g.field();
    if (f.degree() < g.degree())
        return {Poly(field), f};
    std::vector<Fp2> r = f.coeffs();
    std::vector<Fp2> q(f.degree() - g.degree() + 1, field->zero());
    Fp2 linv = g.lead().inv();
    int dg = g.degree();
    for (int i = f.degree(); i >= dg; --i) {
        Fp2 c = r[i] * linv;
        q[i - dg] = c;
        if (c.is_zero())
            continue;
        for (int k = 0; k <= dg; ++k)
            r[i - dg + k] -= c * g.coeffs()[k];
    }
    r.resize(dg);
    return {Poly(field, std::move(q)), Poly(field, std::move(r))};
}

Poly gcd_monic(Poly f, Poly g)
{
    while (!g.is_zero()) {
        Poly r = f % g;
        f = std::move(g);
        g = std::move(r);
    }
    return f.monic();
}

Poly mul_mod(const Poly &f, const Poly &g, const Poly &m)
{
    return (f * g) % m;
}

Poly pow_mod(const Poly &base, u128 e, const Poly &m)
{
    const Field *field = base.field() ? base.field() : m.field();
    Poly r = Poly::constant(field->one()) % m;
    Poly x = base % m;
    while (e) {
        if (e & 1)
            r = mul_mod(r, x, m);
        x = mul_mod(x, x, m);
        e >>= 1;
    }
    return r;
}

Poly squarefree_part(const Poly &f)
{
    if (f.degree() <= 0)
        return f.monic();
    Poly g = gcd_monic(f, f.derivative());
    return (f / g).monic();
}

namespace {

void split_roots(const Poly &g, std::mt19937_64 &rng, std::vector<Fp2> &out)
{
    const Field *field = g.field();
    if (g.degree() <= 0)
        return;
    if (g.degree() == 1) {
        out.push_back(-(g.coeff(0) / g.coeff(1)));
        return;
    }
    u128 half = (field->size() - 1) / 2;
    Poly x = Poly::x(field);
    for (;;) {
        Poly shifted = x + Poly::constant(field->random(rng));
        Poly w = pow_mod(shifted, half, g) - Poly::constant(field->one());
        Poly h = gcd_monic(g, w);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            split_roots(h, rng, out);
            split_roots(g / h, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Fp2> distinct_roots(const Poly &f, u64 seed)
{
    if (f.is_zero())
        fail(ErrorKind::InvalidArgument, "roots of the zero polynomial");
    if (f.degree() <= 0)
        return {};
    const Field *field = f.field();
    Poly fm = f.monic();
    Poly x = Poly::x(field);
    Poly frob = pow_mod(x, field->size(), fm);
    Poly g = gcd_monic(fm, frob - x);
    std::mt19937_64 rng(seed);
    std::vector<Fp2> out;
    split_roots(g, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Fp2> roots_in_fp2(const Poly &f, u64 seed)
{
    std::vector<Fp2> out;
    for (const auto &r : distinct_roots(f, seed)) {
        Poly rest = f;
        Poly lin = Poly::linear(r);
        for (;;) {
            auto [q, rem] = divrem(rest, lin);
            if (!rem.is_zero())
                break;
            out.push_back(r);
            rest = std::move(q);
        }
    }
    return out;
}

Fp2 resultant(const Poly &f, const Poly &g)
{
    const Field *field = f.field() ? f.field() : g.field();
    if (f.is_zero() || g.is_zero())
        return field ? field->zero() : Fp2{};
    Poly a = f, b = g;
    Fp2 res = field->one();
    for (;;) {
        int da = a.degree(), db = b.degree();
        if (db == 0)
            return res * b.lead().pow(static_cast<u128>(da));
        if (da == 0)
            return res * a.lead().pow(static_cast<u128>(db));
        Poly r = a % b;
        if (r.is_zero())
            return field->zero();
        if ((da & 1) && (db & 1))
            res = -res;
        res *= b.lead().pow(static_cast<u128>(da - r.degree()));
        a = std::move(b);
        b = std::move(r);
    }
}

Poly resultant_in_y(const Poly &f, const std::vector<Poly> &g)
{
    const Field *field = f.field();
    int dy = 0;
    for (const auto &c : g)
        dy = std::max(dy, c.degree());
    int bound = f.degree() * dy;
    int npts = bound + 1;
    if (static_cast<u64>(npts) >= field->p())
        fail(ErrorKind::TooLarge, "field too small for resultant interpolation");
    Poly fm = f.monic();
    std::vector<Fp2> xs(npts), ys(npts);
    for (int k = 0; k < npts; ++k) {
        xs[k] = field->from_int(k);
        std::vector<Fp2> coeffs;
        coeffs.reserve(g.size());
        for (const auto &c : g)
            coeffs.push_back(c.eval(xs[k]));
        ys[k] = resultant(fm, Poly(field, std::move(coeffs)));
    }
    // Newton divided differences
    std::vector<Fp2> dd = ys;
    for (int level = 1; level < npts; ++level) {
        for (int k = npts - 1; k >= level; --k)
            dd[k] = (dd[k] - dd[k - 1]) / (xs[k] - xs[k - level]);
    }
    Poly r = Poly::constant(dd[npts - 1]);
    Poly y = Poly::x(field);
    for (int k = npts - 2; k >= 0; --k)
        r = r * (y - Poly::constant(xs[k])) + Poly::constant(dd[k]);
    return r;
}

}  // namespace osidh
