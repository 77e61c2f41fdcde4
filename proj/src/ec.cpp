#include "osidh/ec.hpp"

#include <algorithm>
#include <numeric>

#include "osidh/error.hpp"

namespace osidh {

namespace {

Poly cst(const Field *f, i64 c)
{
    return Poly::constant(f->from_int(c));
}

Poly cst(const Fp2 &c)
{
    return Poly::constant(c);
}

// K(num/den) * den^deg K, reduced mod m.
Poly compose_mod(const Poly &K, const Poly &num, const Poly &den, const Poly &m)
{
    const Field *f = m.field();
    Poly acc(f);
    Poly n = num % m, d = den % m;
    // Horner on the homogenized polynomial.
    for (int i = K.degree(); i >= 0; --i)
        acc = (acc * n + cst(K.coeff(i)) * pow_mod(d, static_cast<u128>(K.degree() - i), m)) % m;
    return acc;
}

const Field *field_of(const Curve &E)
{
    const Field *f = E.field();
    if (!f)
        fail(ErrorKind::InvalidArgument, "curve without a field");
    return f;
}

}  // namespace

Curve::Curve(const Fp2 &A, const Fp2 &B) : _A(A), _B(B)
{
    const Field *f = field();
    if (!f)
        fail(ErrorKind::InvalidArgument, "curve coefficients carry no field");
    _A = f->element(A.a(), A.b());
    _B = f->element(B.a(), B.b());
    Fp2 disc = _A * _A * _A * f->from_int(4) + _B * _B * f->from_int(27);
    if (disc.is_zero())
        fail(ErrorKind::InvalidArgument, "singular curve");
}

Fp2 Curve::j_invariant() const
{
    const Field *f = field();
    Fp2 a3 = _A * _A * _A * f->from_int(4);
    return f->from_int(1728) * a3 / (a3 + _B * _B * f->from_int(27));
}

Poly Curve::rhs() const
{
    const Field *f = field();
    return Poly(f, {_B, _A, f->zero(), f->one()});
}

// ---------------------------------------------------------------- points

bool on_curve(const Curve &E, const Point &P)
{
    if (P.infinity)
        return true;
    return P.y * P.y == E.rhs().eval(P.x);
}

Point negate(const Point &P)
{
    if (P.infinity)
        return P;
    return Point::affine(P.x, -P.y);
}

Point add(const Curve &E, const Point &P, const Point &Q)
{
    if (P.infinity)
        return Q;
    if (Q.infinity)
        return P;
    const Field *f = field_of(E);
    Fp2 slope;
    if (P.x == Q.x) {
        if ((P.y + Q.y).is_zero())
            return Point::at_infinity();
        slope = (P.x * P.x * f->from_int(3) + E.A()) / (P.y + P.y);
    } else {
        slope = (Q.y - P.y) / (Q.x - P.x);
    }
    Fp2 x = slope * slope - P.x - Q.x;
    return Point::affine(x, slope * (P.x - x) - P.y);
}

Point multiply(const Curve &E, const Point &P, i64 k)
{
    Point base = k < 0 ? negate(P) : P;
    u64 n = static_cast<u64>(k < 0 ? -k : k);
    Point acc = Point::at_infinity();
    while (n) {
        if (n & 1)
            acc = add(E, acc, base);
        base = add(E, base, base);
        n >>= 1;
    }
    return acc;
}

std::optional<Point> lift_x(const Curve &E, const Fp2 &x)
{
    const Field *f = field_of(E);
    Fp2 rhs = E.rhs().eval(x);
    auto r = distinct_roots(Poly(f, {-rhs, f->zero(), f->one()}));
    if (r.empty())
        return std::nullopt;
    return Point::affine(x, r.front());
}

Point random_point(const Curve &E, std::mt19937_64 &rng)
{
    const Field *f = field_of(E);
    for (;;) {
        if (auto P = lift_x(E, f->random(rng)))
            return *P;
    }
}

// ---------------------------------------------------------------- models

Curve base_curve(i64 disc, const Field *field)
{
    if (disc != -3 && disc != -4)
        fail(ErrorKind::InvalidArgument, "base curves exist for discriminants -3 and -4 only");
    if (kronecker(disc, field->p()) == 1)
        fail(ErrorKind::BadOrientation,
             "p = " + std::to_string(field->p()) + " splits in disc " + std::to_string(disc) + "; base curve is ordinary");
    if (disc == -3)
        return Curve(field->zero(), field->one());
    return Curve(field->one(), field->zero());
}

Curve curve_from_j(const Fp2 &j)
{
    const Field *f = j.field();
    if (!f)
        fail(ErrorKind::InvalidArgument, "j-invariant carries no field");
    if (j.is_zero())
        return Curve(f->zero(), f->one());
    if (j == f->from_int(1728))
        return Curve(f->one(), f->zero());
    // y^2 + xy = x^3 + a4 x + a6, then complete the square and the cube.
    Fp2 k = (j - f->from_int(1728)).inv();
    Fp2 a4 = -f->from_int(36) * k, a6 = -k;
    Fp2 c4 = f->one() - f->from_int(48) * a4;
    Fp2 c6 = -f->one() + f->from_int(72) * a4 - f->from_int(864) * a6;
    return Curve(-f->from_int(27) * c4, -f->from_int(54) * c6);
}

// ---------------------------------------------------------------- division polynomials

std::vector<Poly> reduced_division_polys(const Curve &E, int max_n)
{
    const Field *f = field_of(E);
    const Fp2 &A = E.A(), &B = E.B();
    Poly F = E.rhs();
    Poly F2x16 = F * F * f->from_int(16);
    std::vector<Poly> psi(static_cast<size_t>(std::max(max_n, 4)) + 1, Poly(f));
    psi[1] = cst(f, 1);
    psi[2] = cst(f, 1);
    psi[3] = Poly(f, {-A * A, B * f->from_int(12), A * f->from_int(6), f->zero(), f->from_int(3)});
    psi[4] = Poly(f, {-(B * B * f->from_int(8)) - A * A * A, -(A * B * f->from_int(4)), -(A * A * f->from_int(5)),
                      B * f->from_int(20), A * f->from_int(5), f->zero(), f->one()}) *
             f->from_int(2);
    for (int n = 5; n <= max_n; ++n) {
        int m = n / 2;
        if (n % 2) {
            Poly a = psi[m + 2] * psi[m] * psi[m] * psi[m];
            Poly b = psi[m - 1] * psi[m + 1] * psi[m + 1] * psi[m + 1];
            psi[n] = (m % 2 == 0) ? F2x16 * a - b : a - F2x16 * b;
        } else {
            psi[n] = psi[m] * (psi[m + 2] * psi[m - 1] * psi[m - 1] - psi[m - 2] * psi[m + 1] * psi[m + 1]);
        }
    }
    psi.resize(static_cast<size_t>(max_n) + 1);
    return psi;
}

Poly division_poly(const Curve &E, int m)
{
    if (m < 2)
        fail(ErrorKind::InvalidArgument, "division polynomial needs m >= 2");
    Poly fm = reduced_division_polys(E, m)[static_cast<size_t>(m)];
    if (m % 2 == 0)
        fm = E.rhs() * fm;
    return fm.monic();
}

RationalMap multiplication_x(const Curve &E, int n)
{
    if (n < 1)
        fail(ErrorKind::InvalidArgument, "multiplication map needs n >= 1");
    const Field *f = field_of(E);
    auto psi = reduced_division_polys(E, n + 1);
    Poly F4 = E.rhs() * f->from_int(4);
    Poly x = Poly::x(f);
    const Poly &a = psi[n - 1], &b = psi[n], &c = psi[n + 1];
    if (n % 2)
        return {x * b * b - F4 * a * c, b * b};
    return {F4 * x * b * b - a * c, F4 * b * b};
}

RationalMap multiplication_y(const Curve &E, int n)
{
    if (n < 1)
        fail(ErrorKind::InvalidArgument, "multiplication map needs n >= 1");
    const Field *f = field_of(E);
    auto psi = reduced_division_polys(E, n + 2);
    auto at = [&](int k) { return k < 0 ? cst(f, -1) : psi[static_cast<size_t>(k)]; };
    Poly inner = at(n + 2) * at(n - 1) * at(n - 1) - at(n - 2) * at(n + 1) * at(n + 1);
    Poly cube = psi[n] * psi[n] * psi[n];
    if (n % 2)
        return {inner, cube};
    Poly F = E.rhs();
    return {inner, F * F * f->from_int(16) * cube};
}

// ---------------------------------------------------------------- isogenies

ExplicitIsogeny identity_isogeny(const Curve &E)
{
    const Field *f = field_of(E);
    return {E, E, {cst(f, 1), 1}, {Poly::x(f), cst(f, 1)}, 1};
}

std::vector<KernelPoly> ell_kernels(const Curve &E, int ell)
{
    Poly source;
    if (ell == 2)
        source = E.rhs();
    else if (ell == 3)
        source = reduced_division_polys(E, 3)[3];
    else
        fail(ErrorKind::InvalidArgument, "explicit kernels are only enumerated for l in {2, 3}");
    std::vector<KernelPoly> out;
    for (const auto &r : distinct_roots(source))
        out.push_back({Poly::linear(r), ell});
    return out;
}

ExplicitIsogeny velu(const Curve &E, const KernelPoly &K, bool check)
{
    const Field *f = field_of(E);
    const Fp2 &A = E.A(), &B = E.B();
    Poly x = Poly::x(f);
    Poly F = E.rhs();
    const Poly &D = K.poly;
    if (K.order == 1)
        return identity_isogeny(E);
    if (D.is_zero() || !(D.lead().is_one()))
        fail(ErrorKind::BadKernel, "kernel polynomial must be monic");

    if (K.order == 2) {
        if (D.degree() != 1 || !(F % D).is_zero())
            fail(ErrorKind::BadKernel, "order-2 kernel must be a linear factor of x^3 + Ax + B");
        Fp2 x0 = -D.coeff(0);
        Fp2 v = x0 * x0 * f->from_int(3) + A;
        Curve cod(A - v * f->from_int(5), B - x0 * v * f->from_int(7));
        return {E, cod, K, {x * D + cst(v), D}, 2};
    }

    int m = K.order;
    int d = D.degree();
    if (m % 2 == 0 || d != (m - 1) / 2)
        fail(ErrorKind::BadKernel, "odd kernel of order " + std::to_string(m) + " needs degree (m-1)/2");
    if (check) {
        auto psi = reduced_division_polys(E, std::max(m + 1, 4));
        if (!(psi[m] % D).is_zero())
            fail(ErrorKind::BadKernel, "kernel polynomial does not divide the division polynomial");
        // Closure under [k] for 2 <= k <= (m-1)/2 forces a cyclic subgroup.
        for (int k = 2; k <= d; ++k) {
            auto mk = multiplication_x(E, k);
            if (!compose_mod(D, mk.num, mk.den, D).is_zero())
                fail(ErrorKind::BadKernel, "kernel roots are not closed under multiplication");
        }
    }

    Fp2 s1 = -D.coeff(d - 1);
    Fp2 s2 = d >= 2 ? D.coeff(d - 2) : f->zero();
    Fp2 s3 = d >= 3 ? -D.coeff(d - 3) : f->zero();
    Fp2 fd = f->from_int(d);
    Fp2 t = (s1 * s1 - s2 * f->from_int(2)) * f->from_int(6) + A * fd * f->from_int(2);
    Fp2 w = (s1 * s1 * s1 - s1 * s2 * f->from_int(3) + s3 * f->from_int(3)) * f->from_int(10) + A * s1 * f->from_int(6) +
            B * fd * f->from_int(4);
    Curve cod(A - t * f->from_int(5), B - w * f->from_int(7));

    // x + sum over kernel of t_Q/(x - x_Q) + u_Q/(x - x_Q)^2, cleared by D^2.
    Poly D1 = D.derivative(), D2 = D1.derivative();
    Poly lin = x * f->from_int(2 * d + 1) - cst(s1 * f->from_int(2));
    Poly g = x * x * f->from_int(6) + cst(A * f->from_int(2));
    Poly num = lin * D * D - F * f->from_int(4) * (D2 * D - D1 * D1) - g * D1 * D;
    return {E, cod, K, {num, D * D}, m};
}

// ---------------------------------------------------------------- CM action

CmAutomorphism cm_automorphism(i64 disc, const Curve &E0)
{
    const Field *f = field_of(E0);
    if (disc == -3) {
        if (!E0.A().is_zero())
            fail(ErrorKind::InvalidArgument, "zeta_3 acts only on j = 0 models with A = 0");
        auto r = distinct_roots(Poly(f, {f->one(), f->one(), f->one()}));
        return {r.front(), f->one()};
    }
    if (disc == -4) {
        if (!E0.B().is_zero())
            fail(ErrorKind::InvalidArgument, "i acts only on j = 1728 models with B = 0");
        auto r = distinct_roots(Poly(f, {f->one(), f->zero(), f->one()}));
        return {-f->one(), r.front()};
    }
    fail(ErrorKind::InvalidArgument, "no extra automorphisms for disc " + std::to_string(disc));
}

Point apply_automorphism(const CmAutomorphism &rho, const Point &P)
{
    if (P.infinity)
        return P;
    return Point::affine(rho.x_scale * P.x, rho.y_scale * P.y);
}

KernelPoly cm_eigenspace_kernel(const Curve &E0, i64 disc, u64 q, u64 eigenvalue)
{
    if (!is_prime(q) || q == 2)
        fail(ErrorKind::InvalidArgument, "eigenspace kernels need an odd prime q");
    auto rho = cm_automorphism(disc, E0);
    const Field *f = field_of(E0);
    int qi = static_cast<int>(q);
    int lam = static_cast<int>(eigenvalue % q);
    if (lam == 0)
        fail(ErrorKind::EigenvalueAmbiguous, "zero eigenvalue");
    Poly fq = reduced_division_polys(E0, qi)[static_cast<size_t>(qi)].monic();
    // rho(P) = [lam]P on both coordinates; y != 0 on E[q] - {O} for odd q.
    auto mx = multiplication_x(E0, lam);
    auto my = multiplication_y(E0, lam);
    Poly xcond = (mx.num - Poly::x(f) * rho.x_scale * mx.den) % fq;
    Poly ycond = (my.num - my.den * rho.y_scale) % fq;
    Poly K = gcd_monic(gcd_monic(fq, xcond), ycond);
    int want = (qi - 1) / 2;
    if (K.degree() > want)
        fail(ErrorKind::EigenvalueAmbiguous, "eigenspace test does not separate the eigenvalues");
    if (K.degree() < want)
        fail(ErrorKind::BadKernel, "eigenspace kernel has degree " + std::to_string(K.degree()));
    return {K, qi};
}

KernelPoly push_kernel(const ExplicitIsogeny &phi, const KernelPoly &K)
{
    if (std::gcd(phi.degree, K.order) != 1)
        fail(ErrorKind::DegreesNotCoprime, "isogeny degree and subgroup order share a factor");
    if (K.order == 1)
        return K;
    const Field *f = K.poly.field();
    // g(x, Y) = Y den(x) - num(x), by coefficients in x.
    int deg = std::max(phi.x_map.num.degree(), phi.x_map.den.degree());
    std::vector<Poly> g;
    for (int i = 0; i <= deg; ++i)
        g.push_back(Poly(f, {-phi.x_map.num.coeff(i), phi.x_map.den.coeff(i)}));
    Poly r = resultant_in_y(K.poly, g);
    Poly pushed = squarefree_part(r);
    if (pushed.degree() != K.poly.degree())
        fail(ErrorKind::BadKernel, "pushed kernel changed degree");
    return {pushed, K.order};
}

KernelPoly dual_kernel(const ExplicitIsogeny &phi)
{
    if (phi.degree == 1)
        return phi.kernel;
    Poly full = division_poly(phi.domain, phi.degree);
    auto [rest, rem] = divrem(full, phi.kernel.poly);
    if (!rem.is_zero())
        fail(ErrorKind::BadKernel, "kernel does not divide the division polynomial");
    const Field *f = rest.field();
    int deg = std::max(phi.x_map.num.degree(), phi.x_map.den.degree());
    std::vector<Poly> g;
    for (int i = 0; i <= deg; ++i)
        g.push_back(Poly(f, {-phi.x_map.num.coeff(i), phi.x_map.den.coeff(i)}));
    Poly r = squarefree_part(resultant_in_y(rest.monic(), g));
    int want = phi.degree == 2 ? 1 : (phi.degree - 1) / 2;
    if (r.degree() != want)
        fail(ErrorKind::BadKernel, "dual kernel has unexpected degree " + std::to_string(r.degree()));
    return {r, phi.degree};
}

ExplicitIsogeny explicit_step(const Curve &E, int ell, const Fp2 &target_j, const std::optional<KernelPoly> &exclude)
{
    std::optional<ExplicitIsogeny> best;
    for (const auto &K : ell_kernels(E, ell)) {
        if (exclude && K == *exclude)
            continue;
        auto phi = velu(E, K);
        if (!(phi.codomain.j_invariant() == target_j))
            continue;
        if (!best || K.poly < best->kernel.poly)
            best = std::move(phi);
    }
    if (!best)
        fail(ErrorKind::NoMatchingKernel, "no " + std::to_string(ell) + "-isogeny from j = " +
                                              E.j_invariant().to_string() + " reaches j = " + target_j.to_string());
    return *best;
}

}  // namespace osidh
