#pragma once

#include <optional>
#include <vector>

#include "osidh/algebra.hpp"
#include "osidh/quadorder.hpp"

namespace osidh {

/// y^2 = x^3 + A x + B over F_{p^2}.
class Curve {
  public:
    Curve() = default;
    Curve(const Fp2 &A, const Fp2 &B);

    const Field *field() const { return _A.field() ? _A.field() : _B.field(); }
    const Fp2 &A() const { return _A; }
    const Fp2 &B() const { return _B; }
    Fp2 j_invariant() const;
    /// x^3 + A x + B
    Poly rhs() const;

    friend bool operator==(const Curve &, const Curve &) = default;

  private:
    Fp2 _A, _B;
};

/// Affine point or the point at infinity.
struct Point {
    Fp2 x, y;
    bool infinity = true;

    static Point at_infinity() { return {}; }
    static Point affine(const Fp2 &x, const Fp2 &y) { return {x, y, false}; }
    friend bool operator==(const Point &, const Point &) = default;
};

bool on_curve(const Curve &E, const Point &P);
Point negate(const Point &P);
Point add(const Curve &E, const Point &P, const Point &Q);
Point multiply(const Curve &E, const Point &P, i64 k);
/// Some point with the given x-coordinate, if y is in F_{p^2}.
std::optional<Point> lift_x(const Curve &E, const Fp2 &x);
Point random_point(const Curve &E, std::mt19937_64 &rng);

Curve base_curve(i64 disc, const Field *field);
Curve curve_from_j(const Fp2 &j);

/// Reduced division polynomials: psi_n = f_n for odd n, psi_n = 2y f_n for even n.
std::vector<Poly> reduced_division_polys(const Curve &E, int max_n);
/// Polynomial whose roots are the x-coordinates of E[m] - {O}.
Poly division_poly(const Curve &E, int m);

/// x([n]P) = num / den.
struct RationalMap {
    Poly num, den;
};
RationalMap multiplication_x(const Curve &E, int n);
/// y([n]P) = y * num / den.
RationalMap multiplication_y(const Curve &E, int n);

/// Monic polynomial vanishing on the x-coordinates of a finite subgroup.
struct KernelPoly {
    Poly poly;
    int order = 1;

    friend bool operator==(const KernelPoly &, const KernelPoly &) = default;
};

struct ExplicitIsogeny {
    Curve domain, codomain;
    KernelPoly kernel;
    RationalMap x_map;
    int degree = 1;
};

ExplicitIsogeny identity_isogeny(const Curve &E);
/// Rational subgroups of order l (l in {2, 3}).
std::vector<KernelPoly> ell_kernels(const Curve &E, int ell);
/// Quotient by K; `check` verifies that K cuts out a subgroup.
ExplicitIsogeny velu(const Curve &E, const KernelPoly &K, bool check = true);

/// The automorphism w on the base curve: (zeta x, y) for -3, (-x, i y) for -4.
struct CmAutomorphism {
    Fp2 x_scale;
    Fp2 y_scale;
};
CmAutomorphism cm_automorphism(i64 disc, const Curve &E0);
Point apply_automorphism(const CmAutomorphism &rho, const Point &P);

/// Kernel of (w - eigenvalue) on E0[q].
KernelPoly cm_eigenspace_kernel(const Curve &E0, i64 disc, u64 q, u64 eigenvalue);

/// phi(<K>) for deg phi coprime to the order of K.
KernelPoly push_kernel(const ExplicitIsogeny &phi, const KernelPoly &K);
/// Kernel of the dual isogeny on the codomain.
KernelPoly dual_kernel(const ExplicitIsogeny &phi);

/// The l-isogeny from E to target_j, skipping the excluded kernel.
ExplicitIsogeny explicit_step(const Curve &E, int ell, const Fp2 &target_j, const std::optional<KernelPoly> &exclude);

}  // namespace osidh
