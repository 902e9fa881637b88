// Boundary symbol algebra for the elastic displacement-to-traction map.
//
// Closed-form evaluation, at boundary phase-space points, of:
//   * the one-sided principal symbol (a Hermitian 3x3 matrix of degree 1),
//   * its outgoing-solution factorization (U_out, U_out^-1, M_out),
//   * the exact two-stage unitary diagonalization W = V0 V1 and eigenvalues,
//   * the elliptic scalar factor e0 that divides out the surface-wave root,
//   * the interface jump symbol (two-sided) and its diagonalization,
//   * the first-order correction scalar r0 produced by conjugating the
//     operator by W and dividing by e0, evaluated by verified central
//     differences of the closed-form symbols.
//
// Matrix entries are expressed in a g-orthonormal covector frame at the base
// point (components xif with Euclidean norm |xi|_g); for the identity metric
// this is the coordinate frame and the map is the identity.
#pragma once

#include "raystone/dispersion.hpp"
#include "raystone/material.hpp"
#include "raystone/speed_jets.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace raystone {

template <class S>
using Cx = std::complex<S>;

// ---------------------------------------------------------------------------
// Per-point scalar data shared by all symbol assembly routines.

template <class S>
struct SymbolFrame {
  MaterialPoint<S> m;     // material at the base point (primary side)
  S tau{};                // frequency
  Vec2<S> xif;            // covector components in the g-orthonormal frame
  S n{};                  // |xi'|_g == Euclidean norm of xif
  S s{};                  // slowness tau / n
  S a{}, b{}, theta_bar{};  // unit-slowness kernels
  S alpha{}, beta{}, theta{};  // alpha = n a, beta = n b, theta = n^2 theta_bar
  S denom{};              // n^2 - alpha beta = n^2 (1 - a b) > 0
};

namespace detail {

// Principal square root of an SPD 2x2 matrix (closed form).
template <class S>
Mat2<S> spd_sqrt(const Mat2<S>& m) {
  using std::sqrt;
  const S s0 = sqrt(m.determinant());
  const S t = sqrt(m.trace() + S(2) * s0);
  return (m + s0 * Mat2<S>::Identity()) / t;
}

// Frame components of xi: xif = sqrt(g^-1) xi, so |xif|_2 = |xi|_g.
template <class S>
Vec2<S> frame_components(const BoundaryMetric<S>& g, const Vec2<S>& x, const Vec2<S>& xi) {
  if (g.identity()) return xi;
  return spd_sqrt<S>(g.inverse_at(x)) * xi;
}

}  // namespace detail

// Build the shared scalar frame; throws OutsideEllipticInterior whenever the
// strict interior condition fails (tau <= 0, zero covector, slowness at or
// beyond the shear speed, or the denominator n^2 - alpha beta too close to 0).
template <class S>
SymbolFrame<S> make_symbol_frame(const EllipticPoint<S>& pt, const MaterialPoint<S>& m,
                                 const BoundaryMetric<S>& g) {
  SymbolFrame<S> f;
  f.m = m;
  f.tau = pt.tau;
  if (!(pt.tau > S(0))) throw OutsideEllipticInterior("tau must be positive");
  f.xif = detail::frame_components(g, pt.x, pt.xi);
  f.n = f.xif.norm();
  if (!(f.n > S(0))) throw OutsideEllipticInterior("covector must be nonzero");
  f.s = f.tau / f.n;
  const S cs = m.cs();
  if (!(f.s * f.s / (cs * cs) <= S(1) - S(1e-10))) {
    throw OutsideEllipticInterior("slowness at or beyond the shear speed");
  }
  DispersionKernels<S> k = kernels(f.s, m);
  f.a = k.a;
  f.b = k.b;
  f.theta_bar = k.theta_bar;
  f.alpha = f.n * k.a;
  f.beta = f.n * k.b;
  f.theta = f.n * f.n * k.theta_bar;
  f.denom = f.n * f.n * (S(1) - k.a * k.b);
  if (!(f.denom > S(1e-8) * f.n * f.n)) {
    throw OutsideEllipticInterior("denominator |xi|^2 - alpha beta too small");
  }
  return f;
}

template <class S>
SymbolFrame<S> make_symbol_frame(const EllipticPoint<S>& pt, const MaterialField<S>& m,
                                 const BoundaryMetric<S>& g) {
  return make_symbol_frame(pt, m.at(pt.x), g);
}

// ---------------------------------------------------------------------------
// Symbol container.

template <class S>
struct Symbol3 {
  CMat3<S> entries = CMat3<S>::Zero();
  EllipticPoint<S> point{};
};

namespace detail {

// Numerator matrix of the one-sided principal symbol. `sgn = -1` evaluates
// the opposite-side variant (both decay radicals alpha, beta negated; the
// shear product a b and theta are unchanged).
template <class S>
CMat3<S> dn_numerator(const SymbolFrame<S>& f, S sgn) {
  const Cx<S> i(S(0), S(1));
  const S x1 = f.xif[0], x2 = f.xif[1];
  const S rt2 = f.m.rho * f.tau * f.tau;
  const S al = sgn * f.alpha, be = sgn * f.beta;
  const S mu = f.m.mu, th = f.theta;
  CMat3<S> nmat;
  nmat(0, 0) = Cx<S>(be * rt2 + mu * (al - be) * x2 * x2);
  nmat(0, 1) = Cx<S>(-mu * (al - be) * x1 * x2);
  nmat(0, 2) = -i * mu * th * x1;
  nmat(1, 0) = nmat(0, 1);
  nmat(1, 1) = Cx<S>(be * rt2 + mu * (al - be) * x1 * x1);
  nmat(1, 2) = -i * mu * th * x2;
  nmat(2, 0) = i * mu * th * x1;
  nmat(2, 1) = i * mu * th * x2;
  nmat(2, 2) = Cx<S>(al * rt2);
  return nmat;
}

}  // namespace detail

// Principal symbol of the displacement-to-traction map (one-sided), Hermitian
// of degree 1 in (tau, xi').
template <class S>
Symbol3<S> dn_symbol(const EllipticPoint<S>& pt, const MaterialField<S>& m,
                     const BoundaryMetric<S>& g) {
  SymbolFrame<S> f = make_symbol_frame(pt, m, g);
  Symbol3<S> out;
  out.point = pt;
  out.entries = detail::dn_numerator(f, S(1)) / Cx<S>(f.denom);
  return out;
}

// ---------------------------------------------------------------------------
// Outgoing-solution factorization: sigma_p(Lambda) = M_out * U_out^{-1}.

template <class S>
struct BoundaryRestriction {
  Symbol3<S> u_out;       // boundary value of the outgoing solution basis
  Symbol3<S> u_out_inv;   // its exact inverse
  Symbol3<S> m_out;       // boundary traction of the same basis
};

// `sgn = -1` builds the opposite-side basis (both decay radicals negated),
// used for the lower half-space at an interface.
template <class S>
BoundaryRestriction<S> boundary_restriction_symbols(const EllipticPoint<S>& pt,
                                                    const MaterialPoint<S>& mp,
                                                    const BoundaryMetric<S>& g, S sgn = S(1));

template <class S>
BoundaryRestriction<S> boundary_restriction_symbols(const EllipticPoint<S>& pt,
                                                    const MaterialField<S>& m,
                                                    const BoundaryMetric<S>& g) {
  return boundary_restriction_symbols(pt, m.at(pt.x), g, S(1));
}

template <class S>
BoundaryRestriction<S> boundary_restriction_symbols(const EllipticPoint<S>& pt,
                                                    const MaterialPoint<S>& mp,
                                                    const BoundaryMetric<S>& g, S sgn) {
  SymbolFrame<S> f = make_symbol_frame(pt, mp, g);
  const Cx<S> i(S(0), S(1));
  const S x1 = f.xif[0], x2 = f.xif[1];
  const S al = sgn * f.alpha, be = sgn * f.beta, mu = f.m.mu;
  const S n2 = f.n * f.n;
  const S rt2 = f.m.rho * f.tau * f.tau;

  BoundaryRestriction<S> out;
  out.u_out.point = out.u_out_inv.point = out.m_out.point = pt;

  CMat3<S>& u = out.u_out.entries;
  u(0, 0) = Cx<S>(0);     u(0, 1) = -i * al;      u(0, 2) = Cx<S>(x1);
  u(1, 0) = i * al;       u(1, 1) = Cx<S>(0);     u(1, 2) = Cx<S>(x2);
  u(2, 0) = Cx<S>(-x2);   u(2, 1) = Cx<S>(x1);    u(2, 2) = i * be;

  const Cx<S> pref = -i / Cx<S>(al * f.denom);
  CMat3<S>& v = out.u_out_inv.entries;
  v(0, 0) = Cx<S>(-x1 * x2);            v(0, 1) = Cx<S>(x1 * x1 - al * be);  v(0, 2) = -i * al * x2;
  v(1, 0) = Cx<S>(-(x2 * x2 - al * be)); v(1, 1) = Cx<S>(x1 * x2);           v(1, 2) = i * al * x1;
  v(2, 0) = i * al * x1;                v(2, 1) = i * al * x2;               v(2, 2) = Cx<S>(-al * al);
  v *= pref;

  CMat3<S>& w = out.m_out.entries;
  w(0, 0) = Cx<S>(-mu * x1 * x2);        w(0, 1) = Cx<S>(mu * (x1 * x1 + al * al));
  w(0, 2) = i * S(2) * mu * be * x1;
  w(1, 0) = Cx<S>(-mu * (x2 * x2 + al * al)); w(1, 1) = Cx<S>(mu * x1 * x2);
  w(1, 2) = i * S(2) * mu * be * x2;
  w(2, 0) = -i * S(2) * mu * al * x2;    w(2, 1) = i * S(2) * mu * al * x1;
  w(2, 2) = Cx<S>(-S(2) * mu * n2 + rt2);
  w *= -i;
  return out;
}

// ---------------------------------------------------------------------------
// Exact diagonalization.

template <class S>
struct DiagonalizationResult {
  CMat3<S> w = CMat3<S>::Zero();        // unitary, columns = eigenvectors
  S k1{}, k2{};                         // eigencolumn normalizations
  std::array<S, 3> eigenvalues{};       // diagonal entries, in column order
  Cx<S> e0{};                           // elliptic factor (when available)
  bool has_e0 = false;
};

namespace detail {

// First rotation: aligns the covector direction; block-diagonalizes every
// symbol built from the frame (shear-horizontal component splits off).
template <class S>
CMat3<S> v0_matrix(const SymbolFrame<S>& f) {
  const S x1 = f.xif[0] / f.n, x2 = f.xif[1] / f.n;
  CMat3<S> v0 = CMat3<S>::Zero();
  v0(0, 0) = Cx<S>(x1);  v0(0, 2) = Cx<S>(-x2);
  v0(1, 0) = Cx<S>(x2);  v0(1, 2) = Cx<S>(x1);
  v0(2, 1) = Cx<S>(1);
  return v0;
}

// Embed the unit eigencolumns of the Hermitian 2x2 block [[A, -iB], [iB, D]]
// into the 3x3 second rotation. Column j is (iB, A - m_j)/k_j.
template <class S>
CMat3<S> v1_matrix(S A, S B, S m1, S m2, S& k1, S& k2) {
  using std::sqrt;
  const Cx<S> i(S(0), S(1));
  k1 = sqrt((A - m1) * (A - m1) + B * B);
  k2 = sqrt((A - m2) * (A - m2) + B * B);
  CMat3<S> v1 = CMat3<S>::Zero();
  v1(0, 0) = i * B / k1;        v1(0, 1) = i * B / k2;
  v1(1, 0) = Cx<S>((A - m1) / k1); v1(1, 1) = Cx<S>((A - m2) / k2);
  v1(2, 2) = Cx<S>(1);
  return v1;
}

}  // namespace detail

template <class S>
Cx<S> e0_rayleigh(const EllipticPoint<S>& pt, const MaterialField<S>& m,
                  const BoundaryMetric<S>& g, S cr_hint = S(-1));

// Diagonalize the one-sided principal symbol: W = V0 V1, eigenvalues
// (m1, m2, m3)/(n^2 - alpha beta) with m3 = mu alpha (n^2 - alpha beta).
// `want_e0` skips the elliptic-factor computation (cheap mode for callers
// that only need W); `cr_hint` warm-starts the surface-speed root.
template <class S>
DiagonalizationResult<S> diagonalize_dn(const EllipticPoint<S>& pt, const MaterialField<S>& m,
                                        const BoundaryMetric<S>& g, bool want_e0 = true,
                                        S cr_hint = S(-1)) {
  using std::sqrt;
  SymbolFrame<S> f = make_symbol_frame(pt, m, g);
  const S rt2 = f.m.rho * f.tau * f.tau;
  const S A = f.beta * rt2;                  // block (1,1)
  const S D = f.alpha * rt2;                 // block (2,2)
  const S B = f.n * f.m.mu * f.theta;        // block (1,2) = -iB
  const S disc = sqrt((A - D) * (A - D) + S(4) * B * B);
  const S m1 = S(0.5) * (A + D - disc);
  const S m2 = S(0.5) * (A + D + disc);

  DiagonalizationResult<S> r;
  r.w = detail::v0_matrix(f) * detail::v1_matrix(A, B, m1, m2, r.k1, r.k2);
  r.eigenvalues = {m1 / f.denom, m2 / f.denom, f.m.mu * f.alpha};
  const S scale = std::max({std::abs(r.eigenvalues[0]), std::abs(r.eigenvalues[1]),
                            std::abs(r.eigenvalues[2])});
  if (std::abs(r.eigenvalues[0] - r.eigenvalues[2]) < S(1e-10) * scale) {
    throw DegenerateEigenvalue("surface and shear-horizontal eigenvalues coincide");
  }
  if (want_e0) {
    r.e0 = e0_rayleigh(pt, m, g, cr_hint);
    r.has_e0 = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Elliptic factor e0 (free surface).

// e0 = m~1 / (i (tau - c_R |xi|_g)) away from the root; within
// |s - c_R| < 1e-6 c_R, the equivalent quotient form with the vanishing
// factor divided out analytically: (R'(c_R) + (s-c_R) R''(c_R)/2) / (i m2(s))
// evaluated in unit-slowness variables. Degree 0 in (tau, xi').
// `cr_hint` (optional) warm-starts the surface-speed root finder.
template <class S>
Cx<S> e0_rayleigh(const EllipticPoint<S>& pt, const MaterialField<S>& m,
                  const BoundaryMetric<S>& g, S cr_hint) {
  using std::sqrt;
  const Cx<S> i(S(0), S(1));
  SymbolFrame<S> f = make_symbol_frame(pt, m, g);
  const S cr = detail::refine_root(
      cr_hint, f.m.cs(), [&](S s) { return rayleigh_residual_jet(s, f.m); },
      [&] { return rayleigh_speed(f.m).c_R; });
  const S ds = f.s - cr;

  // Unit-slowness 2x2 block scalars.
  const S rs2 = f.m.rho * f.s * f.s;
  const S Au = f.b * rs2, Du = f.a * rs2, Bu = f.m.mu * f.theta_bar;
  const S disc = sqrt((Au - Du) * (Au - Du) + S(4) * Bu * Bu);
  if (std::abs(ds) >= S(1e-6) * cr) {
    const S m1u = S(0.5) * (Au + Du - disc);
    const S m1tilde = f.n * m1u / (S(1) - f.a * f.b);
    return m1tilde / (i * (f.tau - cr * f.n));
  }
  const S m2u = S(0.5) * (Au + Du + disc);
  Jet<S, 1> rj = rayleigh_residual_jet(cr, f.m);
  return (rj.g[0] + ds * S(0.5) * rj.h(0, 0)) / (i * m2u);
}

// ---------------------------------------------------------------------------
// Interface jump symbol and its reduction.

template <class S>
struct JumpSymbol {
  Symbol3<S> jump;            // sigma_p(Lambda+) - sigma_p(Lambda-)
  CMat3<S> v0_reduction;      // V0^* jump V0: block-diagonal
  CMat2<S> interface_block;   // upper 2x2 of the reduction (= |xi|_g * M)
  S sh_entry{};               // scalar block: mu+ alpha+ + mu- alpha-
};

// Both-sides elliptic jump symbol. The opposite side contributes with both
// decay radicals negated; the difference is Hermitian and reduces under V0 to
// diag(|xi|_g M(s), mu+ alpha+ + mu- alpha-).
template <class S>
JumpSymbol<S> dn_jump_symbol(const EllipticPoint<S>& pt, const MaterialPair<S>& pair,
                             const BoundaryMetric<S>& g) {
  SymbolFrame<S> fp = make_symbol_frame(pt, pair.plus.at(pt.x), g);
  SymbolFrame<S> fm = make_symbol_frame(pt, pair.minus.at(pt.x), g);
  JumpSymbol<S> out;
  out.jump.point = pt;
  out.jump.entries = detail::dn_numerator(fp, S(1)) / Cx<S>(fp.denom) -
                     detail::dn_numerator(fm, S(-1)) / Cx<S>(fm.denom);
  const CMat3<S> v0 = detail::v0_matrix(fp);
  out.v0_reduction = v0.adjoint() * out.jump.entries * v0;
  out.interface_block = out.v0_reduction.template topLeftCorner<2, 2>();
  out.sh_entry = fp.m.mu * fp.alpha + fm.m.mu * fm.alpha;
  return out;
}

// ---------------------------------------------------------------------------
// Interface diagonalization and elliptic factor.

// e0 for the interface: m1(s)/(i (s - c_ST)) with the unit-slowness interface
// eigenvalue m1; near the root, (m1'(c_ST) + (s-c_ST) m1''(c_ST)/2)/i.
template <class S>
Cx<S> e0_stoneley(const EllipticPoint<S>& pt, const MaterialPair<S>& pair,
                  const BoundaryMetric<S>& g) {
  const Cx<S> i(S(0), S(1));
  const MaterialPoint<S> mp = pair.plus.at(pt.x);
  const MaterialPoint<S> mm = pair.minus.at(pt.x);
  SymbolFrame<S> fp = make_symbol_frame(pt, mp, g);
  make_symbol_frame(pt, mm, g);  // validates the opposite side
  StoneleyRoot<S> root = stoneley_speed(mp, mm);
  if (!root.exists) {
    throw NoStoneleyRoot("interface root required for the elliptic factor");
  }
  const S ds = fp.s - root.c_ST;
  if (std::abs(ds) >= S(1e-6) * root.c_ST) {
    const S m1 = stoneley_matrix(fp.s, mp, mm).m1;
    return m1 / (i * ds);
  }
  Jet<S, 1> mj = stoneley_m1_jet(root.c_ST, mp, mm);
  return (mj.g[0] + ds * S(0.5) * mj.h(0, 0)) / i;
}

// Diagonalize the interface jump symbol: W_s = V0 V1 with V1 built from the
// 2x2 interface block; eigenvalues (n m1, n m2, mu+ alpha+ + mu- alpha-).
// When `want_e0` and the interface root exists, fills the elliptic factor.
template <class S>
DiagonalizationResult<S> diagonalize_stoneley(const EllipticPoint<S>& pt,
                                              const MaterialPair<S>& pair,
                                              const BoundaryMetric<S>& g,
                                              bool want_e0 = true) {
  const MaterialPoint<S> mp = pair.plus.at(pt.x);
  const MaterialPoint<S> mm = pair.minus.at(pt.x);
  SymbolFrame<S> fp = make_symbol_frame(pt, mp, g);
  SymbolFrame<S> fm = make_symbol_frame(pt, mm, g);
  StoneleyMatrices<S> sm = stoneley_matrix(fp.s, mp, mm);

  // Unit-slowness block [[M11, -i zeta1], [i zeta1, M22]]; eigencolumns are
  // scale-invariant so the n-scaling enters only through the eigenvalues.
  const S A = sm.m(0, 0).real();
  const S B = -sm.m(0, 1).imag();  // M = [[A, -iB], [iB, D]]
  DiagonalizationResult<S> r;
  r.w = detail::v0_matrix(fp) * detail::v1_matrix(A, B, sm.m1, sm.m2, r.k1, r.k2);
  r.eigenvalues = {fp.n * sm.m1, fp.n * sm.m2, fp.m.mu * fp.alpha + fm.m.mu * fm.alpha};
  if (want_e0) {
    StoneleyRoot<S> root = stoneley_speed(mp, mm);
    if (root.exists) {
      r.e0 = e0_stoneley(pt, pair, g);
      r.has_e0 = true;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// First-order correction scalar r0 (free surface, surface-wave tube).

template <class S>
struct R0Result {
  Cx<S> value{};
  bool flat_exact = false;   // sub-principal symbol exactly zero (flat model)
  S richardson_delta{};      // self-consistency of the h vs h/2 derivatives
};

// sigma_p(r) at a tube point: the two first-order composition terms of the
// conjugated operator's (1,1) entry, plus the transport cross term from the
// elliptic factor, divided by e0. All symbol derivatives are central
// differences evaluated at steps h and h/2 with Richardson extrapolation.
// `cr_hint` warm-starts the surface-speed root.
template <class S>
R0Result<S> r0_leading(const EllipticPoint<S>& pt, const MaterialField<S>& m,
                       const BoundaryMetric<S>& g, S cr_hint = S(-1)) {
  const Cx<S> i(S(0), S(1));
  SymbolFrame<S> f0 = make_symbol_frame(pt, m, g);
  const S cr0 = detail::refine_root(
      cr_hint, f0.m.cs(), [&](S s) { return rayleigh_residual_jet(s, f0.m); },
      [&] { return rayleigh_speed(f0.m).c_R; });
  if (!(std::abs(f0.s - cr0) < S(0.05) * cr0)) {
    throw OutsideTube("r0 is defined on the surface-wave tube |s - c_R| < 0.05 c_R");
  }

  // Phase-space evaluators at fixed tau.
  auto sym = [&](const Vec2<S>& x, const Vec2<S>& xi) {
    EllipticPoint<S> q{pt.t, x, pt.tau, xi};
    return dn_symbol(q, m, g).entries;
  };
  auto wmat = [&](const Vec2<S>& x, const Vec2<S>& xi) {
    EllipticPoint<S> q{pt.t, x, pt.tau, xi};
    return diagonalize_dn(q, m, g, /*want_e0=*/false).w;
  };
  auto e0f = [&](const Vec2<S>& x, const Vec2<S>& xi) {
    EllipticPoint<S> q{pt.t, x, pt.tau, xi};
    return e0_rayleigh(q, m, g, cr0);
  };

  const S hx = S(1e-4) * (S(1) + pt.x.norm());
  const S hxi = S(1e-4) * pt.xi.norm();

  // Central difference in variable `k` (0,1 = x; 2,3 = xi) at step h.
  auto diff = [&](auto&& fn, int k, S h) {
    Vec2<S> xp = pt.x, xm = pt.x, xip = pt.xi, xim = pt.xi;
    if (k < 2) {
      xp[k] += h;
      xm[k] -= h;
    } else {
      xip[k - 2] += h;
      xim[k - 2] -= h;
    }
    auto plus = fn(xp, xip);
    auto minus = fn(xm, xim);
    return ((plus - minus) / (S(2) * h)).eval();
  };
  auto diff_scalar = [&](auto&& fn, int k, S h) {
    Vec2<S> xp = pt.x, xm = pt.x, xip = pt.xi, xim = pt.xi;
    if (k < 2) {
      xp[k] += h;
      xm[k] -= h;
    } else {
      xip[k - 2] += h;
      xim[k - 2] -= h;
    }
    return (fn(xp, xip) - fn(xm, xim)) / (S(2) * h);
  };
  auto sigw = [&](const Vec2<S>& x, const Vec2<S>& xi) {
    return (sym(x, xi) * wmat(x, xi)).eval();
  };

  const CMat3<S> w0 = wmat(pt.x, pt.xi);
  const Cx<S> e00 = e0f(pt.x, pt.xi);
  const Jet<S, 4> lam = lambda1_jet(SpeedField<S>::rayleigh(m, g), pt.x, pt.xi, cr0);

  auto accumulate = [&](S hscale) {
    Cx<S> total(0, 0);
    for (int j = 0; j < 2; ++j) {
      const CMat3<S> dxi_w = diff(wmat, 2 + j, hxi * hscale);
      const CMat3<S> dx_sigw = diff(sigw, j, hx * hscale);
      const CMat3<S> dxi_sig = diff(sym, 2 + j, hxi * hscale);
      const CMat3<S> dx_w = diff(wmat, j, hx * hscale);
      // Term 1: (d_xi W^*)_{1k} (1/i d_x (sigma W))_{k1}
      total += (dxi_w.adjoint().row(0) * (dx_sigw.col(0) / i))(0, 0);
      // Term 2: (W^*)_{1k} (d_xi sigma * 1/i d_x W)_{k1}
      total += (w0.adjoint().row(0) * ((dxi_sig * dx_w).col(0) / i))(0, 0);
      // Elliptic-factor cross term: +i d_xi e0 * d_x lambda1.
      const Cx<S> dxi_e0 = diff_scalar(e0f, 2 + j, hxi * hscale);
      total += i * dxi_e0 * lam.g[j];
    }
    return total;
  };

  const Cx<S> coarse = accumulate(S(1));
  const Cx<S> fine = accumulate(S(0.5));
  const Cx<S> extrap = (S(4) * fine - coarse) / S(3);

  R0Result<S> out;
  out.value = extrap / e00;
  out.flat_exact = m.constant() && g.identity();
  out.richardson_delta = std::abs(extrap - fine) / std::max(S(1), std::abs(extrap));
  return out;
}

}  // namespace raystone
