// Closed-form reference solutions for the constant-coefficient half-space
// with a flat boundary: cached root scalars, the surface-wave Fourier
// multiplier, spectral evaluation of the scalar mode equation, the two
// line-source closed forms, and the evanescent decay radicals.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "raystone/symbols.hpp"

namespace raystone {

// ---------------------------------------------------------------------------
// Regular rectangular grid of tangential frequencies xi'.
//
// `weight` is the quadrature measure of one cell.  A collapsed grid with
// n2 == 1 models a line spectrum (one xi2 row); its weight is then just the
// xi1 spacing.

template <class S>
struct XiGrid {
  Vec2<S> lo = Vec2<S>::Zero();
  Vec2<S> step = Vec2<S>::Zero();
  int n1 = 0;
  int n2 = 1;
  S weight = S(0);

  int count() const { return n1 * n2; }
  Vec2<S> at(int i, int j) const {
    return Vec2<S>(lo[0] + S(i) * step[0], lo[1] + S(j) * step[1]);
  }
  Vec2<S> at(int idx) const { return at(idx % n1, idx / n1); }
};

// Uniform grid centered at `center` spanning +-half_span in each direction,
// with the cell measure filled in.
template <class S>
XiGrid<S> centered_grid(const Vec2<S>& center, const Vec2<S>& half_span, int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw NonPositiveParameter("grid sample counts must be positive");
  XiGrid<S> g;
  g.n1 = n1;
  g.n2 = n2;
  g.step[0] = n1 > 1 ? S(2) * half_span[0] / S(n1 - 1) : S(0);
  g.step[1] = n2 > 1 ? S(2) * half_span[1] / S(n2 - 1) : S(0);
  g.lo[0] = center[0] - (n1 > 1 ? half_span[0] : S(0));
  g.lo[1] = center[1] - (n2 > 1 ? half_span[1] : S(0));
  g.weight = (n1 > 1 ? g.step[0] : S(1)) * (n2 > 1 ? g.step[1] : S(1));
  return g;
}

// ---------------------------------------------------------------------------
// Constant-coefficient model with every root-level scalar precomputed.

template <class S>
struct FlatModel {
  MaterialPoint<S> material{};
  S c_R{};                    // free-surface wave speed
  S a{}, b{}, theta_bar{};    // slowness kernels evaluated at c_R
  S r_prime{}, r_second{};    // first and second derivative of the residual at c_R
  S k1bar{};                  // eigencolumn normalization at the root (unit covector)
  S m2bar{};                  // second eigenvalue at the root (unit covector)
};

template <class S>
FlatModel<S> make_flat_model(const MaterialPoint<S>& m) {
  using std::sqrt;
  FlatModel<S> f;
  f.material = m;
  f.c_R = rayleigh_speed(m).c_R;
  const DispersionKernels<S> k = kernels(f.c_R, m);
  f.a = k.a;
  f.b = k.b;
  f.theta_bar = k.theta_bar;
  const Jet<S, 1> rj = rayleigh_residual_jet(f.c_R, m);
  f.r_prime = rj.g[0];
  f.r_second = rj.h(0, 0);
  f.m2bar = (f.a + f.b) * m.rho * f.c_R * f.c_R;
  f.k1bar = S(2) * m.mu * (S(1) - sqrt(f.a * f.b)) * sqrt(f.b * (f.a + f.b));
  return f;
}

// ---------------------------------------------------------------------------
// Fourier multiplier of the flat displacement-to-traction map.  Identical to
// the variable-coefficient principal symbol frozen at the constant material
// and the Euclidean metric; exposed separately so the two construction paths
// can be compared against each other.

template <class S>
Symbol3<S> flat_dn_multiplier(const FlatModel<S>& fm, S tau, const Vec2<S>& xi) {
  const BoundaryMetric<S> id{};
  EllipticPoint<S> pt;
  pt.t = S(0);
  pt.x = Vec2<S>::Zero();
  pt.tau = tau;
  pt.xi = xi;
  const SymbolFrame<S> f = make_symbol_frame(pt, fm.material, id);
  Symbol3<S> out;
  out.point = pt;
  out.entries = detail::dn_numerator(f, S(1)) / Cx<S>(f.denom);
  return out;
}

// Surface phase t c_R |xi'| + x'.xi' of the flat propagator.
template <class S>
S flat_phase(const FlatModel<S>& fm, S t, const Vec2<S>& x, const Vec2<S>& xi) {
  return t * fm.c_R * xi.norm() + x.dot(xi);
}

// ---------------------------------------------------------------------------
// Spectral solution of the first-order scalar mode equation on the boundary:
// free evolution of initial data plus a causal source term.

// Cauchy part: sum over the grid of e^{i(t c_R |xi| + x.xi)} h0_hat(xi).
template <class S>
Cx<S> flat_h1_value(const FlatModel<S>& fm, const XiGrid<S>& grid,
                    const std::vector<Cx<S>>& h0_hat, S t, const Vec2<S>& x) {
  if (static_cast<int>(h0_hat.size()) != grid.count())
    throw InvalidInput("spectrum size does not match the grid");
  Cx<S> acc(0, 0);
  for (int idx = 0; idx < grid.count(); ++idx) {
    const Vec2<S> xi = grid.at(idx);
    acc += std::polar(S(1), flat_phase(fm, t, x, xi)) * h0_hat[idx];
  }
  return acc * grid.weight;
}

// Source part: integral over s of H(t-s) e^{i((t-s) c_R |xi| + x.xi)}
// g_hat(s, xi), composite-Simpson in s (uniform samples, odd count) and a
// grid sum in xi.  `g_hat[k * grid.count() + idx]` is the sample at time
// `times[k]` and grid node idx.
template <class S>
Cx<S> flat_h1_duhamel(const FlatModel<S>& fm, const XiGrid<S>& grid,
                      const std::vector<S>& times, const std::vector<Cx<S>>& g_hat,
                      S t, const Vec2<S>& x) {
  const int nt = static_cast<int>(times.size());
  if (nt < 3 || nt % 2 == 0)
    throw InvalidInput("Simpson quadrature needs an odd sample count >= 3");
  if (static_cast<int>(g_hat.size()) != nt * grid.count())
    throw InvalidInput("source sample size does not match times x grid");
  const S ds = (times[nt - 1] - times[0]) / S(nt - 1);
  if (!(ds > S(0))) throw NonPositiveParameter("source samples must be increasing");

  Cx<S> acc(0, 0);
  for (int idx = 0; idx < grid.count(); ++idx) {
    const Vec2<S> xi = grid.at(idx);
    const S omega = fm.c_R * xi.norm();
    Cx<S> time_sum(0, 0);
    for (int k = 0; k < nt; ++k) {
      if (times[k] > t) continue;  // causal cut-off
      const S w = (k == 0 || k == nt - 1) ? S(1) : (k % 2 == 1 ? S(4) : S(2));
      time_sum += w * std::polar(S(1), (t - times[k]) * omega) * g_hat[k * grid.count() + idx];
    }
    acc += std::polar(S(1), x.dot(xi)) * time_sum;
  }
  return acc * (grid.weight * ds / S(3));
}

// ---------------------------------------------------------------------------
// Line-source closed forms.  Both sources sit on the x1 = 0 line and excite
// the vertical traction component only; the fields depend on x1 alone and
// the second component vanishes identically.

// Time-harmonic line source with amplitude a3 and frequency p: a standing
// pattern of two counter-propagating surface waves.
template <class S>
CVec3<S> example1_closed_form(const FlatModel<S>& fm, S t, S x1, S a3, S p) {
  const Cx<S> i(S(0), S(1));
  const Cx<S> pref = a3 * std::polar(S(1), p * t) / fm.r_prime;
  const Cx<S> right = std::polar(S(1), p * x1 / fm.c_R);   // e^{+i p x1 / c_R}
  const Cx<S> left = std::polar(S(1), -p * x1 / fm.c_R);   // e^{-i p x1 / c_R}
  const S mu = fm.material.mu, rho = fm.material.rho;
  CVec3<S> f;
  f[0] = pref * (mu * fm.theta_bar) * (right - left);
  f[1] = Cx<S>(0, 0);
  f[2] = pref * (-i * fm.b * rho * fm.c_R * fm.c_R) * (right + left);
  return f;
}

// Impulsive line source: two counter-propagating pulses located at
// x1 = -+ c_R t.  The singular limit is regularized on the scale eps: the
// delta factor becomes a unit-mass Gaussian and the principal value becomes
// the Lorentzian-smoothed odd kernel y / (y^2 + eps^2).
template <class S>
CVec3<S> example2_closed_form(const FlatModel<S>& fm, S t, S x1, S a3, S eps) {
  using std::exp;
  using std::sqrt;
  if (!(eps > S(0))) throw NonPositiveParameter("regularization scale must be positive");
  const Cx<S> i(S(0), S(1));
  const S pi = pi_v<S>;
  const auto gauss = [&](S y) { return exp(-y * y / (S(2) * eps * eps)) / (eps * sqrt(S(2) * pi)); };
  const auto pv = [&](S y) { return y / (y * y + eps * eps); };
  const S up = t * fm.c_R + x1;   // left-moving pulse argument
  const S um = t * fm.c_R - x1;   // right-moving pulse argument
  const Cx<S> i1 = pi * (gauss(up) - gauss(um)) + i * (pv(up) - pv(um));
  const Cx<S> i2 = pi * (gauss(up) + gauss(um)) + i * (pv(um) + pv(up));
  const S mu = fm.material.mu, rho = fm.material.rho;
  CVec3<S> f;
  f[0] = (a3 / fm.r_prime) * (-mu * fm.theta_bar) * i1;
  f[1] = Cx<S>(0, 0);
  f[2] = (a3 / fm.r_prime) * (i * fm.b * rho * fm.c_R * fm.c_R) * i2;
  return f;
}

// ---------------------------------------------------------------------------
// Evanescent decay radicals of the two bulk branches at an elliptic (tau, xi).

template <class S>
struct EvanescentRadicals {
  S alpha_tilde{};  // shear branch: the smaller radical, slower decay
  S beta_tilde{};   // pressure branch: the larger radical
};

template <class S>
EvanescentRadicals<S> evanescent_radicals(const MaterialPoint<S>& m, S tau, S xi_norm) {
  using std::sqrt;
  const S cs2 = m.mu / m.rho;
  const S cp2 = (m.lam + S(2) * m.mu) / m.rho;
  const S n2 = xi_norm * xi_norm;
  const S ra = n2 - tau * tau / cs2;
  const S rb = n2 - tau * tau / cp2;
  if (!(ra > S(0)) || !(rb > S(0)))
    throw OutsideEllipticRange("frequency pair is not in the elliptic region");
  return {sqrt(ra), sqrt(rb)};
}

}  // namespace raystone
