// Characteristic speeds as differentiable fields.
//
// c_R(x) and c_ST(x) are implicit functions (roots of the secular kernels in
// the slowness variable); their exact first and second spatial derivatives
// come from the implicit function theorem applied to a 3-variable jet
// evaluation (slowness, x1, x2) of the kernel. On top of that,
// lambda1(x, xi) = c(x) |xi|_g is assembled as a 4-variable jet over
// (x1, x2, xi1, xi2) — everything the ray tracer, the Riccati system, and the
// transport coefficient need, with no hand-coded derivative formulas.
#pragma once

#include "raystone/dispersion.hpp"
#include "raystone/jet.hpp"
#include "raystone/material.hpp"

#include <cmath>

namespace raystone {

enum class WaveKind { kRayleigh, kStoneley };

namespace detail {

// Solve F(s) = 0 by Newton from a hint; fall back to the full scanning root
// finder when the hint is absent or Newton leaves the valid bracket.
template <class S, class FJ, class Fallback>
S refine_root(S hint, S smax, FJ&& fjet, Fallback&& fallback) {
  if (!(hint > S(0)) || !(hint < smax)) return fallback();
  S s = hint;
  for (int it = 0; it < 8; ++it) {
    Jet<S, 1> j = fjet(s);
    if (!(std::abs(j.g[0]) > S(0))) return fallback();
    const S next = s - j.v / j.g[0];
    if (!(next > S(0)) || !(next < smax)) return fallback();
    if (std::abs(next - s) < S(1e-15) * smax) return next;
    s = next;
  }
  return s;
}

// Implicit-function-theorem assembly: from the 3-jet of F(s, x1, x2) at the
// root, return the 2-jet of the root s(x).
template <class S>
Jet<S, 2> ift_root_jet(S root, const Jet<S, 3>& F) {
  const S Fs = F.g[0];
  Jet<S, 2> c;
  c.v = root;
  const S c1 = -F.g[1] / Fs;
  const S c2 = -F.g[2] / Fs;
  c.g[0] = c1;
  c.g[1] = c2;
  const S cg[2] = {c1, c2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      c.h(i, j) = -(F.h(1 + i, 1 + j) + F.h(0, 1 + j) * cg[i] + F.h(0, 1 + i) * cg[j] +
                    F.h(0, 0) * cg[i] * cg[j]) /
                  Fs;
    }
  }
  return c;
}

}  // namespace detail

// Free-surface speed c_R(x) with exact first/second derivatives. `hint`
// (optional previous value) enables cheap Newton refinement along a ray.
template <class S>
Jet<S, 2> rayleigh_speed_jet(const MaterialField<S>& field, const Vec2<S>& x,
                             S hint = S(-1)) {
  using J3 = Jet<S, 3>;
  const MaterialPoint<S> m = field.at(x);
  auto fjet = [&](S s) { return rayleigh_residual_jet(s, m); };
  auto fallback = [&] { return rayleigh_speed(m).c_R; };
  const S root = detail::refine_root(hint, m.cs(), fjet, fallback);
  J3 F = rayleigh_residual_t(J3::variable(root, 0),
                             field.template param_jet<3>(MaterialParam::kRho, x, 1, 2),
                             field.template param_jet<3>(MaterialParam::kLam, x, 1, 2),
                             field.template param_jet<3>(MaterialParam::kMu, x, 1, 2));
  return detail::ift_root_jet(root, F);
}

// Interface speed c_ST(x) with exact derivatives (root of m1).
template <class S>
Jet<S, 2> stoneley_speed_jet(const MaterialPair<S>& pair, const Vec2<S>& x,
                             S hint = S(-1)) {
  using J3 = Jet<S, 3>;
  const MaterialPoint<S> mp = pair.plus.at(x);
  const MaterialPoint<S> mm = pair.minus.at(x);
  auto fjet = [&](S s) { return stoneley_m1_jet(s, mp, mm); };
  auto fallback = [&] {
    StoneleyRoot<S> r = stoneley_speed(mp, mm);
    if (!r.exists) throw NoStoneleyRoot("no interface root at the requested point");
    return r.c_ST;
  };
  const S root = detail::refine_root(hint, min_shear_speed(mp, mm), fjet, fallback);
  J3 F = interface_scalars_t(
             J3::variable(root, 0),
             pair.plus.template param_jet<3>(MaterialParam::kRho, x, 1, 2),
             pair.plus.template param_jet<3>(MaterialParam::kLam, x, 1, 2),
             pair.plus.template param_jet<3>(MaterialParam::kMu, x, 1, 2),
             pair.minus.template param_jet<3>(MaterialParam::kRho, x, 1, 2),
             pair.minus.template param_jet<3>(MaterialParam::kLam, x, 1, 2),
             pair.minus.template param_jet<3>(MaterialParam::kMu, x, 1, 2))
             .m1;
  return detail::ift_root_jet(root, F);
}

// Wave-speed field facade: free surface (one material) or interface (pair).
template <class S>
struct SpeedField {
  WaveKind kind{WaveKind::kRayleigh};
  const MaterialField<S>* field{nullptr};   // Rayleigh
  const MaterialPair<S>* pair{nullptr};     // Stoneley
  const BoundaryMetric<S>* metric{nullptr};

  static SpeedField rayleigh(const MaterialField<S>& f, const BoundaryMetric<S>& g) {
    return {WaveKind::kRayleigh, &f, nullptr, &g};
  }
  static SpeedField stoneley(const MaterialPair<S>& p, const BoundaryMetric<S>& g) {
    return {WaveKind::kStoneley, nullptr, &p, &g};
  }

  const MaterialField<S>& primary() const {
    return kind == WaveKind::kRayleigh ? *field : pair->plus;
  }

  Jet<S, 2> speed_jet(const Vec2<S>& x, S hint = S(-1)) const {
    return kind == WaveKind::kRayleigh ? rayleigh_speed_jet(*field, x, hint)
                                       : stoneley_speed_jet(*pair, x, hint);
  }

  S speed(const Vec2<S>& x, S hint = S(-1)) const { return speed_jet(x, hint).v; }
};

// lambda1(x, xi) = c(x) |xi|_g as a 4-variable jet over (x1, x2, xi1, xi2).
// `speed_out` (optional) receives the refined c(x) for warm-starting the next
// evaluation along a ray.
template <class S>
Jet<S, 4> lambda1_jet(const SpeedField<S>& sf, const Vec2<S>& x, const Vec2<S>& xi,
                      S hint = S(-1), S* speed_out = nullptr) {
  using J4 = Jet<S, 4>;
  const Jet<S, 2> c2 = sf.speed_jet(x, hint);
  if (speed_out) *speed_out = c2.v;
  J4 c;
  c.v = c2.v;
  c.g[0] = c2.g[0];
  c.g[1] = c2.g[1];
  c.h.template topLeftCorner<2, 2>() = c2.h;
  auto gi = sf.metric->template inverse_jet<4>(x, 0, 1);
  J4 x1 = J4::variable(xi[0], 2);
  J4 x2 = J4::variable(xi[1], 3);
  J4 n2 = gi(0, 0) * x1 * x1 + S(2) * gi(0, 1) * x1 * x2 + gi(1, 1) * x2 * x2;
  return c * sqrt(n2);
}

}  // namespace raystone
