// Dispersion kernels and characteristic-speed root finding.
//
// Free-surface waves: the secular function R(s) = 4 mu^2 a b - (rho s^2 - 2 mu)^2
// with radicals a = sqrt(1 - s^2/c_s^2), b = sqrt(1 - s^2/c_p^2) has a unique
// simple zero c_R in (0, c_s).
//
// Interface waves: the 2x2 Hermitian interface matrix M(s) = N_+(s) + N_-(s)^T
// has eigenvalues m1 <= m2; the interface speed c_ST is the zero of m1 when it
// exists, equivalently a zero of the scalar secular function S(s) through
// det M = (1 - a_+ b_+)(1 - a_- b_-) S(s).
//
// All kernel evaluations are templated so they run on plain scalars and on
// jets (for analytic s- and x-derivatives alike).
#pragma once

#include "raystone/common.hpp"
#include "raystone/errors.hpp"
#include "raystone/jet.hpp"
#include "raystone/material.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace raystone {

// ---------------------------------------------------------------------------
// Scalar/jet kernel evaluations (T = S or Jet<S, N>).

template <class T>
struct KernelsT {
  T a, b, theta_bar;
};

template <class T>
KernelsT<T> kernels_t(const T& s, const T& rho, const T& lam, const T& mu) {
  using std::sqrt;
  const T s2 = s * s;
  const T inv_cs2 = rho / mu;                  // 1/c_s^2
  const T inv_cp2 = rho / (lam + T(2) * mu);   // 1/c_p^2
  KernelsT<T> k;
  k.a = sqrt(T(1) - s2 * inv_cs2);
  k.b = sqrt(T(1) - s2 * inv_cp2);
  k.theta_bar = T(2) - s2 * inv_cs2 - T(2) * k.a * k.b;
  return k;
}

template <class T>
T rayleigh_residual_t(const T& s, const T& rho, const T& lam, const T& mu) {
  KernelsT<T> k = kernels_t(s, rho, lam, mu);
  const T t = rho * s * s - T(2) * mu;
  return T(4) * mu * mu * k.a * k.b - t * t;
}

// Interface scalar pieces: d = 1 - ab, kappa = rho s^2 / d, and the Hermitian
// matrix entries M11 = b+k+ + b-k-, M22 = a+k+ + a-k-, M21 = i zeta1 with
// zeta1 = 2(mu+ - mu-) - (kappa+ - kappa-).
template <class T>
struct InterfaceScalarsT {
  T m11, m22, zeta1;          // M entries (M12 = -i zeta1, M21 = +i zeta1)
  T varrho;                   // (M11 - M22)^2 + 4 M12 M21 = (...)^2 + 4 zeta1^2
  T m1, m2;                   // eigenvalues, m1 <= m2
  T dplus, dminus;            // 1 - a b per side
  T kplus, kminus;            // kappa per side
  T bplus, bminus, aplus, aminus;
};

template <class T>
InterfaceScalarsT<T> interface_scalars_t(const T& s, const T& rp, const T& lp, const T& mp,
                                         const T& rm, const T& lm, const T& mm) {
  using std::sqrt;
  KernelsT<T> kp = kernels_t(s, rp, lp, mp);
  KernelsT<T> km = kernels_t(s, rm, lm, mm);
  InterfaceScalarsT<T> r;
  r.aplus = kp.a;
  r.aminus = km.a;
  r.bplus = kp.b;
  r.bminus = km.b;
  r.dplus = T(1) - kp.a * kp.b;
  r.dminus = T(1) - km.a * km.b;
  r.kplus = rp * s * s / r.dplus;
  r.kminus = rm * s * s / r.dminus;
  r.m11 = kp.b * r.kplus + km.b * r.kminus;
  r.m22 = kp.a * r.kplus + km.a * r.kminus;
  r.zeta1 = T(2) * (mp - mm) - (r.kplus - r.kminus);
  const T diff = r.m11 - r.m22;
  r.varrho = diff * diff + T(4) * r.zeta1 * r.zeta1;
  const T root = sqrt(r.varrho);
  r.m1 = (r.m11 + r.m22 - root) * T(0.5);
  r.m2 = (r.m11 + r.m22 + root) * T(0.5);
  return r;
}

// Interface secular function S(s).
template <class T>
T stoneley_residual_t(const T& s, const T& rp, const T& lp, const T& mp,
                      const T& rm, const T& lm, const T& mm) {
  KernelsT<T> kp = kernels_t(s, rp, lp, mp);
  KernelsT<T> km = kernels_t(s, rm, lm, mm);
  const T s2 = s * s;
  const T dp = T(1) - kp.a * kp.b;
  const T dm = T(1) - km.a * km.b;
  const T dmu = mp - mm;
  const T drho = rp - rm;
  return ((rp * km.a + rm * kp.a) * (rp * km.b + rm * kp.b) - drho * drho) * s2 * s2
         - T(4) * dmu * dmu * dp * dm
         + T(4) * dmu * (rp * dm - rm * dp) * s2;
}

// ---------------------------------------------------------------------------
// Plain-scalar fronts with precondition checks.

template <class S>
struct DispersionKernels {
  S s, a, b, theta_bar;
};

template <class S>
DispersionKernels<S> kernels(S s, const MaterialPoint<S>& m) {
  require_positive(m);
  if (!(s > S(0)) || !(s < m.cs())) {
    throw OutsideEllipticRange("slowness outside (0, c_s)");
  }
  KernelsT<S> k = kernels_t(s, m.rho, m.lam, m.mu);
  return {s, k.a, k.b, k.theta_bar};
}

template <class S>
S rayleigh_residual(S s, const MaterialPoint<S>& m) {
  require_positive(m);
  if (!(s >= S(0)) || !(s < m.cs())) {
    throw OutsideEllipticRange("slowness outside [0, c_s)");
  }
  return rayleigh_residual_t(s, m.rho, m.lam, m.mu);
}

// d/ds and d^2/ds^2 of R at s, via a 1-variable jet.
template <class S>
Jet<S, 1> rayleigh_residual_jet(S s, const MaterialPoint<S>& m) {
  using J = Jet<S, 1>;
  return rayleigh_residual_t(J::variable(s, 0), J(m.rho), J(m.lam), J(m.mu));
}

template <class S>
struct RayleighRoot {
  S c_R;
  S slope;  // R'(c_R) < 0
};

namespace detail {

// Count strict sign changes of f over a uniform grid on (lo, hi); returns the
// bracketing interval of the first change.
template <class S, class F>
int scan_sign_changes(F&& f, S lo, S hi, int n, S* bra, S* brb) {
  int changes = 0;
  S prev_s = lo;
  S prev_f = f(lo);
  for (int i = 1; i < n; ++i) {
    const S si = lo + (hi - lo) * S(i) / S(n - 1);
    const S fi = f(si);
    if ((prev_f < S(0) && fi > S(0)) || (prev_f > S(0) && fi < S(0))) {
      if (changes == 0) {
        *bra = prev_s;
        *brb = si;
      }
      ++changes;
    }
    prev_s = si;
    prev_f = fi;
  }
  return changes;
}

template <class S, class F>
S bisect(F&& f, S a, S b, S tol) {
  S fa = f(a);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    const S mid = (a + b) / S(2);
    const S fm = f(mid);
    if ((fa < S(0)) == (fm < S(0))) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return (a + b) / S(2);
}

}  // namespace detail

// Unique root of R on (0, c_s): 1024-sample sign scan, bisection to 1e-13,
// then a Newton polish with the analytic derivative.
template <class S>
RayleighRoot<S> rayleigh_speed(const MaterialPoint<S>& m) {
  require_positive(m);
  const S cs = m.cs();
  const S eps = S(1e-6) * cs;
  auto f = [&](S s) { return rayleigh_residual_t(s, m.rho, m.lam, m.mu); };
  S a = 0, b = 0;
  const int changes = detail::scan_sign_changes(f, eps, cs - eps, 1024, &a, &b);
  if (changes != 1) {
    throw RootCountMismatch("expected exactly one sign change of R on (0, c_s), found " +
                            std::to_string(changes));
  }
  S root = detail::bisect(f, a, b, S(1e-13));
  for (int it = 0; it < 3; ++it) {
    Jet<S, 1> rj = rayleigh_residual_jet(root, m);
    const S step = rj.v / rj.g[0];
    const S next = root - step;
    if (next > S(0) && next < cs) root = next;
  }
  Jet<S, 1> rj = rayleigh_residual_jet(root, m);
  return {root, rj.g[0]};
}

// ---------------------------------------------------------------------------
// Interface matrices and root.

template <class S>
struct StoneleyMatrices {
  CMat2<S> n_plus, n_minus;
  CMat2<S> m;
  S m1, m2;
  S varrho;
};

template <class S>
S min_shear_speed(const MaterialPoint<S>& p, const MaterialPoint<S>& q) {
  return std::min(p.cs(), q.cs());
}

// Assemble N_plus(s), N_minus(s) and M(s) = N_+ + N_-^T at |xi|_g = 1.
template <class S>
StoneleyMatrices<S> stoneley_matrix(S s, const MaterialPoint<S>& plus,
                                    const MaterialPoint<S>& minus) {
  require_positive(plus);
  require_positive(minus);
  if (!(s > S(0)) || !(s < min_shear_speed(plus, minus))) {
    throw OutsideEllipticRange("slowness outside (0, min c_s)");
  }
  using C = std::complex<S>;
  auto n_side = [&](const MaterialPoint<S>& mt) {
    KernelsT<S> k = kernels_t(s, mt.rho, mt.lam, mt.mu);
    const S d = S(1) - k.a * k.b;
    CMat2<S> n;
    n(0, 0) = C(k.b * mt.rho * s * s / d, 0);
    n(1, 1) = C(k.a * mt.rho * s * s / d, 0);
    n(0, 1) = C(0, -mt.mu * k.theta_bar / d);
    n(1, 0) = C(0, mt.mu * k.theta_bar / d);
    return n;
  };
  StoneleyMatrices<S> out;
  out.n_plus = n_side(plus);
  out.n_minus = n_side(minus);
  out.m = out.n_plus + out.n_minus.transpose();
  InterfaceScalarsT<S> sc = interface_scalars_t(
      s, plus.rho, plus.lam, plus.mu, minus.rho, minus.lam, minus.mu);
  out.m1 = sc.m1;
  out.m2 = sc.m2;
  out.varrho = sc.varrho;
  return out;
}

template <class S>
S stoneley_residual(S s, const MaterialPoint<S>& plus, const MaterialPoint<S>& minus) {
  require_positive(plus);
  require_positive(minus);
  if (!(s > S(0)) || !(s < min_shear_speed(plus, minus))) {
    throw OutsideEllipticRange("slowness outside (0, min c_s)");
  }
  return stoneley_residual_t(s, plus.rho, plus.lam, plus.mu,
                             minus.rho, minus.lam, minus.mu);
}

template <class S>
Jet<S, 1> stoneley_m1_jet(S s, const MaterialPoint<S>& plus, const MaterialPoint<S>& minus) {
  using J = Jet<S, 1>;
  return interface_scalars_t(J::variable(s, 0), J(plus.rho), J(plus.lam), J(plus.mu),
                             J(minus.rho), J(minus.lam), J(minus.mu))
      .m1;
}

template <class S>
struct StoneleyRoot {
  bool exists{false};
  S c_ST{0};
  S slope{0};  // dm1/ds at the root, negative
};

// Zero of m1(s) on (0, min c_s): 2048-sample scan, at most one sign change
// tolerated; bisection + Newton polish when found.
template <class S>
StoneleyRoot<S> stoneley_speed(const MaterialPoint<S>& plus, const MaterialPoint<S>& minus) {
  require_positive(plus);
  require_positive(minus);
  const S smax = min_shear_speed(plus, minus);
  const S eps = S(1e-6) * smax;
  auto f = [&](S s) {
    return interface_scalars_t(s, plus.rho, plus.lam, plus.mu,
                               minus.rho, minus.lam, minus.mu)
        .m1;
  };
  S a = 0, b = 0;
  const int changes = detail::scan_sign_changes(f, eps, smax - eps, 2048, &a, &b);
  if (changes > 1) {
    throw RootCountMismatch("interface eigenvalue m1 changed sign " +
                            std::to_string(changes) + " times; expected at most one");
  }
  StoneleyRoot<S> out;
  if (changes == 0) return out;
  S root = detail::bisect(f, a, b, S(1e-13));
  for (int it = 0; it < 3; ++it) {
    Jet<S, 1> j = stoneley_m1_jet(root, plus, minus);
    const S next = root - j.v / j.g[0];
    if (next > S(0) && next < smax) root = next;
  }
  Jet<S, 1> j = stoneley_m1_jet(root, plus, minus);
  out.exists = true;
  out.c_ST = root;
  out.slope = j.g[0];
  return out;
}

// ---------------------------------------------------------------------------
// Structured report behind the interface-root uniqueness argument.

struct ReportItem {
  std::string name;
  bool pass{false};
  double detail{0};
};

struct DefinitenessReport {
  std::vector<ReportItem> items;
  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

// Checks, per side: (a) the s -> 0 limit matrix is positive definite with
// diagonal c = 2 mu (2 mu + lam)/(3 mu + lam) satisfying 4 mu/3 < c < 2 mu;
// (b) m1, m2 decrease along the grid; (c) Tr N_{+/-}(s) > 0 on the grid; and
// the derivative-matrix sign facts det(dN/d iota) > 0, Tr(dN/d iota) < 0
// evaluated with exact (jet) entry derivatives, iota = s^2.
template <class S>
DefinitenessReport definiteness_report(const MaterialPoint<S>& plus,
                                       const MaterialPoint<S>& minus,
                                       const std::vector<S>& grid) {
  require_positive(plus);
  require_positive(minus);
  DefinitenessReport rep;
  const S smax = min_shear_speed(plus, minus);

  auto limit_item = [&](const MaterialPoint<S>& m, const char* side) {
    const S c = S(2) * m.mu * (S(2) * m.mu + m.lam) / (S(3) * m.mu + m.lam);
    // N(0) = [[c, -i(2 mu - c)], [i(2 mu - c), c]]: positive definite iff
    // c > 0 and det = c^2 - (2 mu - c)^2 = 4 mu (c - mu) > 0, i.e. c > mu;
    // the stated bracket 4 mu / 3 < c < 2 mu is strictly stronger.
    const bool bracket = (S(4) / S(3) * m.mu < c) && (c < S(2) * m.mu);
    const S det0 = c * c - (S(2) * m.mu - c) * (S(2) * m.mu - c);
    rep.items.push_back({std::string("limit_matrix_pd_") + side,
                         bracket && c > S(0) && det0 > S(0), double(c)});
  };
  limit_item(plus, "plus");
  limit_item(minus, "minus");

  // (b) eigenvalues decrease along the grid (finite differences).
  bool decreasing = true;
  S worst = S(0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] > S(0)) || !(grid[i + 1] < smax) || !(grid[i] < grid[i + 1])) {
      throw OutsideEllipticRange("definiteness grid must increase inside (0, min c_s)");
    }
    auto s0 = interface_scalars_t(grid[i], plus.rho, plus.lam, plus.mu,
                                  minus.rho, minus.lam, minus.mu);
    auto s1 = interface_scalars_t(grid[i + 1], plus.rho, plus.lam, plus.mu,
                                  minus.rho, minus.lam, minus.mu);
    const S d1 = s1.m1 - s0.m1;
    const S d2 = s1.m2 - s0.m2;
    worst = std::max({worst, d1, d2});
    if (!(d1 < S(0)) || !(d2 < S(0))) decreasing = false;
  }
  rep.items.push_back({"eigenvalues_decreasing", decreasing, double(worst)});

  // (c) positive traces and derivative-matrix signs on the grid.
  bool traces_pos = true;
  bool dsigns = true;
  using J = Jet<S, 1>;
  auto check_side = [&](const MaterialPoint<S>& m, S s) {
    KernelsT<S> k = kernels_t(s, m.rho, m.lam, m.mu);
    const S d = S(1) - k.a * k.b;
    const S tr = (k.a + k.b) * m.rho * s * s / d;
    if (!(tr > S(0))) traces_pos = false;
    // entries as jets in iota = s^2
    const S iota = s * s;
    J it = J::variable(iota, 0);
    J at = sqrt(J(1) - it * (m.rho / m.mu));
    J bt = sqrt(J(1) - it * (m.rho / (m.lam + S(2) * m.mu)));
    J dd = J(1) - at * bt;
    J kap = it * m.rho / dd;
    J e11 = bt * kap;
    J e22 = at * kap;
    const S d11 = e11.g[0];
    const S d22 = e22.g[0];
    const S kp = kap.g[0];  // derivative of the off-diagonal magnitude
    if (!(d11 * d22 - kp * kp > S(0)) || !(d11 + d22 < S(0))) dsigns = false;
  };
  for (S s : grid) {
    check_side(plus, s);
    check_side(minus, s);
  }
  rep.items.push_back({"traces_positive", traces_pos, 0});
  rep.items.push_back({"derivative_matrix_signs", dsigns, 0});
  return rep;
}

}  // namespace raystone
