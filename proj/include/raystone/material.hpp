// Elastic media, boundary metric, and phase-space points.
//
// Materials are constant baselines plus Gaussian perturbations with exact
// derivatives (evaluated through the jet type), so ray tracing and transport
// never fall back to numerical differentiation of the coefficients. All types
// are immutable after construction and all operations are pure.
#pragma once

#include "raystone/common.hpp"
#include "raystone/errors.hpp"
#include "raystone/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace raystone {

// ---------------------------------------------------------------------------
// Constant material sample.

template <class S>
struct MaterialPoint {
  S rho{1};
  S lam{1};
  S mu{1};

  S cs() const { return std::sqrt(mu / rho); }
  S cp() const { return std::sqrt((lam + S(2) * mu) / rho); }
};

template <class S>
void require_positive(const MaterialPoint<S>& m) {
  if (!(m.rho > S(0)) || !(m.lam > S(0)) || !(m.mu > S(0))) {
    throw NonPositiveParameter("material parameters must be strictly positive");
  }
}

// Shear and pressure speeds (c_s, c_p); c_s < c_p always.
template <class S>
std::pair<S, S> elastic_speeds(const MaterialPoint<S>& m) {
  require_positive(m);
  return {m.cs(), m.cp()};
}

// ---------------------------------------------------------------------------
// Smoothly varying material: base + Gaussian bumps with analytic derivatives.

enum class MaterialParam { kRho = 0, kLam = 1, kMu = 2 };

template <class S>
struct GaussBump {
  MaterialParam param{MaterialParam::kMu};
  S amplitude{0};
  Vec2<S> center = Vec2<S>::Zero();
  S width{1};
};

template <class S>
struct WorkingBox {
  Vec2<S> lo = Vec2<S>(-10, -10);
  Vec2<S> hi = Vec2<S>(10, 10);

  bool contains(const Vec2<S>& x) const {
    return x[0] >= lo[0] && x[0] <= hi[0] && x[1] >= lo[1] && x[1] <= hi[1];
  }
};

template <class S>
class MaterialField {
 public:
  MaterialField() { scan_positivity(); }
  MaterialField(MaterialPoint<S> base, std::vector<GaussBump<S>> bumps,
                WorkingBox<S> box = {})
      : base_(base), bumps_(std::move(bumps)), box_(box) {
    scan_positivity();
  }

  const MaterialPoint<S>& base() const { return base_; }
  const std::vector<GaussBump<S>>& bumps() const { return bumps_; }
  const WorkingBox<S>& box() const { return box_; }
  bool constant() const { return bumps_.empty(); }

  // Parameter value as a jet in N variables; the two spatial coordinates are
  // bound to jet slots (ix, iy). Pass ix = iy = -1 for a plain value.
  template <int N>
  Jet<S, N> param_jet(MaterialParam p, const Vec2<S>& x, int ix, int iy) const {
    require_inside(x);
    Jet<S, N> x0 = ix >= 0 ? Jet<S, N>::variable(x[0], ix) : Jet<S, N>(x[0]);
    Jet<S, N> x1 = iy >= 0 ? Jet<S, N>::variable(x[1], iy) : Jet<S, N>(x[1]);
    Jet<S, N> val(base_param(p));
    for (const auto& b : bumps_) {
      if (b.param != p) continue;
      Jet<S, N> dx = x0 - b.center[0];
      Jet<S, N> dy = x1 - b.center[1];
      Jet<S, N> arg = (sq(dx) + sq(dy)) * (S(-0.5) / (b.width * b.width));
      val = val + b.amplitude * exp(arg);
    }
    return val;
  }

  MaterialPoint<S> at(const Vec2<S>& x) const {
    MaterialPoint<S> m;
    m.rho = param_jet<1>(MaterialParam::kRho, x, -1, -1).v;
    m.lam = param_jet<1>(MaterialParam::kLam, x, -1, -1).v;
    m.mu = param_jet<1>(MaterialParam::kMu, x, -1, -1).v;
    return m;
  }

  void require_inside(const Vec2<S>& x) const {
    if (!box_.contains(x)) {
      throw OutsideWorkingBox("evaluation point left the working box");
    }
  }

 private:
  S base_param(MaterialParam p) const {
    switch (p) {
      case MaterialParam::kRho: return base_.rho;
      case MaterialParam::kLam: return base_.lam;
      default: return base_.mu;
    }
  }

  // Certify positivity of all three parameters on a dense box grid
  // (spacing = min bump width / 4).
  void scan_positivity() const {
    require_positive(base_);
    if (bumps_.empty()) return;
    S minw = bumps_.front().width;
    for (const auto& b : bumps_) {
      if (!(b.width > S(0))) throw NonPositiveParameter("bump width must be positive");
      minw = std::min(minw, b.width);
    }
    const S step = minw / S(4);
    const int nx = std::max(2, int((box_.hi[0] - box_.lo[0]) / step) + 1);
    const int ny = std::max(2, int((box_.hi[1] - box_.lo[1]) / step) + 1);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        Vec2<S> x(box_.lo[0] + (box_.hi[0] - box_.lo[0]) * S(i) / S(nx - 1),
                  box_.lo[1] + (box_.hi[1] - box_.lo[1]) * S(j) / S(ny - 1));
        MaterialPoint<S> m = at(x);
        if (!(m.rho > S(0)) || !(m.lam > S(0)) || !(m.mu > S(0))) {
          throw NonPositiveParameter("material not positive on the working box");
        }
      }
    }
  }

  MaterialPoint<S> base_{};
  std::vector<GaussBump<S>> bumps_{};
  WorkingBox<S> box_{};
};

template <class S>
struct MaterialPair {
  MaterialField<S> plus;
  MaterialField<S> minus;
};

// ---------------------------------------------------------------------------
// Boundary Riemannian metric: SPD 2x2 field with analytic derivatives.

enum class MetricEntry { kG11 = 0, kG12 = 1, kG22 = 2 };

template <class S>
struct MetricBump {
  MetricEntry entry{MetricEntry::kG11};
  S amplitude{0};
  Vec2<S> center = Vec2<S>::Zero();
  S width{1};
};

template <class S>
class BoundaryMetric {
 public:
  BoundaryMetric() = default;  // identity metric
  BoundaryMetric(Mat2<S> base, std::vector<MetricBump<S>> bumps,
                 WorkingBox<S> box = {})
      : base_(base), bumps_(std::move(bumps)), box_(box) {
    identity_ = bumps_.empty() && base_.isIdentity(S(0));
    scan_spd();
  }

  bool identity() const { return identity_; }
  const WorkingBox<S>& box() const { return box_; }

  // Metric matrix entries as jets in N variables (spatial slots ix, iy).
  template <int N>
  Eigen::Matrix<Jet<S, N>, 2, 2> matrix_jet(const Vec2<S>& x, int ix, int iy) const {
    Eigen::Matrix<Jet<S, N>, 2, 2> g;
    g(0, 0) = entry_jet<N>(MetricEntry::kG11, x, ix, iy);
    g(0, 1) = entry_jet<N>(MetricEntry::kG12, x, ix, iy);
    g(1, 0) = g(0, 1);
    g(1, 1) = entry_jet<N>(MetricEntry::kG22, x, ix, iy);
    return g;
  }

  // Inverse metric entries as jets (closed-form 2x2 inverse).
  template <int N>
  Eigen::Matrix<Jet<S, N>, 2, 2> inverse_jet(const Vec2<S>& x, int ix, int iy) const {
    auto g = matrix_jet<N>(x, ix, iy);
    Jet<S, N> det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    if (!(det.v > S(1e-8))) throw DegenerateMetric("metric determinant below floor");
    Jet<S, N> idet = inverse(det);
    Eigen::Matrix<Jet<S, N>, 2, 2> gi;
    gi(0, 0) = g(1, 1) * idet;
    gi(1, 1) = g(0, 0) * idet;
    gi(0, 1) = -(g(0, 1) * idet);
    gi(1, 0) = gi(0, 1);
    return gi;
  }

  Mat2<S> at(const Vec2<S>& x) const {
    auto g = matrix_jet<1>(x, -1, -1);
    Mat2<S> m;
    m << g(0, 0).v, g(0, 1).v, g(1, 0).v, g(1, 1).v;
    return m;
  }

  Mat2<S> inverse_at(const Vec2<S>& x) const {
    auto gi = inverse_jet<1>(x, -1, -1);
    Mat2<S> m;
    m << gi(0, 0).v, gi(0, 1).v, gi(1, 0).v, gi(1, 1).v;
    return m;
  }

 private:
  template <int N>
  Jet<S, N> entry_jet(MetricEntry e, const Vec2<S>& x, int ix, int iy) const {
    Jet<S, N> x0 = ix >= 0 ? Jet<S, N>::variable(x[0], ix) : Jet<S, N>(x[0]);
    Jet<S, N> x1 = iy >= 0 ? Jet<S, N>::variable(x[1], iy) : Jet<S, N>(x[1]);
    Jet<S, N> val(base_entry(e));
    for (const auto& b : bumps_) {
      if (b.entry != e) continue;
      Jet<S, N> dx = x0 - b.center[0];
      Jet<S, N> dy = x1 - b.center[1];
      Jet<S, N> arg = (sq(dx) + sq(dy)) * (S(-0.5) / (b.width * b.width));
      val = val + b.amplitude * exp(arg);
    }
    return val;
  }

  S base_entry(MetricEntry e) const {
    switch (e) {
      case MetricEntry::kG11: return base_(0, 0);
      case MetricEntry::kG12: return base_(0, 1);
      default: return base_(1, 1);
    }
  }

  void scan_spd() const {
    const S floor = S(1e-8);
    S minw = S(1);
    for (const auto& b : bumps_) {
      if (!(b.width > S(0))) throw DegenerateMetric("metric bump width must be positive");
      minw = std::min(minw, b.width);
    }
    const S step = bumps_.empty() ? (box_.hi[0] - box_.lo[0]) / S(4) : minw / S(4);
    const int nx = std::max(2, int((box_.hi[0] - box_.lo[0]) / step) + 1);
    const int ny = std::max(2, int((box_.hi[1] - box_.lo[1]) / step) + 1);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        Vec2<S> x(box_.lo[0] + (box_.hi[0] - box_.lo[0]) * S(i) / S(nx - 1),
                  box_.lo[1] + (box_.hi[1] - box_.lo[1]) * S(j) / S(ny - 1));
        Mat2<S> g = at(x);
        const S tr = g(0, 0) + g(1, 1);
        const S det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
        const S disc = std::sqrt(std::max(S(0), tr * tr / S(4) - det));
        if (!(tr / S(2) - disc >= floor)) {
          throw DegenerateMetric("metric eigenvalue below floor on the working box");
        }
      }
    }
  }

  Mat2<S> base_ = Mat2<S>::Identity();
  std::vector<MetricBump<S>> bumps_{};
  WorkingBox<S> box_{};
  bool identity_ = true;
};

// |xi|_g = sqrt(g^{ij} xi_i xi_j) via the inverse metric; degree-1 homogeneous.
template <class S>
S covector_norm(const BoundaryMetric<S>& g, const Vec2<S>& x, const Vec2<S>& xi) {
  if (g.identity()) return xi.norm();
  Mat2<S> gi = g.inverse_at(x);
  const S q = xi.dot(gi * xi);
  return std::sqrt(std::max(S(0), q));
}

// ---------------------------------------------------------------------------
// Boundary phase-space sample.

template <class S>
struct EllipticPoint {
  S t{0};
  Vec2<S> x = Vec2<S>::Zero();
  S tau{0};
  Vec2<S> xi = Vec2<S>::Zero();

  S xi_norm(const BoundaryMetric<S>& g) const { return covector_norm(g, x, xi); }
  // Slowness s = tau / |xi|_g.
  S slowness(const BoundaryMetric<S>& g) const { return tau / xi_norm(g); }
};

// Enforce the strict elliptic-region membership tau^2 < c_s^2 |xi|_g^2 with
// relative margin 1e-10, and tau > 0.
template <class S>
void require_elliptic(const EllipticPoint<S>& pt, const MaterialPoint<S>& m,
                      const BoundaryMetric<S>& g) {
  if (!(pt.tau > S(0))) throw OutsideEllipticRange("tau must be positive");
  const S n = pt.xi_norm(g);
  if (!(n > S(0))) throw OutsideEllipticRange("covector must be nonzero");
  const S cs = m.cs();
  if (!(pt.tau * pt.tau / (cs * cs * n * n) <= S(1) - S(1e-10))) {
    throw OutsideEllipticRange("point outside the elliptic region");
  }
}

}  // namespace raystone
