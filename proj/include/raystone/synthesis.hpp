// Boundary-field synthesis: polarization columns, spectral wave-packet and
// causal-source quadratures over either the exact constant-coefficient phase
// or ray-traced phase charts, particle-motion ellipse checks, and the
// evanescent extension of the boundary field into the bulk.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "raystone/flat.hpp"
#include "raystone/rays.hpp"

namespace raystone {

// ---------------------------------------------------------------------------
// Data carriers.

// Scalar spectrum on a xi'-grid with a Gaussian window for book-keeping.
template <class S>
struct WavePacketData {
  XiGrid<S> grid;
  std::vector<Cx<S>> h_hat;               // scalar spectral samples on the grid
  Vec2<S> center = Vec2<S>::Zero();       // spectral window center
  S width{0};                             // Gaussian envelope scale (0: no window)
};

// Gaussian packet centered at `center`, envelope exp(-|xi-center|^2 / (2 w^2)),
// sampled out to span_sigmas * w so the window is fully resolved by the grid.
// A single-row grid (n2 == 1) collapses the second axis onto the center line.
template <class S>
WavePacketData<S> gaussian_packet(const Vec2<S>& center, S width, int n1, int n2,
                                  S span_sigmas = S(7.5)) {
  if (!(width > S(0))) throw NonPositiveParameter("packet width must be positive");
  WavePacketData<S> p;
  p.center = center;
  p.width = width;
  const S span = span_sigmas * width;
  p.grid = centered_grid(center, Vec2<S>(span, n2 > 1 ? span : S(0)), n1, n2);
  p.h_hat.resize(p.grid.count());
  for (int idx = 0; idx < p.grid.count(); ++idx) {
    const Vec2<S> d = p.grid.at(idx) - center;
    p.h_hat[idx] = Cx<S>(std::exp(-d.squaredNorm() / (S(2) * width * width)), S(0));
  }
  return p;
}

// A packet is usable when its spectrum stays away from the zero frequency
// and, for windowed (Gaussian) packets, the envelope has decayed below 1e-12
// of its peak before the grid edge.  Spectra with width == 0 skip the edge
// check; their resolution is the caller's responsibility.
template <class S>
void validate_packet(const WavePacketData<S>& p) {
  if (static_cast<int>(p.h_hat.size()) != p.grid.count() || p.grid.count() == 0)
    throw InvalidInput("packet spectrum size does not match its grid");
  S mx = S(0);
  for (const auto& v : p.h_hat) mx = std::max(mx, std::abs(v));
  if (!(mx > S(0))) throw InvalidInput("packet spectrum is identically zero");
  const S floor = S(1e-12) * mx;
  for (int idx = 0; idx < p.grid.count(); ++idx) {
    if (std::abs(p.h_hat[idx]) <= floor) continue;
    if (!(p.grid.at(idx).norm() > S(1e-9) * (S(1) + p.center.norm())))
      throw InvalidInput("packet support touches the zero frequency");
  }
  if (p.width > S(0)) {
    for (int i = 0; i < p.grid.n1; ++i)
      for (int j = 0; j < p.grid.n2; ++j) {
        const bool edge1 = p.grid.n1 > 1 && (i == 0 || i == p.grid.n1 - 1);
        const bool edge2 = p.grid.n2 > 1 && (j == 0 || j == p.grid.n2 - 1);
        if ((edge1 || edge2) && std::abs(p.h_hat[j * p.grid.n1 + i]) > floor)
          throw InvalidInput("packet window is not resolved by the grid");
      }
  }
}

// Causal boundary forcing: vector spectra l_hat(s_k, xi) at uniformly spaced
// times inside (0, expiry), odd count for composite Simpson.
template <class S>
struct SourceData {
  XiGrid<S> grid;
  std::vector<S> times;
  std::vector<CVec3<S>> l_hat;   // [k * grid.count() + idx]
  S expiry{};
};

// Rectangular boundary evaluation grid.
template <class S>
struct XYGrid {
  Vec2<S> lo = Vec2<S>::Zero();
  Vec2<S> step = Vec2<S>::Zero();
  int n1 = 0;
  int n2 = 1;

  int count() const { return n1 * n2; }
  Vec2<S> at(int i, int j) const {
    return Vec2<S>(lo[0] + S(i) * step[0], lo[1] + S(j) * step[1]);
  }
  Vec2<S> at(int idx) const { return at(idx % n1, idx / n1); }
};

template <class S>
XYGrid<S> uniform_xy(const Vec2<S>& lo, const Vec2<S>& hi, int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw NonPositiveParameter("grid sample counts must be positive");
  XYGrid<S> g;
  g.lo = lo;
  g.n1 = n1;
  g.n2 = n2;
  g.step[0] = n1 > 1 ? (hi[0] - lo[0]) / S(n1 - 1) : S(0);
  g.step[1] = n2 > 1 ? (hi[1] - lo[1]) / S(n2 - 1) : S(0);
  return g;
}

// Complex 3-vector field sampled on a boundary grid at one time.
template <class S>
struct BoundaryFieldGrid {
  S t{};
  XYGrid<S> grid;
  std::vector<CVec3<S>> f;

  const CVec3<S>& at(int i, int j) const { return f[j * grid.n1 + i]; }
};

// ---------------------------------------------------------------------------
// Mode scalars: everything the polarization column and the synthesis
// normalizations need at one boundary point, for either wave family.

namespace detail {

template <class S>
struct ModeScalars {
  S c{};             // surface / interface speed at the point
  S horiz{};         // horizontal column scale: mu theta_bar or zeta1
  S vert{};          // vertical column scale: b rho c^2 or zeta2
  S k1bar{};         // eigencolumn normalization
  S source_norm{};   // denominator of the causal-source representation
};

template <class S>
ModeScalars<S> mode_scalars(const SpeedField<S>& model, const Vec2<S>& x, S hint = S(-1)) {
  using std::sqrt;
  ModeScalars<S> ms;
  ms.c = model.speed(x, hint);
  if (model.kind == WaveKind::kRayleigh) {
    const MaterialPoint<S> m = model.field->at(x);
    const DispersionKernels<S> k = kernels(ms.c, m);
    ms.horiz = m.mu * k.theta_bar;
    ms.vert = k.b * m.rho * ms.c * ms.c;
    ms.k1bar = S(2) * m.mu * (S(1) - sqrt(k.a * k.b)) * sqrt(k.b * (k.a + k.b));
    const S rp = rayleigh_residual_jet(ms.c, m).g[0];
    ms.source_norm = ms.vert * rp;
  } else {
    const MaterialPoint<S> p = model.pair->plus.at(x);
    const MaterialPoint<S> q = model.pair->minus.at(x);
    const InterfaceScalarsT<S> sc =
        interface_scalars_t(ms.c, p.rho, p.lam, p.mu, q.rho, q.lam, q.mu);
    ms.horiz = sc.zeta1;
    ms.vert = sc.m11;
    ms.k1bar = sqrt(sc.zeta1 * sc.zeta1 + sc.m11 * sc.m11);
    const S m1p = stoneley_m1_jet(ms.c, p, q).g[0];
    ms.source_norm = m1p * ms.k1bar;
  }
  return ms;
}

// Column applied to the scalar mode, without the a0 / normalization factors.
template <class S>
CVec3<S> mode_column(const ModeScalars<S>& ms, const Vec2<S>& xihat) {
  const Cx<S> i(S(0), S(1));
  CVec3<S> col;
  col[0] = i * ms.horiz * xihat[0];
  col[1] = i * ms.horiz * xihat[1];
  col[2] = Cx<S>(ms.vert);
  return col;
}

// Scalar amplitude a vector forcing feeds into the mode.
template <class S>
Cx<S> mode_bracket(const ModeScalars<S>& ms, const Vec2<S>& xihat, const CVec3<S>& l) {
  const Cx<S> i(S(0), S(1));
  return ms.horiz * (xihat[0] * l[0] + xihat[1] * l[1]) + i * ms.vert * l[2];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Polarization samples and ellipse checks.

template <class S>
struct PolarizationSample {
  EllipticPoint<S> pt{};
  CVec3<S> p = CVec3<S>::Zero();    // complex displacement polarization
  Vec3<S> re_p = Vec3<S>::Zero();
  Vec3<S> im_p = Vec3<S>::Zero();
  Vec2<S> dhat = Vec2<S>::Zero();   // horizontal propagation direction
  S horiz_scale{}, vert_scale{};    // ellipse scales of the column
  S k1bar{};
  S amp{};                          // |a0|
};

namespace detail {

template <class S>
PolarizationSample<S> polarization_sample(const EllipticPoint<S>& pt, Cx<S> a0,
                                          const SpeedField<S>& model) {
  const BoundaryMetric<S>& g = *model.metric;
  const S n = covector_norm(g, pt.x, pt.xi);
  const S s = pt.tau / n;
  ModeScalars<S> ms = mode_scalars(model, pt.x);
  if (!(std::abs(s - ms.c) <= S(1e-6) * ms.c))
    throw OffCharacteristic("slowness is not on the surface-wave characteristic");

  const Vec2<S> xif = detail::frame_components(g, pt.x, pt.xi);
  const Vec2<S> xihat = xif / n;
  PolarizationSample<S> ps;
  ps.pt = pt;
  ps.p = mode_column(ms, xihat) * (a0 / ms.k1bar);
  for (int k = 0; k < 3; ++k) {
    ps.re_p[k] = ps.p[k].real();
    ps.im_p[k] = ps.p[k].imag();
  }
  const Vec2<S> v = g.inverse_at(pt.x) * pt.xi;
  ps.dhat = -v / v.norm();
  ps.horiz_scale = ms.horiz;
  ps.vert_scale = ms.vert;
  ps.k1bar = ms.k1bar;
  ps.amp = std::abs(a0);
  return ps;
}

}  // namespace detail

// Surface-wave polarization at an on-characteristic boundary point: the
// column (i mu theta_bar xihat1, i mu theta_bar xihat2, b rho c^2) scaled by
// a0 / k1bar.  Throws OffCharacteristic when tau / |xi|_g is not the local
// surface speed (relative tolerance 1e-6).
template <class S>
PolarizationSample<S> rayleigh_polarization(const EllipticPoint<S>& pt, Cx<S> a0,
                                            const MaterialField<S>& m,
                                            const BoundaryMetric<S>& g) {
  return detail::polarization_sample(pt, a0, SpeedField<S>::rayleigh(m, g));
}

// Interface-wave polarization: column (i zeta1 xihat1, i zeta1 xihat2, zeta2)
// scaled by a0 / k1bar, with the impedance-contrast scalars evaluated at the
// interface speed.
template <class S>
PolarizationSample<S> stoneley_polarization(const EllipticPoint<S>& pt, Cx<S> a0,
                                            const MaterialPair<S>& pair,
                                            const BoundaryMetric<S>& g) {
  return detail::polarization_sample(pt, a0, SpeedField<S>::stoneley(pair, g));
}

// Largest deviation, over sampled phases, of the scaled displacement from the
// polarization ellipsoid (relative to its radius |a0|^2 / k1bar^2).
template <class S>
S ellipsoid_residual(const PolarizationSample<S>& ps, int nphases = 32) {
  const S h2 = ps.horiz_scale * ps.horiz_scale;
  const S v2 = ps.vert_scale * ps.vert_scale;
  const S radius = ps.amp * ps.amp / (ps.k1bar * ps.k1bar);
  S worst = S(0);
  for (int k = 0; k < nphases; ++k) {
    const S chi = S(2) * pi_v<S> * S(k) / S(nphases);
    Vec3<S> u;
    for (int c = 0; c < 3; ++c) u[c] = (std::polar(S(1), chi) * ps.p[c]).real();
    const S lhs = (u[0] * u[0] + u[1] * u[1]) / h2 + u[2] * u[2] / v2;
    worst = std::max(worst, std::abs(lhs - radius) / radius);
  }
  return worst;
}

// Particle-motion report for one period of the surface wave at a fixed point.
template <class S>
struct EllipseReport {
  bool phase_rate_positive{};    // total phase strictly increasing across samples
  bool retrograde_re{};          // real-part trace orbits against the propagation
  bool retrograde_im{};          // imaginary-part trace likewise
  S semi_major{}, semi_minor{};  // ellipse semi-axes of the real trace
  S axis_ratio{};                // semi_major / semi_minor
  S signed_area_rate{};          // analytic orbit rate; > 0 means retrograde
};

// Checks the particle orbit traced by >= 16 samples of the polarization over
// one period.  `phase[k]` is the total propagation phase at sample k
// (strictly increasing across one full turn).  Retrograde means that at the
// sample of largest upward displacement (upward = against the interior
// normal, i.e. -x3) the horizontal velocity along the propagation direction
// is negative.
template <class S>
EllipseReport<S> retrograde_check(const std::vector<PolarizationSample<S>>& series,
                                  const std::vector<S>& phase) {
  const int n = static_cast<int>(series.size());
  if (n < 16 || static_cast<int>(phase.size()) != n)
    throw InvalidInput("need at least 16 matching polarization/phase samples");

  EllipseReport<S> rep;
  rep.phase_rate_positive = true;
  for (int k = 1; k < n; ++k)
    if (!(phase[k] > phase[k - 1])) rep.phase_rate_positive = false;

  // Ellipse axes and degeneracy from the first sample's complex vector.
  {
    Eigen::Matrix<S, 3, 2> tr;
    tr.col(0) = series[0].re_p;
    tr.col(1) = series[0].im_p;
    Eigen::JacobiSVD<Eigen::Matrix<S, 3, 2>> svd(tr);
    rep.semi_major = svd.singularValues()[0];
    rep.semi_minor = svd.singularValues()[1];
    if (!(rep.semi_minor > S(1e-12) * rep.semi_major))
      throw DegenerateEllipse("particle orbit collapses to a segment");
    rep.axis_ratio = rep.semi_major / rep.semi_minor;
  }

  const auto orbit_retrograde = [&](bool imag_part) {
    std::vector<S> up(n), fwd(n);
    for (int k = 0; k < n; ++k) {
      const Cx<S> rot = std::polar(S(1), phase[k]);
      CVec3<S> u = series[k].p * rot;
      const S u1 = imag_part ? u[0].imag() : u[0].real();
      const S u2 = imag_part ? u[1].imag() : u[1].real();
      const S u3 = imag_part ? u[2].imag() : u[2].real();
      up[k] = -u3;  // upward direction is -x3
      fwd[k] = u1 * series[k].dhat[0] + u2 * series[k].dhat[1];
    }
    int kmax = 0;
    for (int k = 1; k < n; ++k)
      if (up[k] > up[kmax]) kmax = k;
    // Cyclic centered difference; the sample set covers one period.
    const int kp = (kmax + 1) % n, km = (kmax + n - 1) % n;
    S dphi = phase[kp] - phase[km];
    while (dphi <= S(0)) dphi += S(2) * pi_v<S>;
    const S vel = (fwd[kp] - fwd[km]) / dphi;
    return vel < S(0);
  };
  rep.retrograde_re = orbit_retrograde(false);
  rep.retrograde_im = orbit_retrograde(true);

  // Analytic orbit rate: Im(A conj(B)) with A the complex forward amplitude
  // and B the complex upward amplitude; positive means retrograde.
  {
    const PolarizationSample<S>& s0 = series[0];
    const Cx<S> a = s0.p[0] * s0.dhat[0] + s0.p[1] * s0.dhat[1];
    const Cx<S> b = -s0.p[2];
    rep.signed_area_rate = (a * std::conj(b)).imag();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Synthesis engine.

enum class SynthesisPath { kAuto, kFlat, kChart };

template <class S>
struct ChartPolicy {
  int max_directions = 96;   // switch point between exact and fan directions
  int seed_nx = 11, seed_ny = 11;
  S pad_abs = S(0.75);       // seed-box padding beyond the advected x-box
  S pad_rel = S(0.25);
  S dt = S(-1);              // ray step (default: evolve-time / 100)
  bool include_r0 = true;    // subleading transport correction along rays
  S significant_rel = S(1e-14);
};

namespace detail {

template <class S>
bool constant_model(const SpeedField<S>& model) {
  if (!model.metric->identity()) return false;
  if (model.kind == WaveKind::kRayleigh) return model.field->constant();
  return model.pair->plus.constant() && model.pair->minus.constant();
}

enum class WeightMode { kScalar, kVector };

// Catmull-Rom weights for the four samples around local coordinate u in [0,1].
template <class S>
std::array<S, 4> cr_weights(S u) {
  const S u2 = u * u, u3 = u2 * u;
  return {S(0.5) * (-u3 + S(2) * u2 - u), S(0.5) * (S(3) * u3 - S(5) * u2 + S(2)),
          S(0.5) * (S(-3) * u3 + S(4) * u2 + u), S(0.5) * (u3 - u2)};
}

// Constant-coefficient evaluation: closed-form phase, unit amplitude,
// separable two-stage spectral sum.
template <class S>
BoundaryFieldGrid<S> synth_flat(const XiGrid<S>& grid, const std::vector<CVec3<S>>& l,
                                WeightMode wm, S te, S t_report, const XYGrid<S>& xs,
                                const SpeedField<S>& model, bool source_norm) {
  const Vec2<S> x0 = xs.at(0, 0);
  ModeScalars<S> ms = mode_scalars(model, x0);
  const S norm = source_norm ? S(1) / ms.source_norm : S(1) / ms.k1bar;

  // Stage 0: per-node coefficient vector (everything but e^{i x . xi}).
  std::vector<CVec3<S>> coeff(grid.count());
  for (int idx = 0; idx < grid.count(); ++idx) {
    const Vec2<S> xi = grid.at(idx);
    const S k = xi.norm();
    const Vec2<S> xihat = xi / k;
    const Cx<S> w = wm == WeightMode::kScalar ? l[idx][0] : mode_bracket(ms, xihat, l[idx]);
    coeff[idx] = mode_column(ms, xihat) *
                 (w * norm * grid.weight * std::polar(S(1), te * ms.c * k));
  }

  // Stage 1: collapse the xi2 axis against each x2 row.
  std::vector<CVec3<S>> partial(static_cast<size_t>(grid.n1) * xs.n2, CVec3<S>::Zero());
  for (int j2 = 0; j2 < xs.n2; ++j2) {
    const S x2 = xs.at(0, j2)[1];
    for (int i1 = 0; i1 < grid.n1; ++i1) {
      CVec3<S> acc = CVec3<S>::Zero();
      for (int i2 = 0; i2 < grid.n2; ++i2) {
        const S xi2 = grid.at(i1, i2)[1];
        acc += coeff[i2 * grid.n1 + i1] * std::polar(S(1), x2 * xi2);
      }
      partial[j2 * grid.n1 + i1] = acc;
    }
  }

  // Stage 2: collapse the xi1 axis against each x1 column.
  BoundaryFieldGrid<S> out;
  out.t = t_report;
  out.grid = xs;
  out.f.assign(xs.count(), CVec3<S>::Zero());
  for (int j2 = 0; j2 < xs.n2; ++j2)
    for (int j1 = 0; j1 < xs.n1; ++j1) {
      const S x1 = xs.at(j1, j2)[0];
      CVec3<S> acc = CVec3<S>::Zero();
      for (int i1 = 0; i1 < grid.n1; ++i1) {
        const S xi1 = grid.at(i1, 0)[0];
        acc += partial[j2 * grid.n1 + i1] * std::polar(S(1), x1 * xi1);
      }
      out.f[j2 * xs.n1 + j1] = acc;
    }
  return out;
}

// Ray-chart evaluation: one chart per propagation direction (phases are
// degree-1 and amplitudes degree-0 homogeneous in |xi|, so unit-frequency
// charts serve every magnitude), exact per-node directions when few enough,
// otherwise a uniform fan blended with Catmull-Rom in the angle.
template <class S>
BoundaryFieldGrid<S> synth_chart(const XiGrid<S>& grid, const std::vector<CVec3<S>>& l,
                                 WeightMode wm, S te, S t_report, const XYGrid<S>& xs,
                                 const SpeedField<S>& model, bool source_norm,
                                 const ChartPolicy<S>& pol) {
  // Significant spectrum nodes.
  S wmax = S(0);
  for (const auto& v : l) wmax = std::max(wmax, v.norm());
  if (!(wmax > S(0))) {
    BoundaryFieldGrid<S> out;
    out.t = t_report;
    out.grid = xs;
    out.f.assign(xs.count(), CVec3<S>::Zero());
    return out;
  }
  std::vector<int> sig;
  for (int idx = 0; idx < grid.count(); ++idx)
    if (l[idx].norm() > pol.significant_rel * wmax) sig.push_back(idx);

  // Direction set.
  std::vector<S> angles(sig.size());
  for (size_t k = 0; k < sig.size(); ++k) {
    const Vec2<S> xi = grid.at(sig[k]);
    angles[k] = std::atan2(xi[1], xi[0]);
  }
  std::vector<S> dirs;       // chart angles
  std::vector<int> node_dir; // exact mode: direction id per significant node
  bool exact_dirs = true;
  {
    std::map<long long, int> uniq;
    const S quant = S(1e-9);
    for (size_t k = 0; k < sig.size(); ++k) {
      const long long key = llround(static_cast<double>(angles[k] / quant));
      auto it = uniq.find(key);
      if (it == uniq.end()) {
        if (static_cast<int>(dirs.size()) >= pol.max_directions) {
          exact_dirs = false;
          break;
        }
        uniq.emplace(key, static_cast<int>(dirs.size()));
        node_dir.push_back(static_cast<int>(dirs.size()));
        dirs.push_back(angles[k]);
      } else {
        node_dir.push_back(it->second);
      }
    }
  }
  S fan_lo = S(0), fan_step = S(1);
  bool fan_periodic = false;
  if (!exact_dirs) {
    // Uniform fan over the angular extent of the spectrum (padded), or the
    // whole circle when the spectrum surrounds the origin.
    S amin = angles[0], amax = angles[0];
    for (S a : angles) {
      amin = std::min(amin, a);
      amax = std::max(amax, a);
    }
    const int nd = pol.max_directions;
    if (amax - amin > pi_v<S>) {
      fan_periodic = true;
      fan_lo = -pi_v<S>;
      fan_step = S(2) * pi_v<S> / S(nd);
      dirs.assign(nd, S(0));
      for (int d = 0; d < nd; ++d) dirs[d] = fan_lo + S(d) * fan_step;
    } else {
      fan_step = (amax - amin) / S(nd - 5);
      if (!(fan_step > S(0))) fan_step = S(1e-3);
      fan_lo = amin - S(2) * fan_step;
      dirs.assign(nd, S(0));
      for (int d = 0; d < nd; ++d) dirs[d] = fan_lo + S(d) * fan_step;
    }
  }

  // One phase chart per direction; the seed box is the evaluation box
  // advected upstream by the evolve time and padded.
  const WorkingBox<S>& box = model.primary().box();
  const Vec2<S> xlo = xs.at(0, 0);
  const Vec2<S> xhi = xs.at(xs.n1 - 1, xs.n2 - 1);
  const Vec2<S> xc = (xlo + xhi) / S(2);
  const S cbar = model.speed(xc);
  std::vector<PhaseChart<S>> charts;
  charts.reserve(dirs.size());
  for (S th : dirs) {
    const Vec2<S> xihat(std::cos(th), std::sin(th));
    const Vec2<S> shift = te * cbar * xihat;
    const S pad = pol.pad_abs + pol.pad_rel * ((xhi - xlo).norm() + te * cbar);
    SeedGrid<S> seeds;
    seeds.nx = pol.seed_nx;
    seeds.ny = pol.seed_ny;
    for (int c = 0; c < 2; ++c) {
      // A seed's ray sweeps roughly from the seed to seed - shift; keep that
      // whole segment inside the working box (with slack for ray bending).
      const S slack = S(0.15) * std::abs(shift[c]) + S(1e-9);
      const S lo_ok = box.lo[c] + std::max(shift[c], S(0)) + slack;
      const S hi_ok = box.hi[c] + std::min(shift[c], S(0)) - slack;
      seeds.lo[c] = std::max(std::min(xlo[c], xlo[c] + shift[c]) - pad, lo_ok);
      seeds.hi[c] = std::min(std::max(xhi[c], xhi[c] + shift[c]) + pad, hi_ok);
      if (!(seeds.lo[c] < seeds.hi[c]))
        throw LeftWorkingBox("chart seeds cannot stay inside the working box");
    }
    charts.push_back(phase_chart(te, xihat, seeds, model, pol.dt, true, pol.include_r0));
  }

  BoundaryFieldGrid<S> out;
  out.t = t_report;
  out.grid = xs;
  out.f.assign(xs.count(), CVec3<S>::Zero());

  const BoundaryMetric<S>& g = *model.metric;
  std::vector<char> have(dirs.size());
  std::vector<typename PhaseChart<S>::Value> vals(dirs.size());
  S hint = S(-1);
  for (int jx = 0; jx < xs.count(); ++jx) {
    const Vec2<S> x = xs.at(jx);
    ModeScalars<S> ms = mode_scalars(model, x, hint);
    hint = ms.c;
    const S norm = source_norm ? S(1) / ms.source_norm : S(1) / ms.k1bar;
    std::fill(have.begin(), have.end(), 0);
    const auto chart_value = [&](int d) -> const typename PhaseChart<S>::Value& {
      if (!have[d]) {
        vals[d] = charts[d].interp(x);
        have[d] = 1;
      }
      return vals[d];
    };

    CVec3<S> acc = CVec3<S>::Zero();
    for (size_t k = 0; k < sig.size(); ++k) {
      const int idx = sig[k];
      const Vec2<S> xi = grid.at(idx);
      const S kn = xi.norm();

      typename PhaseChart<S>::Value v;
      if (exact_dirs) {
        v = chart_value(node_dir[k]);
      } else {
        S u = (angles[k] - fan_lo) / fan_step;
        int j0 = static_cast<int>(std::floor(u));
        const int nd = static_cast<int>(dirs.size());
        if (!fan_periodic) j0 = std::min(std::max(j0, 1), nd - 3);
        const auto wts = cr_weights(u - S(j0));
        v = typename PhaseChart<S>::Value{};
        for (int a = 0; a < 4; ++a) {
          int j = j0 - 1 + a;
          if (fan_periodic)
            j = (j % nd + nd) % nd;
          const auto& cv = chart_value(j);
          v.phi += wts[a] * cv.phi;
          v.grad += wts[a] * cv.grad;
          v.log_amp += wts[a] * cv.log_amp;
        }
      }

      // Local frequency direction from the chart gradient, frame-normalized.
      const Vec2<S> gradk = v.grad;
      const S nloc = covector_norm(g, x, gradk);
      const Vec2<S> xihat_f = frame_components(g, x, gradk) / nloc;

      const Cx<S> w = wm == WeightMode::kScalar ? l[idx][0] : mode_bracket(ms, xihat_f, l[idx]);
      const Cx<S> a0 = std::exp(-v.log_amp);
      acc += mode_column(ms, xihat_f) *
             (w * norm * grid.weight * a0 * std::polar(S(1), kn * v.phi));
    }
    out.f[jx] = acc;
  }
  return out;
}

template <class S>
BoundaryFieldGrid<S> surface_synthesis(const XiGrid<S>& grid, const std::vector<CVec3<S>>& l,
                                       WeightMode wm, S te, S t_report, const XYGrid<S>& xs,
                                       const SpeedField<S>& model, bool source_norm,
                                       SynthesisPath path, const ChartPolicy<S>& pol) {
  if (static_cast<int>(l.size()) != grid.count())
    throw InvalidInput("spectrum size does not match the grid");
  if (model.kind == WaveKind::kStoneley) {
    // Fail loudly when the interface carries no trapped wave.
    StoneleyRoot<S> root = stoneley_speed(model.pair->plus.at(xs.at(0, 0)),
                                          model.pair->minus.at(xs.at(0, 0)));
    if (!root.exists) throw NoStoneleyRoot("no interface wave for this material pair");
  }
  const bool flat = constant_model(model);
  if (path == SynthesisPath::kFlat && !flat)
    throw InvalidInput("constant-coefficient path requested for a varying model");
  if (path == SynthesisPath::kChart || (path == SynthesisPath::kAuto && !flat))
    return synth_chart(grid, l, wm, te, t_report, xs, model, source_norm, pol);
  return synth_flat(grid, l, wm, te, t_report, xs, model, source_norm);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public synthesis fronts.

// Field radiated by initial scalar data h_hat on the characteristic: each
// spectral node contributes its polarization column times the propagated
// phase (and ray amplitude on varying models).
template <class S>
BoundaryFieldGrid<S> cauchy_field(const WavePacketData<S>& packet, S t, const XYGrid<S>& xs,
                                  const SpeedField<S>& model,
                                  SynthesisPath path = SynthesisPath::kAuto,
                                  const ChartPolicy<S>& pol = {}) {
  validate_packet(packet);
  std::vector<CVec3<S>> l(packet.grid.count(), CVec3<S>::Zero());
  for (int idx = 0; idx < packet.grid.count(); ++idx) l[idx][0] = packet.h_hat[idx];
  return detail::surface_synthesis(packet.grid, l, detail::WeightMode::kScalar, t, t, xs,
                                   model, false, path, pol);
}

// Large-time field of a causal boundary forcing (after the source has
// expired): Simpson-in-time superposition of propagated source slices, each
// projected onto the surface-wave mode.
template <class S>
BoundaryFieldGrid<S> inhomogeneous_field(const SourceData<S>& src, S t, const XYGrid<S>& xs,
                                         const SpeedField<S>& model,
                                         SynthesisPath path = SynthesisPath::kAuto,
                                         const ChartPolicy<S>& pol = {}) {
  const int nt = static_cast<int>(src.times.size());
  if (nt < 3 || nt % 2 == 0)
    throw InvalidInput("Simpson quadrature needs an odd sample count >= 3");
  if (static_cast<int>(src.l_hat.size()) != nt * src.grid.count())
    throw InvalidInput("source sample size does not match times x grid");
  if (!(t >= src.expiry))
    throw SourceNotExpired("large-time representation requested before the source expired");
  const S ds = (src.times[nt - 1] - src.times[0]) / S(nt - 1);
  if (!(ds > S(0))) throw NonPositiveParameter("source samples must be increasing");

  BoundaryFieldGrid<S> out;
  out.t = t;
  out.grid = xs;
  out.f.assign(xs.count(), CVec3<S>::Zero());
  std::vector<CVec3<S>> slice(src.grid.count());
  for (int k = 0; k < nt; ++k) {
    const S sw = (k == 0 || k == nt - 1) ? S(1) : (k % 2 == 1 ? S(4) : S(2));
    const S wk = sw * ds / S(3);
    for (int idx = 0; idx < src.grid.count(); ++idx)
      slice[idx] = src.l_hat[k * src.grid.count() + idx] * wk;
    BoundaryFieldGrid<S> part =
        detail::surface_synthesis(src.grid, slice, detail::WeightMode::kVector,
                                  t - src.times[k], t, xs, model, true, path, pol);
    for (int jx = 0; jx < xs.count(); ++jx) out.f[jx] += part.f[jx];
  }
  return out;
}

// Interface-wave field driven by a causal transmission mismatch l: the lower
// trace f_minus is synthesized along the interface wave; the upper trace
// adds the (expired, hence vanishing) forcing back.
template <class S>
struct StoneleyFieldPair {
  BoundaryFieldGrid<S> f_minus;
  BoundaryFieldGrid<S> f_plus;
};

template <class S>
StoneleyFieldPair<S> stoneley_field(const SourceData<S>& src, S t, const XYGrid<S>& xs,
                                    const SpeedField<S>& model,
                                    SynthesisPath path = SynthesisPath::kAuto,
                                    const ChartPolicy<S>& pol = {}) {
  if (model.kind != WaveKind::kStoneley)
    throw InvalidInput("interface synthesis needs an interface speed model");
  StoneleyFieldPair<S> out;
  out.f_minus = inhomogeneous_field(src, t, xs, model, path, pol);
  out.f_plus = out.f_minus;  // the forcing has expired: l(t, .) = 0
  return out;
}

// Intensity centroid of a synthesized field, for packet tracking.
template <class S>
struct PacketCenterReport {
  Vec2<S> center = Vec2<S>::Zero();
  S mass{};
  S peak{};
};

template <class S>
PacketCenterReport<S> packet_center(const BoundaryFieldGrid<S>& field) {
  PacketCenterReport<S> rep;
  for (int jx = 0; jx < field.grid.count(); ++jx) {
    const S w = field.f[jx].squaredNorm();
    rep.mass += w;
    rep.center += w * field.grid.at(jx);
    rep.peak = std::max(rep.peak, std::sqrt(w));
  }
  if (!(rep.mass > S(0))) throw NumericalFailure("field is identically zero");
  rep.center /= rep.mass;
  return rep;
}

// ---------------------------------------------------------------------------
// Evanescent extension into the bulk.

enum class HalfSide { kPlus, kMinus };

// One boundary spectral mode to be continued into the half-space.
template <class S>
struct EvanescentMode {
  EllipticPoint<S> pt{};           // boundary frequency point
  CVec3<S> f_hat = CVec3<S>::Zero();  // spectral amplitude of the boundary trace
};

template <class S>
struct EvanescentProfile {
  std::vector<S> depth;                    // distance into the half-space
  std::vector<S> alpha_tilde, beta_tilde;  // per-mode decay radicals
  std::vector<CVec3<S>> w;                 // [mode * ndepth + d] decoupled profile
  std::vector<CVec3<S>> u;                 // displacement profile (outgoing basis)

  const CVec3<S>& w_at(int mode, int d) const { return w[mode * depth.size() + d]; }
  const CVec3<S>& u_at(int mode, int d) const { return u[mode * depth.size() + d]; }
};

// Continues boundary spectral data into the chosen half-space: the decoupled
// components decay like exp(-alpha_tilde x3), exp(-alpha_tilde x3),
// exp(-beta_tilde x3) with coefficients frozen at the boundary point, and the
// displacement is recomposed through the outgoing basis (exact for constant
// coefficients).  Depth is measured into the half-space, so the minus side
// of an interface decays in the opposite x3 direction.
template <class S>
EvanescentProfile<S> evanescent_profile(const std::vector<EvanescentMode<S>>& modes,
                                        const std::vector<S>& depths,
                                        const MaterialField<S>& m, const BoundaryMetric<S>& g,
                                        HalfSide side = HalfSide::kPlus) {
  for (S d : depths)
    if (!(d >= S(0))) throw InvalidInput("depths must be nonnegative");
  const S sgn = side == HalfSide::kPlus ? S(1) : S(-1);

  EvanescentProfile<S> out;
  out.depth = depths;
  const int nd = static_cast<int>(depths.size());
  out.w.assign(modes.size() * nd, CVec3<S>::Zero());
  out.u.assign(modes.size() * nd, CVec3<S>::Zero());
  out.alpha_tilde.resize(modes.size());
  out.beta_tilde.resize(modes.size());

  for (size_t mi = 0; mi < modes.size(); ++mi) {
    const EvanescentMode<S>& mode = modes[mi];
    const SymbolFrame<S> fr = make_symbol_frame(mode.pt, m, g);
    out.alpha_tilde[mi] = fr.alpha;
    out.beta_tilde[mi] = fr.beta;
    const BoundaryRestriction<S> basis =
        boundary_restriction_symbols(mode.pt, m.at(mode.pt.x), g, sgn);
    const CVec3<S> w0 = basis.u_out_inv.entries * mode.f_hat;
    for (int d = 0; d < nd; ++d) {
      CVec3<S> wd;
      wd[0] = w0[0] * std::exp(-fr.alpha * depths[d]);
      wd[1] = w0[1] * std::exp(-fr.alpha * depths[d]);
      wd[2] = w0[2] * std::exp(-fr.beta * depths[d]);
      out.w[mi * nd + d] = wd;
      out.u[mi * nd + d] = basis.u_out.entries * wd;
    }
  }
  return out;
}

}  // namespace raystone
