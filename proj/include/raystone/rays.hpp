// Geometric-optics engine: characteristics, paraxial data, and transport.
//
// The phase solves phi_t = lambda1(x, grad phi) with lambda1 = c(x) |xi|_g
// (c = surface or interface speed). Characteristics are integrated with the
// classical 4th-order scheme for the Hamiltonian H = tau - lambda1:
//   xdot  = -d lambda1 / d xi   (geometric speed c along -xi^),
//   xidot = +d lambda1 / d x.
// Along each ray we also integrate
//   * the phase (analytically constant = x0 . xi0; integrated and checked),
//   * the phase Hessian Phi = D^2_x phi via the matrix Riccati equation,
//   * the Jacobi matrix J = dx(t)/dx0 of the ray map (geometric spreading),
//   * the transport exponent: gamma = -(1/2) tr(lambda_xixi Phi) - r0,
//     a0 = exp(-int gamma).
// All lambda1 derivatives come from exact second-order jets; no derivative is
// hand-coded.
#pragma once

#include "raystone/speed_jets.hpp"
#include "raystone/symbols.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace raystone {

template <class S>
struct RayState {
  S t{};
  Vec2<S> x = Vec2<S>::Zero();
  Vec2<S> xi = Vec2<S>::Zero();
  S phase{};                       // x0 . xi0 up to integration roundoff
  Mat2<S> jac = Mat2<S>::Identity();   // dx(t)/dx0 along the Lagrangian manifold
  Mat2<S> hess = Mat2<S>::Zero();      // D^2_x phi on the ray
  std::complex<S> log_amp{};       // int_0^t gamma (filled by transport)
};

template <class S>
struct TransportLog {
  S gamma1_int{};            // real part of int gamma
  S gamma2_int{};            // imaginary part of int gamma
  std::complex<S> a0{S(1)};  // exp(-int gamma)
  S upsilon{};               // -gamma2_int (phase correction)
};

namespace detail {

// One evaluation of the ray right-hand side plus the jet blocks the paraxial
// and transport systems need.
template <class S>
struct FlowEval {
  Vec2<S> xdot, xidot;
  Mat2<S> lxx, lxxi, lxixi;  // Hessian blocks of lambda1
  S lambda;                  // lambda1 value (= conserved Hamiltonian)
};

template <class S>
FlowEval<S> flow_eval(const SpeedField<S>& model, const Vec2<S>& x, const Vec2<S>& xi,
                      S& hint) {
  S speed = S(-1);
  const Jet<S, 4> lam = lambda1_jet(model, x, xi, hint, &speed);
  hint = speed;
  FlowEval<S> f;
  f.xdot = Vec2<S>(-lam.g[2], -lam.g[3]);
  f.xidot = Vec2<S>(lam.g[0], lam.g[1]);
  f.lxx = lam.h.template topLeftCorner<2, 2>();
  f.lxxi = lam.h.template topRightCorner<2, 2>();
  f.lxixi = lam.h.template bottomRightCorner<2, 2>();
  f.lambda = lam.v;
  return f;
}

}  // namespace detail

// Trace a single characteristic from (x0, xi0) over [0, T] with uniform steps
// of size at most dt (dt must satisfy dt <= T/100). Returns samples at every
// step including t = 0 and t = T.
template <class S>
std::vector<RayState<S>> trace_ray(const Vec2<S>& x0, const Vec2<S>& xi0, S T, S dt,
                                   const SpeedField<S>& model) {
  if (!(T > S(0)) || !(dt > S(0))) throw NonPositiveParameter("T and dt must be positive");
  if (!(dt <= T / S(100) * (S(1) + S(1e-12)))) {
    throw InvalidInput("dt must not exceed T/100");
  }
  const int n = static_cast<int>(std::ceil(T / dt - S(1e-9)));
  const S h = T / S(n);

  std::vector<RayState<S>> out;
  out.reserve(n + 1);
  S hint = S(-1);
  const S phase0 = x0.dot(xi0);

  auto rhs = [&](const Vec2<S>& x, const Vec2<S>& xi, Vec2<S>& xd, Vec2<S>& xid, S& pd) {
    try {
      detail::FlowEval<S> f = detail::flow_eval(model, x, xi, hint);
      xd = f.xdot;
      xid = f.xidot;
      // d(phase)/dt = lambda1 + xdot . xi; analytically zero (degree-1
      // homogeneity), integrated to expose any drift.
      pd = f.lambda + f.xdot.dot(xi);
    } catch (const OutsideWorkingBox&) {
      throw LeftWorkingBox("ray left the working box");
    }
  };

  RayState<S> st;
  st.t = S(0);
  st.x = x0;
  st.xi = xi0;
  st.phase = phase0;
  out.push_back(st);

  S hint0 = S(-1);
  detail::FlowEval<S> f0 = detail::flow_eval(model, x0, xi0, hint0);
  const S H0 = f0.lambda;

  Vec2<S> x = x0, xi = xi0;
  S phase = phase0;
  for (int k = 0; k < n; ++k) {
    Vec2<S> k1x, k1xi, k2x, k2xi, k3x, k3xi, k4x, k4xi;
    S k1p, k2p, k3p, k4p;
    rhs(x, xi, k1x, k1xi, k1p);
    rhs(x + (h / 2) * k1x, xi + (h / 2) * k1xi, k2x, k2xi, k2p);
    rhs(x + (h / 2) * k2x, xi + (h / 2) * k2xi, k3x, k3xi, k3p);
    rhs(x + h * k3x, xi + h * k3xi, k4x, k4xi, k4p);
    x += (h / 6) * (k1x + 2 * k2x + 2 * k3x + k4x);
    xi += (h / 6) * (k1xi + 2 * k2xi + 2 * k3xi + k4xi);
    phase += (h / 6) * (k1p + 2 * k2p + 2 * k3p + k4p);

    st.t = S(k + 1) * h;
    st.x = x;
    st.xi = xi;
    st.phase = phase;
    out.push_back(st);

    S hcheck = hint;
    detail::FlowEval<S> fk = detail::flow_eval(model, x, xi, hcheck);
    if (std::abs(fk.lambda - H0) > S(1e-6) * std::abs(H0)) {
      throw StepTooLarge("Hamiltonian conservation drift exceeded 1e-6");
    }
  }
  return out;
}

template <class S>
struct DynamicRay {
  std::vector<RayState<S>> states;
  bool caustic = false;   // |det J| dropped below 1e-6 somewhere
  S caustic_time{S(-1)};  // first flagged time (-1 if none)
};

// Re-integrate the ray together with the paraxial system:
//   Phidot = lxx + lxxi Phi + Phi lxxi^T + Phi lxixi Phi,   Phi(0) = 0,
//   Jdot   = -(lxxi^T + lxixi Phi) J,                       J(0)  = I.
// The base (x, xi) trajectory reproduces trace_ray bit-for-bit (same scheme,
// same steps). Throws CausticEncountered if the Riccati solution blows up.
template <class S>
DynamicRay<S> dynamic_ray(const std::vector<RayState<S>>& ray, const SpeedField<S>& model) {
  if (ray.size() < 2) throw InvalidInput("ray must contain at least two samples");
  const int n = static_cast<int>(ray.size()) - 1;
  const S h = ray[1].t - ray[0].t;

  DynamicRay<S> out;
  out.states = ray;
  S hint = S(-1);

  struct Aug {
    Vec2<S> x, xi;
    Mat2<S> phi, jac;
  };
  auto rhs = [&](const Aug& a, Aug& d) {
    try {
      detail::FlowEval<S> f = detail::flow_eval(model, a.x, a.xi, hint);
      d.x = f.xdot;
      d.xi = f.xidot;
      d.phi = f.lxx + f.lxxi * a.phi + a.phi * f.lxxi.transpose() +
              a.phi * f.lxixi * a.phi;
      d.jac = -(f.lxxi.transpose() + f.lxixi * a.phi) * a.jac;
    } catch (const OutsideWorkingBox&) {
      throw LeftWorkingBox("ray left the working box");
    }
  };

  Aug a{ray[0].x, ray[0].xi, Mat2<S>::Zero(), Mat2<S>::Identity()};
  out.states[0].hess = a.phi;
  out.states[0].jac = a.jac;
  for (int k = 0; k < n; ++k) {
    Aug k1, k2, k3, k4, tmp;
    rhs(a, k1);
    tmp = {a.x + (h / 2) * k1.x, a.xi + (h / 2) * k1.xi, a.phi + (h / 2) * k1.phi,
           a.jac + (h / 2) * k1.jac};
    rhs(tmp, k2);
    tmp = {a.x + (h / 2) * k2.x, a.xi + (h / 2) * k2.xi, a.phi + (h / 2) * k2.phi,
           a.jac + (h / 2) * k2.jac};
    rhs(tmp, k3);
    tmp = {a.x + h * k3.x, a.xi + h * k3.xi, a.phi + h * k3.phi, a.jac + h * k3.jac};
    rhs(tmp, k4);
    a.x += (h / 6) * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    a.xi += (h / 6) * (k1.xi + 2 * k2.xi + 2 * k3.xi + k4.xi);
    a.phi += (h / 6) * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
    a.jac += (h / 6) * (k1.jac + 2 * k2.jac + 2 * k3.jac + k4.jac);

    if (!a.phi.allFinite() || a.phi.norm() > S(1e10)) {
      throw CausticEncountered("phase Hessian blew up along the ray");
    }
    out.states[k + 1].hess = a.phi;
    out.states[k + 1].jac = a.jac;
    if (!out.caustic && std::abs(a.jac.determinant()) < S(1e-6)) {
      out.caustic = true;
      out.caustic_time = out.states[k + 1].t;
    }
  }
  return out;
}

// Leading-amplitude transport along a dynamic ray. gamma is evaluated at the
// stored samples and accumulated with the trapezoid rule (the integrand is as
// smooth as the coefficients; on flat models it vanishes identically).
// `include_r0` adds the lower-order symbol correction (free-surface flavor;
// requires the model's primary material field). The log_amp fields of the
// returned copy of the ray are filled in place.
template <class S>
std::vector<TransportLog<S>> transport_amplitude(DynamicRay<S>& dray,
                                                 const SpeedField<S>& model,
                                                 bool include_r0 = true) {
  if (dray.caustic) {
    throw CausticEncountered("transport requested across a caustic");
  }
  const auto& states = dray.states;
  const int n = static_cast<int>(states.size());
  std::vector<TransportLog<S>> logs(n);

  S hint = S(-1);
  std::vector<std::complex<S>> gamma(n);
  for (int k = 0; k < n; ++k) {
    detail::FlowEval<S> f = detail::flow_eval(model, states[k].x, states[k].xi, hint);
    std::complex<S> gk(-S(0.5) * (f.lxixi * states[k].hess).trace(), S(0));
    if (include_r0 && model.kind == WaveKind::kRayleigh) {
      EllipticPoint<S> pt{states[k].t, states[k].x, f.lambda, states[k].xi};
      gk -= r0_leading(pt, *model.field, *model.metric, hint).value;
    }
    gamma[k] = gk;
  }

  std::complex<S> acc(0, 0);
  logs[0] = TransportLog<S>{};
  dray.states[0].log_amp = acc;
  for (int k = 1; k < n; ++k) {
    const S h = states[k].t - states[k - 1].t;
    acc += (h / S(2)) * (gamma[k - 1] + gamma[k]);
    logs[k].gamma1_int = acc.real();
    logs[k].gamma2_int = acc.imag();
    logs[k].a0 = std::exp(-acc);
    logs[k].upsilon = -acc.imag();
    dray.states[k].log_amp = acc;
  }
  return logs;
}

// ---------------------------------------------------------------------------
// Phase charts: fan of rays from a regular seed lattice, deposited at time t,
// with bilinear interpolation on the deformed lattice.

template <class S>
struct ChartSample {
  Vec2<S> x = Vec2<S>::Zero();   // ray endpoint
  S phi{};                       // phase (= x0 . xi0)
  Vec2<S> grad = Vec2<S>::Zero();  // grad phi = xi(t)
  std::complex<S> log_amp{};     // transport exponent at t
  S det_jac{S(1)};
  bool caustic = false;
};

template <class S>
struct SeedGrid {
  Vec2<S> lo = Vec2<S>(-1, -1);
  Vec2<S> hi = Vec2<S>(1, 1);
  int nx = 9, ny = 9;
};

template <class S>
struct PhaseChart {
  S t{};
  Vec2<S> xi0 = Vec2<S>::Zero();
  SeedGrid<S> seeds;
  std::vector<ChartSample<S>> samples;  // row-major: iy * nx + ix

  const ChartSample<S>& at(int ix, int iy) const { return samples[iy * seeds.nx + ix]; }

  // Interpolated chart data at a spatial point y.
  struct Value {
    S phi{};
    Vec2<S> grad = Vec2<S>::Zero();
    std::complex<S> log_amp{};
  };

  // Bilinear interpolation on the deformed lattice: locate the containing
  // quad by inverting its bilinear map, then blend the corner data.
  Value interp(const Vec2<S>& y) const {
    for (int iy = 0; iy + 1 < seeds.ny; ++iy) {
      for (int ix = 0; ix + 1 < seeds.nx; ++ix) {
        const ChartSample<S>& c00 = at(ix, iy);
        const ChartSample<S>& c10 = at(ix + 1, iy);
        const ChartSample<S>& c01 = at(ix, iy + 1);
        const ChartSample<S>& c11 = at(ix + 1, iy + 1);
        // Bounding-box prefilter with a small margin.
        const S xmin = std::min({c00.x[0], c10.x[0], c01.x[0], c11.x[0]});
        const S xmax = std::max({c00.x[0], c10.x[0], c01.x[0], c11.x[0]});
        const S ymin = std::min({c00.x[1], c10.x[1], c01.x[1], c11.x[1]});
        const S ymax = std::max({c00.x[1], c10.x[1], c01.x[1], c11.x[1]});
        const S mar = S(1e-9) * (S(1) + xmax - xmin + ymax - ymin);
        if (y[0] < xmin - mar || y[0] > xmax + mar || y[1] < ymin - mar ||
            y[1] > ymax + mar) {
          continue;
        }
        // Invert the bilinear map P(u, v) = y by damped fixed-point Newton.
        S u = S(0.5), v = S(0.5);
        bool ok = false;
        for (int it = 0; it < 30; ++it) {
          const Vec2<S> p = (1 - u) * (1 - v) * c00.x + u * (1 - v) * c10.x +
                            (1 - u) * v * c01.x + u * v * c11.x;
          const Vec2<S> res = p - y;
          if (res.norm() < S(1e-12) * (S(1) + y.norm())) {
            ok = true;
            break;
          }
          Mat2<S> jm;
          jm.col(0) = (1 - v) * (c10.x - c00.x) + v * (c11.x - c01.x);
          jm.col(1) = (1 - u) * (c01.x - c00.x) + u * (c11.x - c10.x);
          const S det = jm.determinant();
          if (!(std::abs(det) > S(1e-14))) break;
          Vec2<S> duv = jm.inverse() * res;
          u -= duv[0];
          v -= duv[1];
          if (u < S(-0.5) || u > S(1.5) || v < S(-0.5) || v > S(1.5)) break;
        }
        const S tol = S(1e-9);
        if (!ok || u < -tol || u > 1 + tol || v < -tol || v > 1 + tol) continue;
        Value val;
        auto blend = [&](auto f00, auto f10, auto f01, auto f11) {
          return (1 - u) * (1 - v) * f00 + u * (1 - v) * f10 + (1 - u) * v * f01 +
                 u * v * f11;
        };
        val.phi = blend(c00.phi, c10.phi, c01.phi, c11.phi);
        val.grad = ((1 - u) * (1 - v) * c00.grad + u * (1 - v) * c10.grad +
                    (1 - u) * v * c01.grad + u * v * c11.grad);
        val.log_amp = blend(c00.log_amp, c10.log_amp, c01.log_amp, c11.log_amp);
        return val;
      }
    }
    throw InterpolationGap("chart fan does not cover the requested point");
  }

  // Higher-order evaluator used where the bilinear error would be amplified
  // (time-differenced residual measurements): tensor-product Catmull-Rom over
  // the regular seed lattice, with Newton inversion of the endpoint map. The
  // phase is linear in the seed, so its interpolation is exact; the endpoint
  // map contributes O(h^3).
  Value seed_interp(const Vec2<S>& y) const {
    auto weights = [](S u) {
      const S u2 = u * u, u3 = u2 * u;
      return std::array<S, 4>{S(0.5) * (-u3 + 2 * u2 - u), S(0.5) * (3 * u3 - 5 * u2 + 2),
                              S(0.5) * (-3 * u3 + 4 * u2 + u), S(0.5) * (u3 - u2)};
    };
    // Evaluate all node fields at continuous lattice coordinates (sx, sy).
    auto eval = [&](S sx, S sy) {
      int ix = static_cast<int>(std::floor(sx));
      int iy = static_cast<int>(std::floor(sy));
      ix = std::max(1, std::min(seeds.nx - 3, ix));
      iy = std::max(1, std::min(seeds.ny - 3, iy));
      const auto wx = weights(sx - S(ix));
      const auto wy = weights(sy - S(iy));
      Vec2<S> x = Vec2<S>::Zero(), grad = Vec2<S>::Zero();
      S phi = 0;
      std::complex<S> la(0, 0);
      for (int b = 0; b < 4; ++b) {
        for (int a = 0; a < 4; ++a) {
          const S w = wx[a] * wy[b];
          const ChartSample<S>& c = at(ix - 1 + a, iy - 1 + b);
          x += w * c.x;
          grad += w * c.grad;
          phi += w * c.phi;
          la += w * c.log_amp;
        }
      }
      struct Out {
        Vec2<S> x, grad;
        S phi;
        std::complex<S> log_amp;
      };
      return Out{x, grad, phi, la};
    };

    // Initial guess: nearest node.
    S best = std::numeric_limits<S>::max();
    S sx = 0, sy = 0;
    for (int iy = 0; iy < seeds.ny; ++iy) {
      for (int ix = 0; ix < seeds.nx; ++ix) {
        const S d = (at(ix, iy).x - y).squaredNorm();
        if (d < best) {
          best = d;
          sx = S(ix);
          sy = S(iy);
        }
      }
    }
    // Newton on X(sx, sy) = y with a finite-difference Jacobian.
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      const auto e = eval(sx, sy);
      const Vec2<S> res = e.x - y;
      if (res.norm() < S(1e-13) * (S(1) + y.norm())) {
        ok = true;
        break;
      }
      const S d = S(1e-6);
      Mat2<S> jm;
      jm.col(0) = (eval(sx + d, sy).x - eval(sx - d, sy).x) / (2 * d);
      jm.col(1) = (eval(sx, sy + d).x - eval(sx, sy - d).x) / (2 * d);
      if (!(std::abs(jm.determinant()) > S(1e-14))) break;
      const Vec2<S> step = jm.inverse() * res;
      sx -= step[0];
      sy -= step[1];
      if (sx < S(-2) || sx > S(seeds.nx + 1) || sy < S(-2) || sy > S(seeds.ny + 1)) break;
    }
    // The 4x4 stencil must sit inside the lattice.
    if (!ok || sx < S(1) || sx > S(seeds.nx - 2) || sy < S(1) || sy > S(seeds.ny - 2)) {
      throw InterpolationGap("seed-space stencil does not cover the requested point");
    }
    const auto e = eval(sx, sy);
    Value val;
    val.phi = e.phi;
    val.grad = e.grad;
    val.log_amp = e.log_amp;
    return val;
  }
};

// Trace one ray per seed-lattice node to time t and assemble the chart.
// `with_transport` also integrates the amplitude exponent per ray.
template <class S>
PhaseChart<S> phase_chart(S t, const Vec2<S>& xi0, const SeedGrid<S>& seeds,
                          const SpeedField<S>& model, S dt = S(-1),
                          bool with_transport = false, bool include_r0 = true) {
  if (!(t > S(0))) throw NonPositiveParameter("chart time must be positive");
  if (!(dt > S(0))) dt = t / S(100);
  dt = std::min(dt, t / S(100));

  PhaseChart<S> chart;
  chart.t = t;
  chart.xi0 = xi0;
  chart.seeds = seeds;
  chart.samples.resize(static_cast<std::size_t>(seeds.nx) * seeds.ny);

  for (int iy = 0; iy < seeds.ny; ++iy) {
    for (int ix = 0; ix < seeds.nx; ++ix) {
      Vec2<S> x0(seeds.lo[0] + (seeds.hi[0] - seeds.lo[0]) * S(ix) / S(seeds.nx - 1),
                 seeds.lo[1] + (seeds.hi[1] - seeds.lo[1]) * S(iy) / S(seeds.ny - 1));
      auto ray = trace_ray(x0, xi0, t, dt, model);
      DynamicRay<S> dyn = dynamic_ray(ray, model);
      if (dyn.caustic) {
        throw CausticEncountered("chart fan crossed a caustic before time t");
      }
      ChartSample<S> smp;
      const RayState<S>& end = dyn.states.back();
      smp.x = end.x;
      smp.phi = end.phase;
      smp.grad = end.xi;
      smp.det_jac = end.jac.determinant();
      smp.caustic = false;
      if (with_transport) {
        transport_amplitude(dyn, model, include_r0);
        smp.log_amp = dyn.states.back().log_amp;
      }
      chart.samples[static_cast<std::size_t>(iy) * seeds.nx + ix] = smp;
    }
  }
  return chart;
}

// Finite-difference eikonal residual |phi_t - c |grad phi|_g| at y, from two
// charts at t - delta and t + delta. Uses the seed-space evaluator: the small
// delta in the quotient would amplify the bilinear error.
template <class S>
S eikonal_residual(const PhaseChart<S>& minus, const PhaseChart<S>& plus, const Vec2<S>& y,
                   const SpeedField<S>& model) {
  const S delta = (plus.t - minus.t) / S(2);
  auto vm = minus.seed_interp(y);
  auto vp = plus.seed_interp(y);
  const S phi_t = (vp.phi - vm.phi) / (S(2) * delta);
  const Vec2<S> grad = (vp.grad + vm.grad) / S(2);
  const S c = model.speed(y);
  const S n = covector_norm(*model.metric, y, grad);
  return std::abs(phi_t - c * n);
}

}  // namespace raystone
