// Invariant audit implementation.  Each section exercises one layer of the
// library; every check appends a named pass/fail entry with the worst measured
// value and its pinned threshold.  All randomness flows from the caller's
// seed through a single mt19937_64 stream, so a fixed seed reproduces the
// report byte for byte.
#include "raystone/verify.hpp"

#include "raystone/csvio.hpp"
#include "raystone/dispersion.hpp"
#include "raystone/flat.hpp"
#include "raystone/material.hpp"
#include "raystone/rays.hpp"
#include "raystone/speed_jets.hpp"
#include "raystone/symbols.hpp"
#include "raystone/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>

namespace raystone {
namespace {

using C = std::complex<double>;
using Rng = std::mt19937_64;
using V2 = Vec2<double>;

double urand(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

MaterialPoint<double> random_material(Rng& rng) {
  MaterialPoint<double> m;
  m.rho = urand(rng, 0.5, 4.0);
  m.lam = urand(rng, 0.5, 3.0);
  m.mu = urand(rng, 0.5, 3.0);
  return m;
}

void push(VerifyReport& rep, std::string name, bool pass, double measured, double threshold,
          std::string note) {
  rep.checks.push_back({std::move(name), pass, measured, threshold, std::move(note)});
}

// pass iff measured <= threshold
void push_max(VerifyReport& rep, std::string name, double measured, double threshold,
              std::string note) {
  push(rep, std::move(name), measured <= threshold, measured, threshold, std::move(note));
}

// pass iff measured >= threshold
void push_min(VerifyReport& rep, std::string name, double measured, double threshold,
              std::string note) {
  push(rep, std::move(name), measured >= threshold, measured, threshold, std::move(note));
}

// ---------------------------------------------------------------------------
// Material model.

void check_material(Rng& rng, VerifyReport& rep) {
  double worst = 0;
  bool order_ok = true;
  for (int i = 0; i < 1000; ++i) {
    MaterialPoint<double> m = random_material(rng);
    auto [cs, cp] = elastic_speeds(m);
    if (!(cs < cp)) order_ok = false;
    const double ratio = (cp * cp) / (cs * cs);
    const double target = (m.lam + 2.0 * m.mu) / m.mu;
    if (!(ratio > 2.0)) order_ok = false;
    worst = std::max(worst, std::abs(ratio - target) / target);
  }
  push(rep, "material_speed_order", order_ok && worst <= 1e-14, worst, 1e-14,
       "relative gap of cp^2/cs^2 vs (lambda+2mu)/mu over 1000 draws; needs cs<cp and ratio>2");

  Mat2<double> gbase;
  gbase << 1.3, 0.2, 0.2, 0.8;
  BoundaryMetric<double> g(gbase,
                           {{MetricEntry::kG11, 0.2, V2(0.3, -0.4), 1.1},
                            {MetricEntry::kG22, -0.15, V2(-0.6, 0.5), 1.4}},
                           {});
  worst = 0;
  for (int i = 0; i < 200; ++i) {
    V2 x(urand(rng, -5, 5), urand(rng, -5, 5));
    V2 xi(urand(rng, -2, 2), urand(rng, -2, 2));
    if (xi.norm() < 1e-3) xi[0] += 1.0;
    const double k = urand(rng, 0.25, 4.0);
    const double nk = covector_norm(g, x, (k * xi).eval());
    const double n1 = covector_norm(g, x, xi);
    worst = std::max(worst, std::abs(nk - k * n1) / nk);
  }
  push_max(rep, "covector_homogeneity", worst, 1e-14,
           "degree-1 scaling error of the metric covector norm");

  MaterialField<double> bumpy(MaterialPoint<double>{},
                              {{MaterialParam::kRho, -0.25, V2(0.4, -0.6), 1.5},
                               {MaterialParam::kMu, 0.35, V2(-0.5, 0.1), 1.2},
                               {MaterialParam::kLam, 0.2, V2(0.2, 0.3), 0.9}},
                              {});
  const double h = 1e-5;
  worst = 0;
  for (int i = 0; i < 50; ++i) {
    V2 x(urand(rng, -2, 2), urand(rng, -2, 2));
    for (MaterialParam p : {MaterialParam::kRho, MaterialParam::kLam, MaterialParam::kMu}) {
      const Jet<double, 2> jet = bumpy.param_jet<2>(p, x, 0, 1);
      for (int axis = 0; axis < 2; ++axis) {
        V2 xp = x, xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        const double fd = (bumpy.param_jet<1>(p, xp, -1, -1).v -
                           bumpy.param_jet<1>(p, xm, -1, -1).v) /
                          (2.0 * h);
        worst = std::max(worst, std::abs(fd - jet.g[axis]) / (1.0 + std::abs(jet.g[axis])));
      }
    }
    const auto gj = g.matrix_jet<2>(x, 0, 1);
    for (int axis = 0; axis < 2; ++axis) {
      V2 xp = x, xm = x;
      xp[axis] += h;
      xm[axis] -= h;
      const Mat2<double> fd = (g.at(xp) - g.at(xm)) / (2.0 * h);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          worst = std::max(worst,
                           std::abs(fd(r, c) - gj(r, c).g[axis]) / (1.0 + std::abs(gj(r, c).g[axis])));
        }
      }
    }
  }
  push_max(rep, "material_derivative_fd", worst, 1e-6,
           "analytic parameter/metric gradients vs central differences at step 1e-5");
}

// ---------------------------------------------------------------------------
// Dispersion kernels (free surface and interface).

void check_dispersion(Rng& rng, VerifyReport& rep) {
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    worst = std::max(worst, std::abs(rayleigh_residual(0.0, random_material(rng))));
  }
  push_max(rep, "rayleigh_kernel_zero", worst, 0.0, "free-surface residual at s=0 vanishes exactly");

  worst = 0;
  bool ok = true;
  for (int i = 0; i < 100; ++i) {
    MaterialPoint<double> m = random_material(rng);
    const double cs = m.cs();
    auto f = [&](double s) { return rayleigh_residual(s, m); };
    double a = 0, b = 0;
    if (detail::scan_sign_changes(f, 1e-6 * cs, cs * (1 - 1e-6), 10000, &a, &b) != 1) ok = false;
    const RayleighRoot<double> root = rayleigh_speed(m);
    worst = std::max(worst, std::abs(rayleigh_residual(root.c_R, m)));
    if (!(root.slope < 0)) ok = false;
  }
  push(rep, "rayleigh_root_unique", ok && worst <= 1e-10, worst, 1e-10,
       "|residual| at the surface-wave root; one sign change on (0,c_s) and negative slope required");

  worst = 0;
  for (int i = 0; i < 1000; ++i) {
    MaterialPoint<double> p = random_material(rng);
    MaterialPoint<double> q = random_material(rng);
    const double smax = min_shear_speed(p, q);
    const double s = urand(rng, 0.05, 0.95) * smax;
    const StoneleyMatrices<double> sm = stoneley_matrix(s, p, q);
    const auto sc = interface_scalars_t(s, p.rho, p.lam, p.mu, q.rho, q.lam, q.mu);
    const C det = sm.m(0, 0) * sm.m(1, 1) - sm.m(0, 1) * sm.m(1, 0);
    const double lhs = det.real() * sc.dplus * sc.dminus;
    const double rhs = stoneley_residual(s, p, q);
    const double floor_scale =
        1e-6 * (std::pow((p.rho + q.rho) * smax * smax, 2) + 4.0 * std::pow(p.mu - q.mu, 2) + 1.0);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), floor_scale});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
    worst = std::max(worst, std::abs(det.imag()) * sc.dplus * sc.dminus / scale);
  }
  push_max(rep, "interface_det_factorization", worst, 1e-10,
           "relative gap between the radical-cleared interface determinant and the secular function");

  bool mono_ok = true;
  double worst_inc = -1e300;
  for (int i = 0; i < 50; ++i) {
    MaterialPoint<double> p = random_material(rng);
    MaterialPoint<double> q = random_material(rng);
    const double smax = min_shear_speed(p, q);
    std::vector<double> grid(40);
    for (int k = 0; k < 40; ++k) grid[k] = (0.05 + 0.9 * k / 39.0) * smax;
    const DefinitenessReport report = definiteness_report(p, q, grid);
    if (!report.all_pass()) mono_ok = false;
    for (const auto& it : report.items) {
      if (it.name == "eigenvalues_decreasing") worst_inc = std::max(worst_inc, it.detail);
    }
  }
  push(rep, "interface_monotonicity", mono_ok && worst_inc <= 0, worst_inc, 0.0,
       "largest eigenvalue increase across 50 interface pairs (zero when all decrease); "
       "limit-matrix, trace and derivative-sign facts folded in");

  {
    const MaterialPoint<double> same{1.1, 0.9, 1.3};
    bool count_ok = !stoneley_speed(same, same).exists;
    double worst_m1 = 0;
    int found = 0;
    for (int i = 0; i < 50; ++i) {
      MaterialPoint<double> p = random_material(rng);
      MaterialPoint<double> q = random_material(rng);
      try {
        const StoneleyRoot<double> root = stoneley_speed(p, q);
        if (root.exists) {
          ++found;
          worst_m1 = std::max(worst_m1, std::abs(stoneley_matrix(root.c_ST, p, q).m1));
          if (!(root.slope < 0)) count_ok = false;
        }
      } catch (const RootCountMismatch&) {
        count_ok = false;
      }
    }
    push(rep, "interface_root_count", count_ok && worst_m1 <= 1e-9, worst_m1, 1e-9,
         "|m1| at each detected interface root (" + std::to_string(found) +
             "/50 pairs admit one); identical sides admit none and scans never see two crossings");
  }
}

// ---------------------------------------------------------------------------
// Boundary symbol algebra (one-sided and interface).

void check_symbols(Rng& rng, VerifyReport& rep) {
  BoundaryMetric<double> id{};
  double worst_herm = 0, worst_hom = 0, worst_unitary = 0, worst_diag = 0, worst_restrict = 0,
         worst_ident = 0;
  bool order_ok = true;
  for (int i = 0; i < 1000; ++i) {
    const MaterialPoint<double> mp = random_material(rng);
    MaterialField<double> field(mp, {});
    const double s = urand(rng, 0.25, 0.95) * mp.cs();
    const double n = urand(rng, 0.5, 2.5);
    const double ang = urand(rng, 0.0, 2.0 * pi_v<double>);
    const EllipticPoint<double> pt{0.0, V2(urand(rng, -2, 2), urand(rng, -2, 2)), s * n,
                                   n * V2(std::cos(ang), std::sin(ang))};
    const Symbol3<double> sym = dn_symbol(pt, field, id);
    const double scale = sym.entries.norm();
    worst_herm = std::max(worst_herm, (sym.entries - sym.entries.adjoint()).norm() / scale);

    const double k = urand(rng, 0.5, 2.0);
    const EllipticPoint<double> ptk{0.0, pt.x, k * pt.tau, (k * pt.xi).eval()};
    worst_hom = std::max(
        worst_hom, (dn_symbol(ptk, field, id).entries - k * sym.entries).norm() / (k * scale));

    const BoundaryRestriction<double> br = boundary_restriction_symbols(pt, field, id);
    worst_restrict =
        std::max(worst_restrict,
                 (br.m_out.entries * br.u_out_inv.entries - sym.entries).norm() / scale);

    try {
      const DiagonalizationResult<double> diag = diagonalize_dn(pt, field, id, false);
      worst_unitary = std::max(
          worst_unitary, (diag.w.adjoint() * diag.w - CMat3<double>::Identity()).norm());
      const CMat3<double> d = diag.w.adjoint() * sym.entries * diag.w;
      double off = 0;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          if (r != c) off += std::norm(d(r, c));
        }
      }
      worst_diag = std::max(worst_diag, std::sqrt(off) / scale);
      if (!(diag.eigenvalues[1] > diag.eigenvalues[2]) || !(diag.eigenvalues[2] > 0)) {
        order_ok = false;
      }

      const SymbolFrame<double> fr = make_symbol_frame(pt, mp, id);
      const double m1 = diag.eigenvalues[0] * fr.denom;
      const double m2 = diag.eigenvalues[1] * fr.denom;
      const double tau2 = pt.tau * pt.tau;
      const double sum = (fr.alpha + fr.beta) * mp.rho * tau2;
      const double prod_a = fr.alpha * fr.beta * mp.rho * mp.rho * tau2 * tau2;
      const double prod_b = std::pow(fr.n * mp.mu * fr.theta, 2);
      const double fac_a = fr.denom * 4.0 * mp.mu * mp.mu * fr.alpha * fr.beta * fr.n * fr.n;
      const double fac_b = fr.denom * std::pow(mp.rho * tau2 - 2.0 * mp.mu * fr.n * fr.n, 2);
      worst_ident = std::max(worst_ident, std::abs(m1 + m2 - sum) / sum);
      worst_ident =
          std::max(worst_ident, std::abs(m1 * m2 - (prod_a - prod_b)) / (prod_a + prod_b));
      worst_ident = std::max(worst_ident,
                             std::abs(m1 * m2 - (fac_a - fac_b)) / (std::abs(fac_a) + fac_b));
    } catch (const DegenerateEigenvalue&) {
      // Crossing of the in-plane and out-of-plane eigenvalues at this random
      // draw; the diagonalization declines by design.  Skip the sample.
    }
  }
  push_max(rep, "dn_hermitian", worst_herm, 1e-12, "Hermitian defect of the boundary symbol");
  push_max(rep, "dn_homogeneity", worst_hom, 1e-12, "degree-1 scaling defect in (tau, xi)");
  push_max(rep, "dn_restriction_product", worst_restrict, 1e-11,
           "traction basis times inverse boundary basis vs the boundary symbol");
  push_max(rep, "dn_unitary", worst_unitary, 1e-11, "unitarity defect of the eigencolumn matrix");
  push(rep, "dn_diagonalization", order_ok && worst_diag <= 1e-10, worst_diag, 1e-10,
       "off-diagonal residual after conjugation; eigenvalue ordering m2>m3>0 required");
  push_max(rep, "dn_eigen_identities", worst_ident, 1e-11,
           "trace, product, and radical-factorization identities of the in-plane eigenvalues");

  {
    double min_margin = 1e300;
    for (int i = 0; i < 100; ++i) {
      const MaterialPoint<double> mp = random_material(rng);
      MaterialField<double> field(mp, {});
      const double cR = rayleigh_speed(mp).c_R;
      const double cs = mp.cs();
      const double n = urand(rng, 0.5, 2.0);
      const double sb = urand(rng, 0.3, 0.9) * cR;
      const double sa = cR + urand(rng, 0.1, 0.9) * (0.97 * cs - cR);
      for (auto [s, sign] : {std::pair{sb, 1.0}, std::pair{sa, -1.0}}) {
        const EllipticPoint<double> pt{0.0, V2::Zero(), s * n, V2(n, 0.0)};
        try {
          min_margin =
              std::min(min_margin, sign * diagonalize_dn(pt, field, id, false).eigenvalues[0]);
        } catch (const DegenerateEigenvalue&) {
        }
      }
    }
    push_min(rep, "m1_sign_pattern", min_margin, 0.0,
             "signed margin of the first eigenvalue: positive below the surface speed, negative "
             "between it and c_s; must stay positive");
  }

  {
    const MaterialPoint<double> mp{1.0, 1.0, 1.0};
    MaterialField<double> field(mp, {});
    const double cR = rayleigh_speed(mp).c_R;
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      const double n = urand(rng, 0.6, 2.0);
      const double k = urand(rng, 0.5, 2.0);
      const double s = cR * (1.0 + urand(rng, -0.04, 0.04));
      const double ang = urand(rng, 0.0, 2.0 * pi_v<double>);
      const EllipticPoint<double> pt{0.0, V2(0.1, -0.3), s * n,
                                     n * V2(std::cos(ang), std::sin(ang))};
      const C e = e0_rayleigh(pt, field, id, cR);
      const EllipticPoint<double> ptk{0.0, pt.x, k * pt.tau, (k * pt.xi).eval()};
      worst = std::max(worst, std::abs(e0_rayleigh(ptk, field, id, cR) - e) / std::abs(e));
      if (!(std::abs(e) > 0)) worst = 1e300;
    }
    for (double side : {-1.0, 1.0}) {
      const double n = 1.3;
      auto at = [&](double s) {
        const EllipticPoint<double> pt{0.0, V2::Zero(), s * n, V2(n, 0.0)};
        return e0_rayleigh(pt, field, id, cR);
      };
      const C inner = at(cR * (1.0 + side * 0.999e-6));
      const C outer = at(cR * (1.0 + side * 1.001e-6));
      worst = std::max(worst, std::abs(inner - outer) / std::abs(inner));
    }
    const EllipticPoint<double> ptr{0.0, V2::Zero(), cR * 1.7, V2(1.7, 0.0)};
    const C e_root = e0_rayleigh(ptr, field, id, cR);
    const bool root_ok =
        e_root.imag() > 0 && std::abs(e_root.real()) <= 1e-8 * std::abs(e_root);
    push(rep, "e0_properties", worst <= 1e-8 && root_ok, worst, 1e-8,
         "degree-0 scaling and branch continuity of the elliptic factor; at the root it is "
         "purely imaginary with positive imaginary part");
  }

  {
    const MaterialPoint<double> pp{3.0, 3.0, 3.0};
    const MaterialPoint<double> pm{1.0, 1.0, 1.0};
    MaterialPair<double> pair{MaterialField<double>(pp, {}), MaterialField<double>(pm, {})};
    const StoneleyRoot<double> root = stoneley_speed(pp, pm);
    const double smax = min_shear_speed(pp, pm);

    double worst_jump = 0, worst_block = 0, worst_sdiag = 0;
    for (int i = 0; i < 200; ++i) {
      const double s = urand(rng, 0.25, 0.95) * smax;
      const double n = urand(rng, 0.5, 2.5);
      const double ang = urand(rng, 0.0, 2.0 * pi_v<double>);
      const EllipticPoint<double> pt{0.0, V2(urand(rng, -2, 2), urand(rng, -2, 2)), s * n,
                                     n * V2(std::cos(ang), std::sin(ang))};
      const JumpSymbol<double> js = dn_jump_symbol(pt, pair, id);
      const double scale = js.jump.entries.norm();
      worst_jump =
          std::max(worst_jump, (js.jump.entries - js.jump.entries.adjoint()).norm() / scale);

      const StoneleyMatrices<double> sm = stoneley_matrix(s, pp, pm);
      worst_block = std::max(
          worst_block, (js.interface_block - n * sm.m).norm() / (n * sm.m.norm()));
      const double sh = n * (pp.mu * kernels(s, pp).a + pm.mu * kernels(s, pm).a);
      worst_block = std::max(worst_block, std::abs(js.sh_entry - sh) / sh);
      double off = std::abs(js.v0_reduction(0, 2)) + std::abs(js.v0_reduction(1, 2)) +
                   std::abs(js.v0_reduction(2, 0)) + std::abs(js.v0_reduction(2, 1));
      worst_block = std::max(worst_block, off / scale);

      const DiagonalizationResult<double> diag = diagonalize_stoneley(pt, pair, id, false);
      worst_sdiag = std::max(
          worst_sdiag, (diag.w.adjoint() * diag.w - CMat3<double>::Identity()).norm());
      const CMat3<double> d = diag.w.adjoint() * js.jump.entries * diag.w;
      double off2 = 0;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          if (r != c) off2 += std::norm(d(r, c));
        }
      }
      worst_sdiag = std::max(worst_sdiag, std::sqrt(off2) / scale);
      worst_sdiag = std::max(
          worst_sdiag, std::abs(diag.eigenvalues[0] - n * sm.m1) / (n * std::abs(sm.m2) + 1.0));
    }
    push_max(rep, "jump_symbol_structure", std::max(worst_jump, worst_block), 1e-10,
             "interface jump symbol: Hermitian, reduces to the interface matrix plus the "
             "out-of-plane scalar, no cross-block leakage");
    push_max(rep, "stoneley_diagonalization", worst_sdiag, 1e-10,
             "unitary diagonalization of the jump symbol with first eigenvalue |xi|_g m1");

    const double n = 1.4;
    const EllipticPoint<double> ptr{0.0, V2::Zero(), root.c_ST * n, V2(n, 0.0)};
    const DiagonalizationResult<double> at_root = diagonalize_stoneley(ptr, pair, id, false);
    double worst_root =
        std::abs(at_root.eigenvalues[0]) / (std::abs(at_root.eigenvalues[1]) + 1.0);
    const C e_root = e0_stoneley(ptr, pair, id);
    worst_root = std::max(
        worst_root, std::abs(e_root - C(0.0, -root.slope)) / std::abs(root.slope));
    auto est = [&](double s) {
      const EllipticPoint<double> pt{0.0, V2::Zero(), s * n, V2(n, 0.0)};
      return e0_stoneley(pt, pair, id);
    };
    for (double side : {-1.0, 1.0}) {
      const C inner = est(root.c_ST * (1.0 + side * 0.999e-6));
      const C outer = est(root.c_ST * (1.0 + side * 1.001e-6));
      worst_root = std::max(worst_root, std::abs(inner - outer) / std::abs(inner));
    }
    push_max(rep, "stoneley_e0", worst_root, 1e-6,
             "interface elliptic factor at and near the root: eigenvalue vanishes, factor equals "
             "-i times the root slope, branches join continuously");
  }

  {
    const MaterialPoint<double> mp{1.0, 1.0, 1.0};
    MaterialField<double> flat(mp, {});
    const double cR = rayleigh_speed(mp).c_R;
    const EllipticPoint<double> pt{0.0, V2(0.2, 0.1), cR * 1.3 * 1.01, V2(1.3, 0.0)};
    const R0Result<double> r0 = r0_leading(pt, flat, id, cR);
    push(rep, "r0_flat_zero", r0.flat_exact && std::abs(r0.value) <= 1e-10, std::abs(r0.value),
         1e-10, "transport correction on a constant model vanishes");

    MaterialField<double> bumpyr(mp,
                                 {{MaterialParam::kMu, 0.35, V2(-0.5, 0.1), 1.2},
                                  {MaterialParam::kRho, -0.25, V2(0.4, -0.6), 1.5}},
                                 {});
    const V2 x(0.2, 0.1);
    const double cloc = rayleigh_speed(bumpyr.at(x)).c_R;
    const EllipticPoint<double> ptb{0.0, x, 1.02 * cloc * 1.3, V2(1.3, 0.0)};
    const R0Result<double> ra = r0_leading(ptb, bumpyr, id);
    const EllipticPoint<double> ptb2{0.0, x, 2.0 * ptb.tau, (2.0 * ptb.xi).eval()};
    const R0Result<double> rb = r0_leading(ptb2, bumpyr, id);
    const double scale = std::max(std::abs(ra.value), 1e-3);
    const double worst = std::max({ra.richardson_delta, rb.richardson_delta,
                                   std::abs(ra.value - rb.value) / scale});
    push_max(rep, "r0_richardson", worst, 1e-6,
             "step-halving self-consistency and degree-0 scaling of the transport correction");
  }
}

// ---------------------------------------------------------------------------
// Ray engine.

void check_rays(Rng& rng, VerifyReport& rep) {
  (void)rng;
  BoundaryMetric<double> id{};
  MaterialField<double> flat(MaterialPoint<double>{}, {});
  const SpeedField<double> fmodel = SpeedField<double>::rayleigh(flat, id);
  const double cR = rayleigh_speed(MaterialPoint<double>{}).c_R;

  MaterialField<double> bumpy(MaterialPoint<double>{},
                              {{MaterialParam::kMu, 0.35, V2(-0.5, 0.1), 1.2},
                               {MaterialParam::kRho, -0.25, V2(0.4, -0.6), 1.5}},
                              {});
  const SpeedField<double> bmodel = SpeedField<double>::rayleigh(bumpy, id);

  const V2 x0(0.3, -0.2);
  const V2 xi0(0.8, 0.6);

  const auto flat_ray = trace_ray(x0, xi0, 1.0, 1e-3, fmodel);
  const auto bump_ray = trace_ray(x0, xi0, 1.0, 1e-3, bmodel);
  double worst = std::max(std::abs(flat_ray.back().phase - x0.dot(xi0)),
                          std::abs(bump_ray.back().phase - x0.dot(xi0)));
  push_max(rep, "ray_phase_constancy", worst, 1e-8,
           "drift of the along-ray phase from its conserved value x0.xi0");

  auto drift = [&](double dt) {
    const auto r = trace_ray(x0, xi0, 1.0, dt, bmodel);
    const double h0 = bmodel.speed(r.front().x) * covector_norm(id, r.front().x, r.front().xi);
    double w = 0;
    for (const auto& st : r) {
      w = std::max(w, std::abs(bmodel.speed(st.x) * covector_norm(id, st.x, st.xi) - h0) / h0);
    }
    return w;
  };
  const double d4 = drift(4e-3), d2 = drift(2e-3), d1 = drift(1e-3);
  push_max(rep, "ray_conservation", d1, 1e-8,
           "relative generator drift along a ray through the bumps at step 1e-3");
  push_min(rep, "ray_convergence_order", d4 / d2, 8.0,
           "drift ratio between steps 4e-3 and 2e-3; fourth-order stepping must gain at least 8x");

  {
    const auto r2 = trace_ray(x0, (2.0 * xi0).eval(), 1.0, 1e-3, bmodel);
    const double wx = (r2.back().x - bump_ray.back().x).norm();
    const double wxi = (r2.back().xi - 2.0 * bump_ray.back().xi).norm() / (2.0 * xi0.norm());
    push_max(rep, "ray_homogeneity", std::max(wx, wxi), 1e-10,
             "doubling the covector leaves the path fixed and doubles the transported covector");
  }

  {
    DynamicRay<double> dyn = dynamic_ray(flat_ray, fmodel);
    const auto logs = transport_amplitude(dyn, fmodel, true);
    double w = (dyn.states.back().jac - Mat2<double>::Identity()).norm();
    w = std::max(w, dyn.states.back().hess.norm());
    for (const auto& l : logs) w = std::max(w, std::abs(l.a0 - C(1.0, 0.0)));
    push_max(rep, "ray_flat_transport", w, 1e-10,
             "constant model: unit Jacobian, zero phase Hessian, unit amplitude");

    const SeedGrid<double> seeds{V2(-2, -2), V2(2, 2), 13, 13};
    const PhaseChart<double> chart = phase_chart(0.5, xi0, seeds, fmodel);
    const V2 y(0.1, -0.3);
    const auto val = chart.interp(y);
    const double want = 0.5 * cR * xi0.norm() + y.dot(xi0);
    double wphi = std::abs(val.phi - want);
    wphi = std::max(wphi, (val.grad - xi0).norm());
    push_max(rep, "ray_flat_chart_phase", wphi, 1e-6,
             "constant-model phase chart reproduces t c |xi| + x.xi with gradient xi");
  }

  {
    const SeedGrid<double> seeds{V2(-0.05, -0.55), V2(0.95, 0.45), 33, 33};
    const PhaseChart<double> cm = phase_chart(0.5 - 1e-4, xi0, seeds, bmodel);
    const PhaseChart<double> cp = phase_chart(0.5 + 1e-4, xi0, seeds, bmodel);
    const double res = std::abs(eikonal_residual(cm, cp, V2(0.1, -0.3), bmodel));
    push_max(rep, "eikonal_residual", res, 1e-5,
             "time-differenced chart phase satisfies phi_t = c(x)|grad phi|_g through the bumps");
  }

  {
    const double eps = 1e-5;
    const DynamicRay<double> dc = dynamic_ray(bump_ray, bmodel);
    Mat2<double> dxi_dx0, dx_dx0;
    for (int j = 0; j < 2; ++j) {
      V2 xp = x0, xm = x0;
      xp[j] += eps;
      xm[j] -= eps;
      const auto rp = trace_ray(xp, xi0, 1.0, 1e-3, bmodel);
      const auto rm = trace_ray(xm, xi0, 1.0, 1e-3, bmodel);
      dxi_dx0.col(j) = (rp.back().xi - rm.back().xi) / (2.0 * eps);
      dx_dx0.col(j) = (rp.back().x - rm.back().x) / (2.0 * eps);
    }
    const Mat2<double> predicted = dc.states.back().hess * dc.states.back().jac;
    const double w = std::max((predicted - dxi_dx0).norm(),
                              (dc.states.back().jac - dx_dx0).norm());
    push_max(rep, "transport_hessian_fd", w, 1e-4,
             "phase Hessian and Jacobian vs a finite-difference ray fan");
  }
}

// ---------------------------------------------------------------------------
// Field synthesis and the constant-model closed forms.

void check_synthesis(Rng& rng, VerifyReport& rep) {
  BoundaryMetric<double> id{};
  const MaterialPoint<double> unit{1.0, 1.0, 1.0};
  MaterialField<double> flat(unit, {});
  const SpeedField<double> model = SpeedField<double>::rayleigh(flat, id);
  const FlatModel<double> fm = make_flat_model(unit);

  {
    auto p1 = gaussian_packet<double>(V2(3.5, 0.5), 0.6, 9, 7);
    WavePacketData<double> p2 = p1;
    p2.width = 0.0;  // windowless copy: arbitrary spectrum is allowed
    for (int idx = 0; idx < p2.grid.count(); ++idx) {
      p2.h_hat[idx] *= C(std::cos(0.3 * idx) + 0.4, std::sin(0.2 * idx));
    }
    WavePacketData<double> psum = p2;
    const C alpha(0.7, -0.4);
    for (int idx = 0; idx < p2.grid.count(); ++idx) {
      psum.h_hat[idx] = alpha * p1.h_hat[idx] + p2.h_hat[idx];
    }
    const XYGrid<double> xs = uniform_xy<double>(V2(-2.5, -1.0), V2(0.0, 1.0), 9, 5);
    const double t = 1.1;
    const auto f1 = cauchy_field(p1, t, xs, model);
    const auto f2 = cauchy_field(p2, t, xs, model);
    const auto fsum = cauchy_field(psum, t, xs, model);
    double num = 0, den = 0;
    for (int j = 0; j < xs.count(); ++j) {
      num += (fsum.f[j] - alpha * f1.f[j] - f2.f[j]).squaredNorm();
      den += fsum.f[j].squaredNorm();
    }
    double worst = std::sqrt(num / den);

    SourceData<double> sa;
    sa.grid = p1.grid;
    sa.expiry = 0.4;
    sa.times = {0.0, 0.1, 0.2, 0.3, 0.4};
    sa.l_hat.assign(sa.times.size() * sa.grid.count(), CVec3<double>::Zero());
    SourceData<double> sb = sa;
    SourceData<double> sab = sa;
    for (std::size_t k = 0; k < sa.times.size(); ++k) {
      for (int idx = 0; idx < sa.grid.count(); ++idx) {
        const std::size_t at = k * sa.grid.count() + idx;
        const C base = p1.h_hat[idx] * std::polar(1.0, 0.7 * sa.times[k]);
        sa.l_hat[at] = CVec3<double>(C(0, 0), C(0, 0), base);
        sb.l_hat[at] = CVec3<double>(0.5 * base, C(0, 0), C(0.2, 0.1) * base);
        sab.l_hat[at] = sa.l_hat[at] + sb.l_hat[at];
      }
    }
    const auto ga = inhomogeneous_field(sa, 0.5, xs, model);
    const auto gb = inhomogeneous_field(sb, 0.5, xs, model);
    const auto gab = inhomogeneous_field(sab, 0.5, xs, model);
    num = den = 0;
    for (int j = 0; j < xs.count(); ++j) {
      num += (gab.f[j] - ga.f[j] - gb.f[j]).squaredNorm();
      den += gab.f[j].squaredNorm();
    }
    worst = std::max(worst, std::sqrt(num / den));
    push_max(rep, "synthesis_linearity", worst, 1e-12,
             "boundary fields are linear in the spectral data and in the source");
  }

  MaterialPair<double> pair{MaterialField<double>(MaterialPoint<double>{3.0, 3.0, 3.0}, {}),
                            MaterialField<double>(unit, {})};
  const double cST = stoneley_speed(MaterialPoint<double>{3.0, 3.0, 3.0}, unit).c_ST;

  {
    double worst = 0;
    {
      const V2 xi(2.0, 1.0);
      const EllipticPoint<double> pt{0.0, V2(0.2, 0.1), fm.c_R * xi.norm(), xi};
      const auto ps = rayleigh_polarization(pt, C(0.8, 0.3), flat, id);
      worst = std::max(worst, ellipsoid_residual(ps));
    }
    {
      Mat2<double> gbase;
      gbase << 1.3, 0.2, 0.2, 0.8;
      BoundaryMetric<double> g(gbase, {{MetricEntry::kG12, 0.1, V2(0.0, 0.0), 2.0}}, {});
      const V2 x(0.3, -0.4);
      const V2 xi(1.2, -0.5);
      const double n = covector_norm(g, x, xi);
      const EllipticPoint<double> pt{0.0, x, fm.c_R * n, xi};
      const auto ps = rayleigh_polarization(pt, C(1.0, 0.0), flat, g);
      worst = std::max(worst, ellipsoid_residual(ps));
    }
    {
      const V2 xi(1.1, 0.4);
      const EllipticPoint<double> pt{0.0, V2::Zero(), cST * xi.norm(), xi};
      const auto ps = stoneley_polarization(pt, C(0.4, -0.9), pair, id);
      worst = std::max(worst, ellipsoid_residual(ps));
    }
    push_max(rep, "polarization_ellipsoid", worst, 1e-10,
             "sampled orbits stay on the polarization ellipsoid (free surface, curved metric, "
             "and interface cases)");
  }

  {
    const V2 xi(2.0, 1.0);
    const EllipticPoint<double> pt{0.0, V2(0.2, 0.1), fm.c_R * xi.norm(), xi};
    const auto ps = rayleigh_polarization(pt, C(1.0, 0.0), flat, id);
    const int nph = 32;
    std::vector<PolarizationSample<double>> series(nph, ps);
    std::vector<double> phases(nph);
    for (int k = 0; k < nph; ++k) phases[k] = 2.0 * pi_v<double> * k / nph;
    const auto repo = retrograde_check(series, phases);

    auto conj_ps = ps;
    conj_ps.p = ps.p.conjugate();
    for (int q = 0; q < 3; ++q) {
      conj_ps.re_p[q] = conj_ps.p[q].real();
      conj_ps.im_p[q] = conj_ps.p[q].imag();
    }
    std::vector<PolarizationSample<double>> series2(nph, conj_ps);
    const auto repc = retrograde_check(series2, phases);

    const bool ok = repo.retrograde_re && repo.retrograde_im && repo.phase_rate_positive &&
                    repo.signed_area_rate > 0 && !repc.retrograde_re &&
                    repc.signed_area_rate < 0;
    push(rep, "polarization_retrograde", ok, repo.signed_area_rate, 0.0,
         "orbit runs against the propagation direction and flips under conjugation; "
         "measured signed area rate must be positive");

    // Expected height-to-length ratio of the orbit for a solid with lambda = mu.
    const double kPoissonAxisRatio = 1.4679;
    push_max(rep, "polarization_axis_ratio", std::abs(repo.axis_ratio - kPoissonAxisRatio), 1e-3,
             "vertical-to-horizontal particle-orbit axis ratio for the lambda = mu solid");
  }

  auto track = [&](const SpeedField<double>& mdl, const WavePacketData<double>& pkt, double cref,
                   SynthesisPath path, const ChartPolicy<double>& pol,
                   const std::array<double, 2>& ts, const V2& span, int nx,
                   int ny) -> std::array<double, 2> {
    V2 cen[2];
    for (int k = 0; k < 2; ++k) {
      const V2 guess = -cref * ts[k] * pkt.center.normalized();
      const XYGrid<double> xs =
          uniform_xy<double>((guess - span).eval(), (guess + span).eval(), nx, ny);
      cen[k] = packet_center(cauchy_field(pkt, ts[k], xs, mdl, path, pol)).center;
    }
    const V2 d = cen[1] - cen[0];
    const double speed = d.norm() / (ts[1] - ts[0]);
    const V2 want = -pkt.center.normalized();
    const double cosang = std::clamp(d.normalized().dot(want), -1.0, 1.0);
    return {std::abs(speed - cref) / cref, std::acos(cosang) * 180.0 / pi_v<double>};
  };

  {
    const auto pkt = gaussian_packet<double>(V2(4.0, 0.0), 0.5, 96, 96);
    const auto [serr, aerr] = track(model, pkt, fm.c_R, SynthesisPath::kAuto, {}, {0.8, 2.4},
                                    V2(3.0, 2.4), 31, 25);
    push(rep, "packet_speed_flat_rayleigh", serr <= 0.02 && aerr <= 2.0, serr, 0.02,
         "free-surface packet moves at the surface speed along -xihat; direction error must stay "
         "within 2 degrees");
  }
  {
    const SpeedField<double> smodel = SpeedField<double>::stoneley(pair, id);
    const auto pkt = gaussian_packet<double>(V2(4.0, 0.0), 0.5, 64, 64);
    const auto [serr, aerr] = track(smodel, pkt, cST, SynthesisPath::kAuto, {}, {0.8, 2.4},
                                    V2(3.0, 2.4), 31, 25);
    push(rep, "packet_speed_flat_stoneley", serr <= 0.02 && aerr <= 2.0, serr, 0.02,
         "interface packet moves at the interface speed along -xihat within 2 degrees");
  }
  {
    MaterialField<double> bump(unit, {{MaterialParam::kMu, 0.1, V2(0.0, 1.2), 0.8}}, {});
    const SpeedField<double> bmodel = SpeedField<double>::rayleigh(bump, id);
    const auto pkt = gaussian_packet<double>(V2(4.0, 0.0), 0.5, 20, 20);
    ChartPolicy<double> pol;
    pol.max_directions = 32;
    pol.seed_nx = 7;
    pol.seed_ny = 7;
    pol.include_r0 = false;
    const auto [serr, aerr] = track(bmodel, pkt, fm.c_R, SynthesisPath::kChart, pol, {0.6, 1.2},
                                    V2(2.5, 2.0), 25, 21);
    push(rep, "packet_speed_bump_chart", serr <= 0.02 && aerr <= 2.0, serr, 0.02,
         "chart-path packet through a shear-modulus bump keeps speed and heading within "
         "2 percent / 2 degrees");
  }

  {
    auto err_for = [&](double k0) {
      const auto pkt = gaussian_packet<double>(V2(k0, 0.0), 0.4, 33, 33);
      const XYGrid<double> xs = uniform_xy<double>(V2(-0.5, -0.25), V2(0.5, 0.25), 9, 5);
      const auto f = cauchy_field(pkt, 0.0, xs, model, SynthesisPath::kFlat);
      CVec3<double> col;
      col << C(0, 1) * unit.mu * fm.theta_bar, C(0, 0), C(fm.b * unit.rho * fm.c_R * fm.c_R, 0);
      col /= fm.k1bar;
      double num = 0, den = 0;
      for (int j = 0; j < xs.count(); ++j) {
        C spectral_sum(0, 0);
        const V2 x = xs.at(j);
        for (int idx = 0; idx < pkt.grid.count(); ++idx) {
          spectral_sum += pkt.grid.weight * pkt.h_hat[idx] *
                          std::polar(1.0, x.dot(pkt.grid.at(idx)));
        }
        const CVec3<double> pred = col * spectral_sum;
        num += (f.f[j] - pred).squaredNorm();
        den += f.f[j].squaredNorm();
      }
      return std::sqrt(num / den);
    };
    const double e1 = err_for(6.0);
    const double e2 = err_for(12.0);
    push_max(rep, "frequency_refinement", e2 / e1, 0.55,
             "mismatch against the frozen compatibility column at the packet center at least "
             "halves when the center frequency doubles");
  }

  {
    const auto p = gaussian_packet<double>(V2(6.0, 0.0), 0.35, 41, 1);
    const XYGrid<double> xs = uniform_xy<double>(V2(-2.0, -0.4), V2(0.5, 0.4), 13, 5);
    const double t = 1.2;
    const auto ff = cauchy_field(p, t, xs, model, SynthesisPath::kFlat);
    ChartPolicy<double> pol;
    pol.seed_nx = 9;
    pol.seed_ny = 9;
    const auto fc = cauchy_field(p, t, xs, model, SynthesisPath::kChart, pol);
    double num = 0, den = 0;
    for (int j = 0; j < xs.count(); ++j) {
      num += (ff.f[j] - fc.f[j]).squaredNorm();
      den += ff.f[j].squaredNorm();
    }
    double worst = std::sqrt(num / den);

    // The flat path must agree with the scalar spectral sum componentwise.
    double worst_h1 = 0;
    for (int j = 0; j < xs.count(); ++j) {
      const V2 x = xs.at(j);
      const C h1 = flat_h1_value(fm, p.grid, p.h_hat, t, x);
      const C f3 = C(fm.b * unit.rho * fm.c_R * fm.c_R, 0) * h1 / fm.k1bar;
      const C f1 = C(0, 1) * unit.mu * fm.theta_bar * h1 / fm.k1bar;
      worst_h1 = std::max(worst_h1, std::abs(ff.f[j][2] - f3));
      worst_h1 = std::max(worst_h1, std::abs(ff.f[j][0] - f1));
    }
    double scale = 0;
    for (int j = 0; j < xs.count(); ++j) scale = std::max(scale, ff.f[j].norm());
    worst = std::max(worst, worst_h1 / scale);
    push_max(rep, "flat_pipeline_equivalence", worst, 1e-6,
             "chart evaluation and the separable spectral sum agree on a line packet; the flat "
             "path matches the scalar spectral reduction");
  }

  {
    // Periodic vertical forcing against its standing-wave closed form.
    const double p = 6.0, A3 = 1.0, T = 60.0;
    const double kstar = p / fm.c_R;
    const int L = 100;
    const double dxi = kstar / L;
    const int J = static_cast<int>(std::ceil(1.7 * kstar / dxi));
    XiGrid<double> grid;
    grid.lo = V2((-J + 0.5) * dxi, 0.0);
    grid.step = V2(dxi, 0.0);
    grid.n1 = 2 * J;
    grid.n2 = 1;
    grid.weight = dxi;

    auto chi = [&](double kk) -> double {
      const double a0 = 0.40 * kstar, a1 = 0.65 * kstar, b1 = 1.35 * kstar, b0 = 1.60 * kstar;
      if (kk <= a0 || kk >= b0) return 0.0;
      if (kk < a1) {
        const double u = (kk - a0) / (a1 - a0);
        return std::sin(0.5 * pi_v<double> * u) * std::sin(0.5 * pi_v<double> * u);
      }
      if (kk > b1) {
        const double u = (b0 - kk) / (b0 - b1);
        return std::sin(0.5 * pi_v<double> * u) * std::sin(0.5 * pi_v<double> * u);
      }
      return 1.0;
    };

    const int nt = 1501;
    SourceData<double> src;
    src.grid = grid;
    src.expiry = T;
    src.times.resize(nt);
    for (int k = 0; k < nt; ++k) src.times[k] = T * k / double(nt - 1);
    src.l_hat.assign(static_cast<std::size_t>(nt) * grid.count(), CVec3<double>::Zero());
    for (int k = 0; k < nt; ++k) {
      const C mod = std::polar(1.0, p * src.times[k]);
      for (int idx = 0; idx < grid.count(); ++idx) {
        const double kn = std::abs(grid.at(idx)[0]);
        src.l_hat[static_cast<std::size_t>(k) * grid.count() + idx] =
            CVec3<double>(C(0, 0), C(0, 0), A3 * chi(kn) * mod);
      }
    }

    WavePacketData<double> comp;
    comp.grid = grid;
    comp.center = V2(kstar, 0.0);
    comp.width = 0.0;
    comp.h_hat.resize(grid.count());
    for (int idx = 0; idx < grid.count(); ++idx) {
      const double kn = std::abs(grid.at(idx)[0]);
      const double q = p - fm.c_R * kn;
      comp.h_hat[idx] = -fm.k1bar * A3 * chi(kn) * std::polar(1.0, T * p) / (fm.r_prime * q);
    }

    const XYGrid<double> xs = uniform_xy<double>(V2(0.75, 0.0), V2(3.5, 0.0), 45, 1);
    const auto duh = inhomogeneous_field(src, T, xs, model);
    const auto cau = cauchy_field(comp, 0.0, xs, model);
    const C standing(-pi_v<double> / fm.c_R, 0.0);
    double sup = 0;
    for (int j = 0; j < xs.count(); ++j) {
      const CVec3<double> closed = example1_closed_form(fm, T, xs.at(j, 0)[0], A3, p) * standing;
      sup = std::max(sup, (duh.f[j] + cau.f[j] - closed).norm());
    }
    push_max(rep, "harmonic_source_closed_form", sup, 1e-2,
             "late-time field of a periodic vertical line source matches its standing-wave "
             "closed form away from the source line");

    double worst = 0;
    for (double x1 : {0.3, 0.7, 1.4}) {
      const CVec3<double> fp = example1_closed_form(fm, T, x1, A3, p);
      const CVec3<double> fn = example1_closed_form(fm, T, -x1, A3, p);
      worst = std::max(worst, std::abs(fp[0] + fn[0]));
      worst = std::max(worst, std::abs(fp[2] - fn[2]));
      worst = std::max(worst, std::abs(fp[1]));
    }
    worst = std::max(worst, std::abs(example1_closed_form(fm, T, 0.0, A3, p)[0]));
    push_max(rep, "harmonic_source_parity", worst, 1e-12,
             "standing-wave components are odd (horizontal) and even (vertical) across the "
             "source line");
  }

  {
    const double eps = 0.05, a3 = 1.0;
    auto peak_near = [&](double t, double center) {
      double best_x = center, best_v = -1.0;
      for (double x1 = center - 0.3; x1 <= center + 0.3; x1 += 0.002) {
        const double v = std::abs(example2_closed_form(fm, t, x1, a3, eps)[2]);
        if (v > best_v) {
          best_v = v;
          best_x = x1;
        }
      }
      return std::pair{best_x, best_v};
    };
    const double t1 = 5.0, t2 = 6.25;
    const auto [xp1, hp1] = peak_near(t1, fm.c_R * t1);
    const auto [xm1, hm1] = peak_near(t1, -fm.c_R * t1);
    const auto [xp2, hp2] = peak_near(t2, fm.c_R * t2);
    const auto [xm2, hm2] = peak_near(t2, -fm.c_R * t2);
    double worst = std::max(std::abs(xp1 - fm.c_R * t1), std::abs(xm1 + fm.c_R * t1));
    worst = std::max(worst, std::abs(xp2 - fm.c_R * t2));
    const double sep_growth = (xp2 - xm2) - (xp1 - xm1);
    bool ok = std::abs(sep_growth - 2.0 * fm.c_R * (t2 - t1)) <= 0.02;
    // peak height doubles when the mollifier width halves
    const double h_half = std::abs(example2_closed_form(fm, t1, xp1, a3, eps / 2)[2]);
    ok = ok && std::abs(h_half / hp1 - 2.0) <= 1e-3;
    ok = ok && std::abs(example2_closed_form(fm, t1, 1.3, a3, eps)[1]) == 0.0;
    (void)hm1;
    (void)hp2;
    (void)hm2;
    push(rep, "impulse_response_peaks", ok && worst <= eps, worst, eps,
         "impulse response peaks ride at +/- c_R t, separate at 2 c_R dt, and sharpen "
         "inversely with the mollifier width");
  }

  {
    const double n = 1.5;
    EvanescentMode<double> mode;
    mode.pt = EllipticPoint<double>{0.0, V2::Zero(), fm.c_R * n, V2(n, 0.0)};
    mode.f_hat << C(0.3, 0.1), C(-0.2, 0.4), C(1.0, -0.5);
    const std::vector<double> depths{0.0, 0.25, 0.5, 0.75, 1.0};
    double worst = 0;
    for (HalfSide side : {HalfSide::kPlus, HalfSide::kMinus}) {
      const EvanescentProfile<double> prof =
          evanescent_profile({mode}, depths, flat, id, side);
      worst = std::max(worst, (prof.u_at(0, 0) - mode.f_hat).norm());
      const EvanescentRadicals<double> rad = evanescent_radicals(unit, mode.pt.tau, n);
      for (int comp = 0; comp < 3; ++comp) {
        const double target = comp == 2 ? -rad.beta_tilde : -rad.alpha_tilde;
        const double w0 = std::abs(prof.w_at(0, 0)[comp]);
        const double w1 = std::abs(prof.w_at(0, 4)[comp]);
        const double slope = std::log(w1 / w0) / (depths[4] - depths[0]);
        worst = std::max(worst, std::abs(slope - target));
      }
      if (!(rad.alpha_tilde <= rad.beta_tilde)) worst = 1e300;
    }
    for (int i = 0; i < 50; ++i) {
      const MaterialPoint<double> m = random_material(rng);
      const double s = urand(rng, 0.05, 0.95) * m.cs();
      const double nn = urand(rng, 0.5, 2.5);
      const EvanescentRadicals<double> rad = evanescent_radicals(m, s * nn, nn);
      if (!(rad.alpha_tilde <= rad.beta_tilde) || !(rad.alpha_tilde > 0)) worst = 1e300;
    }
    push_max(rep, "evanescent_profile", worst, 1e-6,
             "depth continuation: boundary trace recovered exactly, per-component log-slopes "
             "equal the decay radicals, shear radical below pressure radical");
  }

  {
    auto once = [&]() {
      const auto p = gaussian_packet<double>(V2(3.0, 0.5), 0.5, 11, 7);
      const XYGrid<double> xs = uniform_xy<double>(V2(-1.5, -0.5), V2(0.0, 0.5), 7, 3);
      std::vector<BoundaryFieldGrid<double>> frames{cauchy_field(p, 0.9, xs, model)};
      std::ostringstream os;
      csvio::write_field_csv(os, frames);
      return os.str();
    };
    const std::string a = once();
    const std::string b = once();
    push(rep, "synthesis_repeatability", a == b, a == b ? 0.0 : 1.0, 0.0,
         "identical inputs serialize to byte-identical tables");
  }
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  os << "invariant audit\n";
  os << "seed " << seed << "\n";
  os << "checks " << checks.size() << "\n";
  int npass = 0;
  for (const auto& c : checks) {
    if (c.pass) ++npass;
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << csvio::format_value(c.measured)
       << " threshold=" << csvio::format_value(c.threshold);
    if (!c.note.empty()) os << " (" << c.note << ")";
    os << "\n";
  }
  os << "RESULT " << (all_pass() ? "PASS" : "FAIL") << " " << npass << "/" << checks.size()
     << "\n";
  return os.str();
}

std::string VerifyReport::to_json() const {
  std::ostringstream os;
  os << "{\n  \"seed\": " << seed << ",\n  \"all_pass\": " << (all_pass() ? "true" : "false")
     << ",\n  \"checks\": [\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const VerifyCheck& c = checks[i];
    os << "    {\"name\": \"" << c.name << "\", \"pass\": " << (c.pass ? "true" : "false")
       << ", \"measured\": " << csvio::format_value(c.measured)
       << ", \"threshold\": " << csvio::format_value(c.threshold) << ", \"note\": \"" << c.note
       << "\"}";
    os << (i + 1 < checks.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

VerifyReport run_verify(std::uint64_t seed) {
  Rng rng(seed);
  VerifyReport rep;
  rep.seed = seed;
  check_material(rng, rep);
  check_dispersion(rng, rep);
  check_symbols(rng, rep);
  check_rays(rng, rep);
  check_synthesis(rng, rep);
  return rep;
}

}  // namespace raystone
