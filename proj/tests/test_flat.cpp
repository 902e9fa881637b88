// Constant-coefficient closed forms: the flat model bundle, spectral sums,
// line-source solutions, and evanescent decay radicals.
#include <doctest.h>

#include <raystone/flat.hpp>
#include <raystone/symbols.hpp>

#include "reference_values.hpp"

using namespace raystone;
using D = double;
using C = std::complex<double>;

namespace {
const MaterialPoint<D> kUnit{1.0, 1.0, 1.0};
}

TEST_CASE("flat model bundle carries the frozen root data") {
  FlatModel<D> fm = make_flat_model(kUnit);
  CHECK(fm.c_R == doctest::Approx(refvals::kCR).epsilon(1e-14));
  CHECK(fm.a == doctest::Approx(refvals::kA_cR).epsilon(1e-13));
  CHECK(fm.b == doctest::Approx(refvals::kB_cR).epsilon(1e-13));
  CHECK(fm.theta_bar == doctest::Approx(refvals::kThetaBar_cR).epsilon(1e-13));
  CHECK(fm.r_prime == doctest::Approx(refvals::kRPrimeCR).epsilon(1e-10));
  CHECK(fm.k1bar == doctest::Approx(refvals::kK1Bar_cR).epsilon(1e-12));
  CHECK(fm.m2bar == doctest::Approx(refvals::kM2Bar_cR).epsilon(1e-12));
}

TEST_CASE("flat response multiplier agrees with the general assembly") {
  FlatModel<D> fm = make_flat_model(kUnit);
  MaterialField<D> field(kUnit, {});
  BoundaryMetric<D> g;
  EllipticPoint<D> pt{0.0, Vec2<D>(0.3, -0.2), 0.5, Vec2<D>(1.0, 0.0)};
  Symbol3<D> direct = flat_dn_multiplier(fm, pt.tau, pt.xi);
  Symbol3<D> general = dn_symbol(pt, field, g);
  CHECK((direct.entries - general.entries).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(direct.entries(2, 2).real() == doctest::Approx(refvals::kDN33).epsilon(1e-14));

  // Degree-one homogeneity of the multiplier.
  Symbol3<D> scaled = flat_dn_multiplier(fm, 2.0 * pt.tau, Vec2<D>(2.0, 0.0));
  CHECK((scaled.entries - 2.0 * direct.entries).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("single spectral mode rides at the surface speed") {
  FlatModel<D> fm = make_flat_model(kUnit);
  XiGrid<D> grid;
  grid.lo = Vec2<D>(2.0, 0.0);
  grid.step = Vec2<D>(0, 0);
  grid.n1 = 1;
  grid.n2 = 1;
  grid.weight = 1.0;
  std::vector<C> h0{C(1.0, 0.0)};
  // Following the wave along -x at speed c_R keeps the value constant.
  C v0 = flat_h1_value(fm, grid, h0, 0.0, Vec2<D>(0.0, 0.0));
  C v1 = flat_h1_value(fm, grid, h0, 1.0, Vec2<D>(-fm.c_R, 0.0));
  CHECK(std::abs(v1 - v0) < 1e-13);
  // A static observer sees the phase advance by t c_R |xi|.
  C vs = flat_h1_value(fm, grid, h0, 1.0, Vec2<D>(0.0, 0.0));
  CHECK(std::abs(vs - v0 * std::polar(1.0, fm.c_R * 2.0)) < 1e-13);
}

TEST_CASE("spectral grids enumerate nodes in row-major order") {
  XiGrid<D> grid = centered_grid(Vec2<D>(3.0, 1.0), Vec2<D>(1.0, 2.0), 5, 3);
  CHECK(grid.count() == 15);
  CHECK((grid.at(2, 1) - Vec2<D>(3.0, 1.0)).norm() < 1e-15);
  CHECK((grid.at(0, 0) - Vec2<D>(2.0, -1.0)).norm() < 1e-15);
  CHECK((grid.at(grid.count() - 1) - Vec2<D>(4.0, 3.0)).norm() < 1e-15);
  CHECK(grid.weight == doctest::Approx(0.5 * 2.0).epsilon(1e-14));
}

TEST_CASE("periodic line source standing wave has sine and cosine structure") {
  FlatModel<D> fm = make_flat_model(kUnit);
  const D p = 3.0, a3 = 1.0, t = 0.7;
  CVec3<D> at0 = example1_closed_form(fm, t, 0.0, a3, p);
  CHECK(std::abs(at0[0]) < 1e-13);  // horizontal trace vanishes on the source line
  CHECK(std::abs(at0[1]) < 1e-13);
  const D vert_peak = 2.0 * fm.b * kUnit.rho * fm.c_R * fm.c_R / std::abs(fm.r_prime);
  CHECK(std::abs(at0[2]) == doctest::Approx(vert_peak).epsilon(1e-12));

  // Odd/even structure across the source line.
  CVec3<D> fp = example1_closed_form(fm, t, 1.3, a3, p);
  CVec3<D> fn = example1_closed_form(fm, t, -1.3, a3, p);
  CHECK(std::abs(fp[0] + fn[0]) < 1e-13);
  CHECK(std::abs(fp[2] - fn[2]) < 1e-13);

  // The spatial frequency of the vertical trace is p / c_R.
  const D quarter = pi_v<D> / 2.0 * fm.c_R / p;
  CVec3<D> node = example1_closed_form(fm, t, quarter, a3, p);
  CHECK(std::abs(node[2]) < 1e-12);
}

TEST_CASE("impulsive line source response peaks at the travel distance") {
  FlatModel<D> fm = make_flat_model(kUnit);
  const D t = 5.0, eps = 0.05, a3 = 1.0;
  D best = 0, best_x = 0;
  for (D x1 = 0.5; x1 <= 6.0; x1 += 0.01) {
    const D v = std::abs(example2_closed_form(fm, t, x1, a3, eps)[2]);
    if (v > best) {
      best = v;
      best_x = x1;
    }
  }
  CHECK(best_x == doctest::Approx(t * fm.c_R).epsilon(0.01));

  // Components keep their parity and the in-plane transverse part vanishes.
  CVec3<D> fp = example2_closed_form(fm, t, 1.3, a3, eps);
  CVec3<D> fn = example2_closed_form(fm, t, -1.3, a3, eps);
  CHECK(std::abs(fp[0] + fn[0]) < 1e-13);
  CHECK(std::abs(fp[2] - fn[2]) < 1e-13);
  CHECK(std::abs(fp[1]) < 1e-15);

  // Halving the mollifier width doubles the delta-ridge height.
  const D tall = std::abs(example2_closed_form(fm, t, t * fm.c_R, a3, eps / 2)[2]);
  const D ref = std::abs(example2_closed_form(fm, t, t * fm.c_R, a3, eps)[2]);
  CHECK(tall / ref == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("decay radicals at the evaluation point match the kernel values") {
  EvanescentRadicals<D> rad = evanescent_radicals(kUnit, 0.5, 1.0);
  CHECK(rad.alpha_tilde == doctest::Approx(refvals::kA_half).epsilon(1e-14));
  CHECK(rad.beta_tilde == doctest::Approx(refvals::kB_half).epsilon(1e-14));
  CHECK(rad.alpha_tilde <= rad.beta_tilde);

  // Scaling: radicals are degree-one in |xi| at fixed slowness.
  EvanescentRadicals<D> rad2 = evanescent_radicals(kUnit, 1.0, 2.0);
  CHECK(rad2.alpha_tilde == doctest::Approx(2.0 * rad.alpha_tilde).epsilon(1e-13));
  CHECK(rad2.beta_tilde == doctest::Approx(2.0 * rad.beta_tilde).epsilon(1e-13));
}

TEST_CASE("causal source quadrature validates its sampling") {
  FlatModel<D> fm = make_flat_model(kUnit);
  XiGrid<D> grid;
  grid.lo = Vec2<D>(1.0, 0.0);
  grid.step = Vec2<D>(0, 0);
  grid.n1 = 1;
  grid.n2 = 1;
  grid.weight = 1.0;
  std::vector<D> times{0.0, 0.5, 1.0, 1.5};  // even count: rejected
  std::vector<C> g4(4, C(1.0, 0.0));
  CHECK_THROWS_AS(flat_h1_duhamel(fm, grid, times, g4, 2.0, Vec2<D>(0, 0)), InvalidInput);
  std::vector<D> times3{0.0, 0.5, 1.0};
  std::vector<C> wrong_size(2, C(1.0, 0.0));
  CHECK_THROWS_AS(flat_h1_duhamel(fm, grid, times3, wrong_size, 2.0, Vec2<D>(0, 0)),
                  InvalidInput);
  // Zero forcing integrates to zero.
  std::vector<C> zeros(3, C(0.0, 0.0));
  CHECK(std::abs(flat_h1_duhamel(fm, grid, times3, zeros, 2.0, Vec2<D>(0, 0))) == 0.0);
}

TEST_CASE("flat phase is the elapsed-time shift of the spatial phase") {
  FlatModel<D> fm = make_flat_model(kUnit);
  const Vec2<D> x(0.7, -0.4), xi(1.5, 0.5);
  const D t = 1.3;
  const D phi = flat_phase(fm, t, x, xi);
  CHECK(phi == doctest::Approx(t * fm.c_R * xi.norm() + x.dot(xi)).epsilon(1e-14));
}
