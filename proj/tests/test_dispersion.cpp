// Surface and interface dispersion: secular functions, root finding, and
// the interface eigenvalue monotonicity facts.
#include <doctest.h>

#include <raystone/dispersion.hpp>

#include <random>

#include "reference_values.hpp"

using namespace raystone;
using D = double;

namespace {
const MaterialPoint<D> kUnit{1.0, 1.0, 1.0};
const MaterialPoint<D> kHeavy{3.0, 3.0, 3.0};

MaterialPoint<D> random_material(std::mt19937_64& rng) {
  std::uniform_real_distribution<D> rho(0.5, 4.0), mod(0.5, 3.0);
  return MaterialPoint<D>{rho(rng), mod(rng), mod(rng)};
}
}  // namespace

TEST_CASE("half-shear-speed kernels match the frozen references") {
  DispersionKernels<D> k = kernels(0.5, kUnit);
  CHECK(k.a == doctest::Approx(refvals::kA_half).epsilon(1e-15));
  CHECK(k.b == doctest::Approx(refvals::kB_half).epsilon(1e-15));
  CHECK(k.theta_bar == doctest::Approx(refvals::kThetaBar_half).epsilon(1e-14));
  CHECK(rayleigh_residual(0.5, kUnit) == doctest::Approx(refvals::kR_half).epsilon(1e-14));
}

TEST_CASE("kernels approach their static limits at small slowness") {
  DispersionKernels<D> k = kernels(1e-8, kUnit);
  CHECK(k.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.b == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(k.theta_bar) < 1e-15);
  CHECK(std::abs(rayleigh_residual(1e-8, kUnit)) < 1e-15);
}

TEST_CASE("surface speed for the unit material matches the frozen root") {
  RayleighRoot<D> root = rayleigh_speed(kUnit);
  CHECK(root.c_R == doctest::Approx(refvals::kCR).epsilon(1e-14));
  CHECK(root.slope == doctest::Approx(refvals::kRPrimeCR).epsilon(1e-10));
  CHECK(std::abs(rayleigh_residual(root.c_R, kUnit)) < 1e-14);
}

TEST_CASE("surface speed scales with the shear speed") {
  // Scaling mu and lam by 4 doubles every speed; the ratio c_R / c_s is fixed.
  MaterialPoint<D> scaled{1.0, 4.0, 4.0};
  RayleighRoot<D> r1 = rayleigh_speed(kUnit);
  RayleighRoot<D> r2 = rayleigh_speed(scaled);
  CHECK(r2.c_R == doctest::Approx(2.0 * r1.c_R).epsilon(1e-13));
}

TEST_CASE("surface secular function has exactly one sign change below c_s") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    MaterialPoint<D> m = random_material(rng);
    const D cs = m.cs();
    D lo = 0, hi = 0;
    const int changes = detail::scan_sign_changes(
        [&](D s) { return rayleigh_residual(s, m); }, 1e-9 * cs, cs * (1 - 1e-9), 2000, &lo,
        &hi);
    CHECK(changes == 1);
    RayleighRoot<D> root = rayleigh_speed(m);
    CHECK(root.c_R > lo);
    CHECK(root.c_R < hi);
    CHECK(root.c_R < cs);
    CHECK(std::abs(rayleigh_residual(root.c_R, m)) < 1e-11);
  }
}

TEST_CASE("surface residual rejects slowness at or above the shear speed") {
  CHECK_THROWS_AS(rayleigh_residual(1.0, kUnit), OutsideEllipticRange);
  CHECK_THROWS_AS(rayleigh_residual(1.2, kUnit), OutsideEllipticRange);
  CHECK_THROWS_AS(rayleigh_residual(-0.1, kUnit), OutsideEllipticRange);
}

TEST_CASE("interface determinant factors through the secular function") {
  // Identical unit sides at s = 0.5: frozen determinant, its cleared form,
  // and the secular value, tied together by det M * d+ * d- = S(s).
  InterfaceScalarsT<D> sc =
      interface_scalars_t(0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
  StoneleyMatrices<D> sm = stoneley_matrix(0.5, kUnit, kUnit);
  const D det = sm.m.determinant().real();
  const D secular = stoneley_residual(0.5, kUnit, kUnit);
  CHECK(det == doctest::Approx(refvals::kDetMInterface_half).epsilon(1e-13));
  CHECK(secular == doctest::Approx(refvals::kSInterface_half).epsilon(1e-13));
  CHECK(det * sc.dplus * sc.dminus == doctest::Approx(secular).epsilon(1e-12));
  CHECK(secular * sc.dplus * sc.dminus ==
        doctest::Approx(refvals::kDetMCleared_half).epsilon(1e-12));
  CHECK(std::abs(sm.m.determinant().imag()) < 1e-13);
}

TEST_CASE("interface matrix eigenvalues match trace and determinant") {
  StoneleyMatrices<D> sm = stoneley_matrix(0.5, kHeavy, kUnit);
  const std::complex<D> tr = sm.m(0, 0) + sm.m(1, 1);
  CHECK(sm.m1 + sm.m2 == doctest::Approx(tr.real()).epsilon(1e-13));
  CHECK(sm.m1 * sm.m2 == doctest::Approx(sm.m.determinant().real()).epsilon(1e-13));
  CHECK(sm.m1 <= sm.m2);
}

TEST_CASE("interface speed for the shipped pair matches the frozen root") {
  StoneleyRoot<D> root = stoneley_speed(kHeavy, kUnit);
  REQUIRE(root.exists);
  CHECK(root.c_ST == doctest::Approx(refvals::kCST).epsilon(1e-13));
  CHECK(root.slope == doctest::Approx(refvals::kM1PrimeCST).epsilon(1e-8));
  CHECK(root.c_ST < min_shear_speed(kHeavy, kUnit));
  // m1 vanishes at the root.
  StoneleyMatrices<D> sm = stoneley_matrix(root.c_ST, kHeavy, kUnit);
  CHECK(std::abs(sm.m1) < 1e-11);
}

TEST_CASE("identical half-spaces carry no interface wave") {
  StoneleyRoot<D> root = stoneley_speed(kUnit, kUnit);
  CHECK_FALSE(root.exists);
}

TEST_CASE("interface eigenvalue slope is the frozen derivative at the root") {
  const D cst = stoneley_speed(kHeavy, kUnit).c_ST;
  Jet<D, 1> m1 = stoneley_m1_jet(cst, kHeavy, kUnit);
  CHECK(std::abs(m1.v) < 1e-11);
  CHECK(m1.g[0] == doctest::Approx(refvals::kM1PrimeCST).epsilon(1e-11));
  CHECK(m1.h(0, 0) == doctest::Approx(refvals::kM1SecondCST).epsilon(1e-9));
}

TEST_CASE("auxiliary interface matrix derivative has the frozen signs") {
  // Matrix derivative dN/d(s^2) at s^2 = 0.3, identical unit sides: its
  // determinant is positive and its trace negative, at the frozen values.
  const D iota = 0.3, h = 1e-6;
  auto n_at = [&](D ii) {
    return stoneley_matrix(std::sqrt(ii), kUnit, kUnit).n_plus;
  };
  CMat2<D> dn = (n_at(iota + h) - n_at(iota - h)) / (2 * h);
  CHECK(dn.determinant().real() == doctest::Approx(refvals::kDetNPrime_03).epsilon(1e-7));
  CHECK(dn.trace().real() == doctest::Approx(refvals::kTrNPrime_03).epsilon(1e-8));
  CHECK(dn.determinant().real() > 0);
  CHECK(dn.trace().real() < 0);
}

TEST_CASE("definiteness report passes for random admissible pairs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    MaterialPoint<D> p = random_material(rng);
    MaterialPoint<D> q = random_material(rng);
    const D smax = min_shear_speed(p, q);
    std::vector<D> grid(25);
    for (int k = 0; k < 25; ++k) grid[k] = (0.05 + 0.9 * k / 24.0) * smax;
    DefinitenessReport rep = definiteness_report(p, q, grid);
    CHECK(rep.all_pass());
    for (const auto& item : rep.items) {
      INFO(item.name);
      CHECK(item.pass);
    }
  }
}

TEST_CASE("interface eigenvalues decrease along the slowness grid") {
  std::vector<D> grid(60);
  const D smax = min_shear_speed(kHeavy, kUnit);
  for (int k = 0; k < 60; ++k) grid[k] = (0.02 + 0.95 * k / 59.0) * smax;
  D prev1 = std::numeric_limits<D>::max();
  D prev2 = std::numeric_limits<D>::max();
  for (D s : grid) {
    StoneleyMatrices<D> sm = stoneley_matrix(s, kHeavy, kUnit);
    CHECK(sm.m1 < prev1);
    CHECK(sm.m2 < prev2);
    prev1 = sm.m1;
    prev2 = sm.m2;
  }
}

TEST_CASE("interface root bracket has at most one sign change across pairs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    MaterialPoint<D> p = random_material(rng);
    MaterialPoint<D> q = random_material(rng);
    const D smax = min_shear_speed(p, q);
    D lo = 0, hi = 0;
    const int changes = detail::scan_sign_changes(
        [&](D s) { return stoneley_matrix(s, p, q).m1; }, 0.02 * smax, smax * (1 - 1e-9),
        800, &lo, &hi);
    CHECK(changes <= 1);
    StoneleyRoot<D> root = stoneley_speed(p, q);
    CHECK(root.exists == (changes == 1));
  }
}

TEST_CASE("bisection tightens a bracket to the requested tolerance") {
  auto f = [](D s) { return s * s - 2.0; };
  const D r = detail::bisect(f, 1.0, 2.0, 1e-14);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}
