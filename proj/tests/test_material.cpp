// Material fields, working box, boundary metric, and forward-mode jets.
#include <doctest.h>

#include <raystone/material.hpp>

#include "reference_values.hpp"

using namespace raystone;
using D = double;

TEST_CASE("unit material has unit shear speed and sqrt(3) pressure speed") {
  MaterialPoint<D> m;
  CHECK(m.rho == 1.0);
  CHECK(m.lam == 1.0);
  CHECK(m.mu == 1.0);
  CHECK(m.cs() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.cp() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  auto [cs, cp] = elastic_speeds(m);
  CHECK(cs == m.cs());
  CHECK(cp == m.cp());
}

TEST_CASE("pressure speed strictly dominates shear speed for admissible moduli") {
  for (auto [rho, lam, mu] : {std::array<D, 3>{0.7, 0.6, 2.9}, {3.2, 2.1, 0.5}, {1.0, 3.0, 1.0}}) {
    MaterialPoint<D> m{rho, lam, mu};
    CHECK(m.cp() > m.cs() * std::sqrt(2.0));  // cp^2 - 2 cs^2 = lam / rho > 0
  }
}

TEST_CASE("non-positive material parameters are rejected") {
  CHECK_THROWS_AS(elastic_speeds(MaterialPoint<D>{0.0, 1.0, 1.0}), NonPositiveParameter);
  CHECK_THROWS_AS(elastic_speeds(MaterialPoint<D>{1.0, -0.5, 1.0}), NonPositiveParameter);
  CHECK_THROWS_AS(elastic_speeds(MaterialPoint<D>{1.0, 1.0, 0.0}), NonPositiveParameter);
  CHECK_THROWS_AS(MaterialField<D>(MaterialPoint<D>{1.0, 1.0, -2.0}, {}), NonPositiveParameter);
}

TEST_CASE("default field is the constant unit material") {
  MaterialField<D> f;
  CHECK(f.constant());
  for (auto x : {Vec2<D>(0, 0), Vec2<D>(3.7, -9.2), Vec2<D>(-10, 10)}) {
    MaterialPoint<D> m = f.at(x);
    CHECK(m.rho == 1.0);
    CHECK(m.lam == 1.0);
    CHECK(m.mu == 1.0);
  }
}

TEST_CASE("gaussian bumps perturb exactly one parameter") {
  MaterialPoint<D> base{2.0, 1.5, 1.0};
  GaussBump<D> bump;
  bump.param = MaterialParam::kMu;
  bump.amplitude = 0.4;
  bump.center = Vec2<D>(1.0, -2.0);
  bump.width = 0.7;
  MaterialField<D> f(base, {bump});
  CHECK_FALSE(f.constant());

  MaterialPoint<D> at_center = f.at(bump.center);
  CHECK(at_center.mu == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(at_center.rho == 2.0);
  CHECK(at_center.lam == 1.5);

  // One width away the Gaussian has decayed to exp(-1/2).
  MaterialPoint<D> off = f.at(bump.center + Vec2<D>(bump.width, 0));
  CHECK(off.mu == doctest::Approx(1.0 + 0.4 * std::exp(-0.5)).epsilon(1e-14));

  // Far away the bump is numerically gone.
  CHECK(f.at(Vec2<D>(9.0, 9.0)).mu == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("field construction rejects bumps that break positivity") {
  GaussBump<D> hole;
  hole.param = MaterialParam::kMu;
  hole.amplitude = -1.5;  // would push mu = 1 below zero near the center
  hole.center = Vec2<D>(0, 0);
  hole.width = 1.0;
  CHECK_THROWS_AS(MaterialField<D>(MaterialPoint<D>{}, {hole}), NonPositiveParameter);

  GaussBump<D> flat_width = hole;
  flat_width.amplitude = 0.1;
  flat_width.width = 0.0;
  CHECK_THROWS_AS(MaterialField<D>(MaterialPoint<D>{}, {flat_width}), NonPositiveParameter);
}

TEST_CASE("evaluation outside the working box is rejected") {
  WorkingBox<D> box;
  box.lo = Vec2<D>(-2, -2);
  box.hi = Vec2<D>(2, 2);
  MaterialField<D> f(MaterialPoint<D>{}, {}, box);
  CHECK_NOTHROW(f.at(Vec2<D>(1.9, -1.9)));
  CHECK_THROWS_AS(f.at(Vec2<D>(2.1, 0.0)), OutsideWorkingBox);
  CHECK_THROWS_AS(f.at(Vec2<D>(0.0, -2.5)), OutsideWorkingBox);
  CHECK(box.contains(Vec2<D>(0, 0)));
  CHECK_FALSE(box.contains(Vec2<D>(0, 3)));
}

TEST_CASE("parameter jets carry exact first and second derivatives") {
  GaussBump<D> bump;
  bump.param = MaterialParam::kRho;
  bump.amplitude = 0.3;
  bump.center = Vec2<D>(0.4, -0.1);
  bump.width = 1.3;
  MaterialField<D> f(MaterialPoint<D>{}, {bump});
  const Vec2<D> x(0.9, 0.3);

  Jet<D, 2> jet = f.param_jet<2>(MaterialParam::kRho, x, 0, 1);
  const D h = 1e-5;
  auto rho_at = [&](D dx, D dy) {
    return f.at(Vec2<D>(x[0] + dx, x[1] + dy)).rho;
  };
  const D fd_x = (rho_at(h, 0) - rho_at(-h, 0)) / (2 * h);
  const D fd_y = (rho_at(0, h) - rho_at(0, -h)) / (2 * h);
  const D fd_xx = (rho_at(h, 0) - 2 * rho_at(0, 0) + rho_at(-h, 0)) / (h * h);
  const D fd_xy = (rho_at(h, h) - rho_at(h, -h) - rho_at(-h, h) + rho_at(-h, -h)) / (4 * h * h);
  CHECK(jet.v == doctest::Approx(rho_at(0, 0)).epsilon(1e-15));
  CHECK(jet.g[0] == doctest::Approx(fd_x).epsilon(1e-8));
  CHECK(jet.g[1] == doctest::Approx(fd_y).epsilon(1e-8));
  CHECK(jet.h(0, 0) == doctest::Approx(fd_xx).epsilon(1e-5));
  CHECK(jet.h(0, 1) == doctest::Approx(fd_xy).epsilon(1e-5));

  // Slot -1 produces a plain value with zero derivative payload.
  Jet<D, 2> plain = f.param_jet<2>(MaterialParam::kRho, x, -1, -1);
  CHECK(plain.v == jet.v);
  CHECK(plain.g.norm() == 0.0);
  CHECK(plain.h.norm() == 0.0);
}

TEST_CASE("jet arithmetic reproduces calculus on composite expressions") {
  // d/dx of sqrt(x^2 + 3x) at x = 2: (2x + 3) / (2 sqrt(...)) = 7 / (2 sqrt(10)).
  Jet<D, 1> x = Jet<D, 1>::variable(2.0, 0);
  Jet<D, 1> y = sqrt(x * x + 3.0 * x);
  CHECK(y.v == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
  CHECK(y.g[0] == doctest::Approx(7.0 / (2.0 * std::sqrt(10.0))).epsilon(1e-14));
  // Second derivative of x^3 at 2 is 12.
  Jet<D, 1> c = x * x * x;
  CHECK(c.h(0, 0) == doctest::Approx(12.0).epsilon(1e-14));
}

TEST_CASE("identity metric gives the euclidean covector norm") {
  BoundaryMetric<D> g;
  CHECK(g.identity());
  const Vec2<D> x(0.3, -0.8), xi(3.0, -4.0);
  CHECK(covector_norm(g, x, xi) == doctest::Approx(5.0).epsilon(1e-15));
  Mat2<D> m = g.at(x);
  CHECK((m - Mat2<D>::Identity()).norm() == 0.0);
}

TEST_CASE("metric bumps change lengths and keep inverse consistency") {
  MetricBump<D> b;
  b.entry = MetricEntry::kG11;
  b.amplitude = 0.5;
  b.center = Vec2<D>(0, 0);
  b.width = 2.0;
  BoundaryMetric<D> g(Mat2<D>::Identity(), {b});
  CHECK_FALSE(g.identity());

  const Vec2<D> x(0.2, -0.4);
  Mat2<D> m = g.at(x);
  Mat2<D> minv = g.inverse_at(x);
  CHECK((m * minv - Mat2<D>::Identity()).norm() < 1e-14);

  // Covector norm is |xi|_{g^{-1}} and responds to the g11 bump for xi = e1.
  const Vec2<D> e1(1.0, 0.0);
  const D n = covector_norm(g, x, e1);
  CHECK(n == doctest::Approx(std::sqrt(minv(0, 0))).epsilon(1e-14));
  CHECK(n < 1.0);  // g11 > 1 shrinks the dual norm

  // Jet form agrees with the plain evaluation.
  auto mj = g.matrix_jet<2>(x, 0, 1);
  CHECK(mj(0, 0).v == doctest::Approx(m(0, 0)).epsilon(1e-15));
  auto mjinv = g.inverse_jet<2>(x, 0, 1);
  CHECK(mjinv(1, 1).v == doctest::Approx(minv(1, 1)).epsilon(1e-15));
}

TEST_CASE("degenerate metric perturbations are rejected") {
  MetricBump<D> b;
  b.entry = MetricEntry::kG11;
  b.amplitude = -1.0;  // pushes g11 = 1 to zero at the center
  b.center = Vec2<D>(0, 0);
  b.width = 1.0;
  CHECK_THROWS_AS(BoundaryMetric<D>(Mat2<D>::Identity(), {b}), DegenerateMetric);
}

TEST_CASE("material pair holds independent sides") {
  MaterialPair<D> pair{MaterialField<D>(MaterialPoint<D>{3.0, 3.0, 3.0}, {}),
                       MaterialField<D>(MaterialPoint<D>{1.0, 1.0, 1.0}, {})};
  CHECK(pair.plus.at(Vec2<D>(0, 0)).mu == 3.0);
  CHECK(pair.minus.at(Vec2<D>(0, 0)).mu == 1.0);
}
