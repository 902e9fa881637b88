// Second-order jets (value, gradient, Hessian) in N variables.
//
// Forward-mode automatic differentiation to order two. All closed-form
// quantities whose first and second derivatives the ray tracer needs
// (material parameters, metric entries, dispersion kernels, characteristic
// speeds via the implicit function theorem) are evaluated with this type, so
// no derivative in the engine is hand-transcribed.
#pragma once

#include "raystone/common.hpp"

#include <cmath>

namespace raystone {

template <class S, int N>
struct Jet {
  using Grad = Eigen::Matrix<S, N, 1>;
  using Hess = Eigen::Matrix<S, N, N>;

  S v{};
  Grad g = Grad::Zero();
  Hess h = Hess::Zero();

  Jet() = default;
  // Implicit promotion of a constant: zero derivatives.
  Jet(S value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Jet constant(S value) { return Jet(value); }
  static Jet variable(S value, int index) {
    Jet j(value);
    j.g[index] = S(1);
    return j;
  }

  Jet operator-() const {
    Jet r;
    r.v = -v;
    r.g = -g;
    r.h = -h;
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v + b.v;
    r.g = a.g + b.g;
    r.h = a.h + b.h;
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v - b.v;
    r.g = a.g - b.g;
    r.h = a.h - b.h;
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v * b.v;
    r.g = a.v * b.g + b.v * a.g;
    r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }

  friend Jet operator+(const Jet& a, S c) { return a + Jet(c); }
  friend Jet operator+(S c, const Jet& a) { return Jet(c) + a; }
  friend Jet operator-(const Jet& a, S c) { return a - Jet(c); }
  friend Jet operator-(S c, const Jet& a) { return Jet(c) - a; }
  friend Jet operator*(const Jet& a, S c) {
    Jet r;
    r.v = a.v * c;
    r.g = a.g * c;
    r.h = a.h * c;
    return r;
  }
  friend Jet operator*(S c, const Jet& a) { return a * c; }
  friend Jet operator/(const Jet& a, S c) { return a * (S(1) / c); }
  friend Jet operator/(S c, const Jet& a) { return Jet(c) / a; }

  // Chain rule for a scalar function with known f(v), f'(v), f''(v).
  friend Jet compose(const Jet& a, S f, S fp, S fpp) {
    Jet r;
    r.v = f;
    r.g = fp * a.g;
    r.h = fp * a.h + fpp * (a.g * a.g.transpose());
    return r;
  }

  friend Jet inverse(const Jet& a) {
    const S iv = S(1) / a.v;
    return compose(a, iv, -iv * iv, S(2) * iv * iv * iv);
  }
  friend Jet sqrt(const Jet& a) {
    using std::sqrt;
    const S rv = sqrt(a.v);
    return compose(a, rv, S(0.5) / rv, S(-0.25) / (rv * a.v));
  }
  friend Jet exp(const Jet& a) {
    using std::exp;
    const S ev = exp(a.v);
    return compose(a, ev, ev, ev);
  }
  friend Jet sq(const Jet& a) { return a * a; }
};

}  // namespace raystone
