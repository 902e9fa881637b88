// Shared scalar/vector aliases for the surface-wave engine.
//
// The whole library is templated on the real scalar type and uses Eigen for
// all dense linear algebra; these aliases keep signatures readable.
#pragma once

#include <Eigen/Dense>

#include <complex>

namespace raystone {

template <class S>
using Vec2 = Eigen::Matrix<S, 2, 1>;

template <class S>
using Mat2 = Eigen::Matrix<S, 2, 2>;

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;

template <class S>
using CVec3 = Eigen::Matrix<std::complex<S>, 3, 1>;

template <class S>
using CMat2 = Eigen::Matrix<std::complex<S>, 2, 2>;

template <class S>
using CMat3 = Eigen::Matrix<std::complex<S>, 3, 3>;

template <class S>
inline constexpr S pi_v = S(3.14159265358979323846264338327950288L);

}  // namespace raystone
