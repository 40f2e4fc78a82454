#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace dcpl {

using Complex = std::complex<double>;

// Per-vertex logarithmic scale factors, indexed like Subcomplex::vertices().
using ScaleField = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace dcpl
