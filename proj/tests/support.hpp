#pragma once

#include <array>
#include <cmath>
#include <random>

#include "dcpl/lattice.hpp"
#include "dcpl/types.hpp"

namespace dcpl::testing {

// Angle opposite the unit side of the triangle (1, e^{-x/2}, e^{-y/2}).
inline double law_of_cosines_theta(double x, double y) {
  const double b = std::exp(-x / 2), c = std::exp(-y / 2);
  return std::acos((b * b + c * c - 1.0) / (2.0 * b * c));
}

// Random (x, y) whose triangle (1, b, c) has every triangle-inequality slack
// at least `slack`.
inline std::array<double, 2> random_feasible_xy(std::mt19937_64& rng, double slack = 1e-3) {
  std::uniform_real_distribution<double> side(0.05, 4.0);
  for (;;) {
    const double b = side(rng), c = side(rng);
    if (b + c - 1.0 >= slack && 1.0 + b - c >= slack && 1.0 + c - b >= slack) {
      return {-2.0 * std::log(b), -2.0 * std::log(c)};
    }
  }
}

// Lattice with every angle in [lo, pi/2 - margin].
inline LatticeSpec random_acute_spec(std::mt19937_64& rng, double epsilon, double margin = 5.0 * kPi / 180.0) {
  std::uniform_real_distribution<double> angle(margin, kPi / 2 - margin);
  for (;;) {
    const double a = angle(rng), b = angle(rng), g = kPi - a - b;
    if (g >= margin && g <= kPi / 2 - margin) return LatticeSpec::make(a, b, g, epsilon);
  }
}

inline std::array<Complex, 6> star_neighbors(const LatticeSpec& spec, Complex center) {
  std::array<Complex, 6> out;
  for (int k = 0; k < 6; ++k) {
    out[k] = center + spec.position(kNeighborOffsets[k][0], kNeighborOffsets[k][1]) - spec.origin_offset;
  }
  return out;
}

inline double deg(double d) { return d * kPi / 180.0; }

}  // namespace dcpl::testing
