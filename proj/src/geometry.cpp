#include "dcpl/geometry.hpp"

#include <cmath>

#include "dcpl/errors.hpp"

namespace dcpl {

namespace {

// Radicands below this are rejected rather than clamped.
constexpr double kRadicandFloor = 1e-15;

}  // namespace

double theta(double x, double y) {
  const double b = std::exp(-0.5 * x);
  const double c = std::exp(-0.5 * y);
  // 1 - (b - c)^2 and (b + c)^2 - 1 in factored form, exactly symmetric
  const double d = b - c, s = b + c;
  const double num = (1.0 - d) * (1.0 + d);
  const double den = (s - 1.0) * (s + 1.0);
  if (!(num > 0.0) || !(den > 0.0)) throw InfeasibleTriangle("triangle inequality violated");
  const double r = num / den;
  if (!(r >= kRadicandFloor) || !(1.0 / r >= kRadicandFloor)) {
    throw InfeasibleTriangle("degenerate triangle");
  }
  return 2.0 * std::atan(std::sqrt(r));
}

ThetaPartials theta_partials(double x, double y) {
  theta(x, y);  // feasibility
  const double a = 1.0;
  const double b = std::exp(-0.5 * x);
  const double c = std::exp(-0.5 * y);
  const double area4 = std::sqrt((a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c));
  const double cot_b = (a * a + c * c - b * b) / area4;
  const double cot_c = (a * a + b * b - c * c) / area4;
  return {0.5 * cot_c, 0.5 * cot_b};
}

double lambda_of(Complex va, Complex vb, Complex vc) {
  const double ab = std::abs(va - vb);
  const double bc = std::abs(vb - vc);
  if (!(ab > 0.0) || !(bc > 0.0)) throw DegenerateEdge("zero-length edge");
  return 2.0 * std::log(bc / ab);
}

std::array<double, 3> rescaled_lengths(const std::array<double, 3>& lengths, const std::array<double, 3>& u) {
  return {lengths[0] * std::exp(0.5 * (u[0] + u[1])), lengths[1] * std::exp(0.5 * (u[1] + u[2])),
          lengths[2] * std::exp(0.5 * (u[2] + u[0]))};
}

bool triangle_inequalities_hold(double a, double b, double c) {
  return a < b + c && b < c + a && c < a + b;
}

double corner_angle(double opposite, double b, double c) {
  return theta(2.0 * std::log(opposite / b), 2.0 * std::log(opposite / c));
}

double star_angle_sum(Complex center, std::span<const Complex, 6> neighbors, double u_center,
                      std::span<const double, 6> u_neighbors) {
  double sum = 0.0;
  for (int j = 0; j < 6; ++j) {
    const int k = (j + 1) % 6;
    const double x = lambda_of(center, neighbors[j], neighbors[k]) + u_neighbors[k] - u_center;
    const double y = lambda_of(center, neighbors[k], neighbors[j]) + u_neighbors[j] - u_center;
    sum += theta(x, y);
  }
  return sum;
}

double angle_sum_at(const Subcomplex& sub, const ScaleField& u, int v0) {
  if (!sub.is_interior(v0)) throw Error("angle_sum_at requires an interior vertex");
  std::array<Complex, 6> pos;
  std::array<double, 6> un;
  const auto& nb = sub.neighbors(v0);
  for (int k = 0; k < 6; ++k) {
    pos[k] = sub.vertices()[nb[k]].position;
    un[k] = u[nb[k]];
  }
  return star_angle_sum(sub.vertices()[v0].position, pos, u[v0], un);
}

}  // namespace dcpl
