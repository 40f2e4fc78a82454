#pragma once

#include <array>
#include <span>

#include "dcpl/lattice.hpp"
#include "dcpl/types.hpp"

namespace dcpl {

// Interior angle opposite side a of a triangle with b/a = exp(-x/2) and
// c/a = exp(-y/2), evaluated with the half-angle (arctan) form. Symmetric in
// (x, y). Throws InfeasibleTriangle when the sides violate the strict triangle
// inequalities or the triangle is numerically degenerate.
double theta(double x, double y);

struct ThetaPartials {
  double dx = 0.0;
  double dy = 0.0;
};

// Partial derivatives of theta. With b = exp(-x/2), c = exp(-y/2):
//   d theta / dx = cot(C) / 2,   d theta / dy = cot(B) / 2,
// where B, C are the angles opposite b and c.
ThetaPartials theta_partials(double x, double y);

// 2 log(|vb - vc| / |va - vb|). Throws DegenerateEdge.
double lambda_of(Complex va, Complex vb, Complex vc);

// Edge lengths scaled by exp((u(v) + u(w)) / 2).
// lengths = {|v0 v1|, |v1 v2|, |v2 v0|}, u = {u(v0), u(v1), u(v2)}.
std::array<double, 3> rescaled_lengths(const std::array<double, 3>& lengths, const std::array<double, 3>& u);

bool triangle_inequalities_hold(double a, double b, double c);

// Angle opposite side `opposite` in a triangle with the other sides b, c.
double corner_angle(double opposite, double b, double c);

// Sum of the six rescaled angles at `center`, whose neighbors are listed in
// counterclockwise order. Only the differences u(neighbor) - u(center) enter.
double star_angle_sum(Complex center, std::span<const Complex, 6> neighbors, double u_center,
                      std::span<const double, 6> u_neighbors);

// Rescaled angle sum at interior vertex v0 of sub.
double angle_sum_at(const Subcomplex& sub, const ScaleField& u, int v0);

}  // namespace dcpl
