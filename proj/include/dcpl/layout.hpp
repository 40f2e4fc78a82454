#pragma once

#include <vector>

#include "dcpl/lattice.hpp"
#include "dcpl/types.hpp"

namespace dcpl {

// Wirtinger coefficients of the affine map z -> f(v0) + a (z - v0) + b conj(z - v0).
struct TriangleMap {
  Complex a;
  Complex b;
};

// Fixes the Euclidean motion of the image: f(origin) and the absolute
// direction of the image of the seed edge [origin, v0].
struct Normalization {
  Complex image_of_origin{0.0, 0.0};
  double seed_direction = 0.0;
};

struct PLMap {
  std::vector<Complex> image_positions;     // per vertex
  std::vector<TriangleMap> triangle_maps;   // per triangle
  std::vector<double> edge_rotations;       // per edge, unwrapped
  double holonomy_defect = 0.0;
};

// Lays out the rescaled triangles breadth-first from the seed edge. Vertex
// positions are frozen at first placement; closure mismatch is recorded in
// holonomy_defect. Throws InfeasibleScaleField, OrientationFlip.
PLMap layout(const Subcomplex& sub, const ScaleField& u, const Normalization& norm);

double edge_rotation(const PLMap& map, const Subcomplex& sub, int edge);

// Throws DegenerateTriangle.
TriangleMap triangle_derivatives(const PLMap& map, const Subcomplex& sub, int triangle);

// Piecewise-linear image of a point in the support. Throws OutsideSupport.
Complex evaluate(const PLMap& map, const Subcomplex& sub, Complex point);

double holonomy_diagnostic(const PLMap& map);

}  // namespace dcpl
