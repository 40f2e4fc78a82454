#pragma once

#include <cstdint>
#include <vector>

#include "dcpl/analytic.hpp"
#include "dcpl/lattice.hpp"
#include "dcpl/types.hpp"

namespace dcpl {

struct BarrierConstants {
  double m_plus = 1.0;
  double m_minus = 1.0;
  double c_plus = 1.0;
  double c_minus = 1.0;
};

// Componentwise bounds w- <= u <= w+ with w± = log|f'| on the boundary.
struct TrapSet {
  ScaleField lower;
  ScaleField upper;
};

// C± = max(1, 2 sup|C_v| / (4 sin a sin b sin c)) over interior vertices,
// M± = 1.5 C± max|v|^2. Throws OutsideDomain.
BarrierConstants barrier_constants(const ConformalMap& map, const Subcomplex& sub);

// w± = log|f'| ± eps^2 (M± - C±|v|^2) at interior vertices, log|f'| on the boundary.
TrapSet barrier_fields(const ConformalMap& map, const Subcomplex& sub, const BarrierConstants& k, double epsilon);

struct VertexMargin {
  int vertex = kNone;
  double upper_margin = 0.0;  // 2 pi - angle sum with w+; must be > 0
  double lower_margin = 0.0;  // angle sum with w- - 2 pi; must be > 0
  bool feasible = true;
};

struct BarrierReport {
  std::vector<VertexMargin> margins;  // per interior vertex
  int violations = 0;
  // max (w+ - w-) exceeds the lattice scale, so the monotonicity argument
  // does not apply
  bool width_exceeds_epsilon = false;
  double max_width = 0.0;
  bool pass = false;
};

// Angle sums with u = w+ must fall below 2 pi, with u = w- above. Infeasible
// stars are reported as violations.
BarrierReport barrier_inequality_check(const Subcomplex& sub, const TrapSet& trap);

struct InwardReport {
  int samples = 0;
  int sign_failures = 0;
  int infeasible = 0;
  bool pass = false;
};

// Random interior vertex i and random u in the trap set with u_i pinned to
// w+_i (resp. w-_i): dE/du_i must be > 0 (resp. < 0).
InwardReport inward_gradient_check(const Subcomplex& sub, const TrapSet& trap, int sample_count,
                                   std::uint64_t seed = 0);

bool in_trap(const TrapSet& trap, const ScaleField& u);

}  // namespace dcpl
