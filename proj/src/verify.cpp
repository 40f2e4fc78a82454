#include "dcpl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dcpl/errors.hpp"
#include "dcpl/geometry.hpp"

namespace dcpl {

BarrierConstants barrier_constants(const ConformalMap& map, const Subcomplex& sub) {
  const auto& spec = sub.spec();
  double sup_c = 0.0;
  for (int v : sub.interior_vertices()) {
    sup_c = std::max(sup_c, std::abs(predicted_constant(map, sub.vertices()[v].position, spec)));
  }
  double max_r2 = 0.0;
  for (const auto& v : sub.vertices()) max_r2 = std::max(max_r2, std::norm(v.position));

  const double sines = std::sin(spec.alpha) * std::sin(spec.beta) * std::sin(spec.gamma);
  const double c = std::max(1.0, 2.0 * sup_c / (4.0 * sines));
  const double m = 1.5 * c * max_r2;
  return {m, m, c, c};
}

TrapSet barrier_fields(const ConformalMap& map, const Subcomplex& sub, const BarrierConstants& k, double epsilon) {
  const auto n = static_cast<Eigen::Index>(sub.num_vertices());
  TrapSet trap{ScaleField(n), ScaleField(n)};
  const double e2 = epsilon * epsilon;
  for (Eigen::Index v = 0; v < n; ++v) {
    const Complex p = sub.vertices()[v].position;
    const double base = map.log_abs_fprime(p);
    if (sub.is_interior(static_cast<int>(v))) {
      trap.upper[v] = base + e2 * (k.m_plus - k.c_plus * std::norm(p));
      trap.lower[v] = base - e2 * (k.m_minus - k.c_minus * std::norm(p));
    } else {
      trap.upper[v] = trap.lower[v] = base;
    }
  }
  return trap;
}

BarrierReport barrier_inequality_check(const Subcomplex& sub, const TrapSet& trap) {
  BarrierReport r;
  r.max_width = (trap.upper - trap.lower).maxCoeff();
  r.width_exceeds_epsilon = r.max_width > sub.spec().epsilon;
  for (int v : sub.interior_vertices()) {
    VertexMargin m;
    m.vertex = v;
    try {
      m.upper_margin = kTwoPi - angle_sum_at(sub, trap.upper, v);
      m.lower_margin = angle_sum_at(sub, trap.lower, v) - kTwoPi;
    } catch (const InfeasibleTriangle&) {
      m.feasible = false;
    }
    if (!m.feasible || !(m.upper_margin > 0.0) || !(m.lower_margin > 0.0)) ++r.violations;
    r.margins.push_back(m);
  }
  r.pass = r.violations == 0;
  return r;
}

InwardReport inward_gradient_check(const Subcomplex& sub, const TrapSet& trap, int sample_count,
                                   std::uint64_t seed) {
  InwardReport r;
  const auto& interior = sub.interior_vertices();
  if (interior.empty() || sample_count <= 0) {
    r.pass = interior.empty();
    return r;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, interior.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScaleField u = trap.lower;
  for (int s = 0; s < sample_count; ++s) {
    const int i = interior[pick(rng)];
    // Only the star of i enters dE/du_i.
    for (int w : sub.neighbors(i)) u[w] = trap.lower[w] + unit(rng) * (trap.upper[w] - trap.lower[w]);
    ++r.samples;
    try {
      u[i] = trap.upper[i];
      if (!(kTwoPi - angle_sum_at(sub, u, i) > 0.0)) ++r.sign_failures;
      u[i] = trap.lower[i];
      if (!(kTwoPi - angle_sum_at(sub, u, i) < 0.0)) ++r.sign_failures;
    } catch (const InfeasibleTriangle&) {
      ++r.infeasible;
    }
  }
  r.pass = r.sign_failures == 0 && r.infeasible == 0;
  return r;
}

bool in_trap(const TrapSet& trap, const ScaleField& u) {
  return (u.array() >= trap.lower.array()).all() && (u.array() <= trap.upper.array()).all();
}

}  // namespace dcpl
