#include <doctest.h>

#include <cmath>

#include "dcpl/analytic.hpp"
#include "dcpl/solver.hpp"
#include "dcpl/verify.hpp"
#include "support.hpp"

using namespace dcpl;
using dcpl::testing::deg;

TEST_CASE("barrier constants take the floor for maps without defect") {
  const auto sub = build_lattice_patch(LatticeSpec::equilateral(0.1), Region::disc({0.0, 0.0}, 0.8));
  for (const auto& f : {maps::affine({1.0, 2.0}, 3.0), maps::exponential(), maps::identity()}) {
    const auto k = barrier_constants(f, sub);
    CHECK(k.c_plus == 1.0);
    CHECK(k.c_minus == 1.0);
    CHECK(k.m_plus > 0.0);
    CHECK(k.m_minus > 0.0);
  }
}

TEST_CASE("barrier constants for the square map") {
  const auto spec = LatticeSpec::make(deg(60), deg(60), deg(60), 0.05, {1.0, 0.0});
  const auto sub = build_lattice_patch(spec, Region::disc({1.0, 0.0}, 0.3));
  double sup = 0.0, min_r = 1e300;
  for (int v : sub.interior_vertices()) {
    const Complex p = sub.vertices()[v].position;
    sup = std::max(sup, std::abs(predicted_constant(maps::square(), p, spec)));
    min_r = std::min(min_r, std::abs(p));
  }
  const double s3 = std::pow(std::sqrt(3.0) / 2, 3);
  // |C_v| = (9 sqrt 3 / 64) / |v|^4 on the equilateral lattice
  CHECK(std::abs(sup - (9 * std::sqrt(3.0) / 64) / std::pow(min_r, 4)) <= 1e-12);
  const auto k = barrier_constants(maps::square(), sub);
  CHECK(k.c_plus >= 2 * (9 * std::sqrt(3.0) / 64) / (4 * s3) / std::pow(min_r, 4) * (1 - 1e-12));
  CHECK(4 * s3 * k.c_plus >= 2 * sup * (1 - 1e-12));
  double max_r2 = 0.0;
  for (const auto& v : sub.vertices()) max_r2 = std::max(max_r2, std::norm(v.position));
  CHECK(std::abs(k.m_plus - 1.5 * k.c_plus * max_r2) <= 1e-12 * k.m_plus);
}

TEST_CASE("barrier fields") {
  const auto f = maps::cubic_perturbation({0.1, 0.0});
  const auto sub = build_lattice_patch(LatticeSpec::equilateral(0.1), Region::disc({0.0, 0.0}, 0.8));
  const BarrierConstants k{1.0, 1.0, 0.5, 0.5};
  const auto trap = barrier_fields(f, sub, k, 0.1);
  for (int v : sub.boundary_vertices()) {
    const double base = f.log_abs_fprime(sub.vertices()[v].position);
    CHECK(trap.upper[v] == base);
    CHECK(trap.lower[v] == base);
  }
  for (int v : sub.interior_vertices()) {
    const Complex p = sub.vertices()[v].position;
    const double base = f.log_abs_fprime(p);
    const double q = 0.01 * (1.0 - 0.5 * std::norm(p));
    CHECK(std::abs(trap.upper[v] - base - q) <= 1e-15);
    CHECK(std::abs(base - trap.lower[v] - q) <= 1e-15);
    CHECK(trap.upper[v] > base);
    CHECK(trap.lower[v] < base);
  }

  // Interior vertex at |v| = 1, eps = 0.1, M+ = 1, C+ = 0.5.
  const auto shifted = build_lattice_patch(LatticeSpec::make(deg(60), deg(60), deg(60), 0.1, {1.0, 0.0}),
                                           Region::disc({1.0, 0.0}, 0.3));
  const int o = shifted.origin_vertex();
  REQUIRE(shifted.is_interior(o));
  const auto t1 = barrier_fields(maps::identity(), shifted, k, 0.1);
  CHECK(std::abs(t1.upper[o] - 0.005) < 1e-15);
  CHECK(std::abs(t1.lower[o] + 0.005) < 1e-15);
}

TEST_CASE("trap ordering and width") {
  const auto f = maps::square();
  const auto sub = build_lattice_patch(LatticeSpec::make(deg(80), deg(60), deg(40), 0.05, {1.0, 0.3}), Region::disc({1.0, 0.3}, 0.4));
  const auto k = barrier_constants(f, sub);
  for (double eps : {0.05, 0.02}) {
    const auto trap = barrier_fields(f, sub, k, eps);
    CHECK((trap.lower.array() <= trap.upper.array()).all());
    for (std::size_t v = 0; v < sub.num_vertices(); ++v) {
      const auto i = static_cast<Eigen::Index>(v);
      const double base = f.log_abs_fprime(sub.vertices()[v].position);
      CHECK(trap.upper[i] - base <= eps * eps * k.m_plus);
      CHECK(base - trap.lower[i] <= eps * eps * k.m_minus);
    }
  }
}

TEST_CASE("barrier inequalities for a similarity") {
  const auto f = maps::affine({1.0, 2.0}, 3.0);
  const auto spec = LatticeSpec::equilateral(0.05);
  const auto sub = build_lattice_patch(spec, Region::disc({0.0, 0.0}, 0.5));
  const auto k = barrier_constants(f, sub);
  const auto trap = barrier_fields(f, sub, k, 0.05);
  const auto rep = barrier_inequality_check(sub, trap);
  CHECK(rep.pass);
  CHECK(rep.violations == 0);
  CHECK_FALSE(rep.width_exceeds_epsilon);
  // Deep-interior margins: 4 sin a sin b sin c C eps^4.
  const double predicted = 4 * std::pow(std::sqrt(3.0) / 2, 3) * k.c_plus * std::pow(0.05, 4);
  for (const auto& m : rep.margins) {
    const auto& nb = sub.neighbors(m.vertex);
    bool deep = true;
    for (int w : nb) deep = deep && w != kNone && sub.is_interior(w);
    if (!deep) continue;
    CHECK(m.upper_margin == doctest::Approx(predicted).epsilon(1e-2));
    CHECK(m.lower_margin == doctest::Approx(predicted).epsilon(1e-2));
  }
  const auto inward = inward_gradient_check(sub, trap, 200, 5);
  CHECK(inward.pass);
  CHECK(inward.sign_failures == 0);
  CHECK(inward.samples == 200);
}

TEST_CASE("trap contains the discrete solution") {
  for (const auto& f : {maps::cubic_perturbation({0.1, 0.0}), maps::exponential()}) {
    const auto sub = build_lattice_patch(LatticeSpec::equilateral(0.05), Region::disc({0.0, 0.0}, 0.8));
    const auto trap = barrier_fields(f, sub, barrier_constants(f, sub), 0.05);
    const auto rep = barrier_inequality_check(sub, trap);
    CHECK(rep.pass);
    const auto inward = inward_gradient_check(sub, trap, 200, 0);
    CHECK(inward.pass);
    const auto r = solve_dirichlet(sub, boundary_values_from(sub, [&](Complex z) { return f.log_abs_fprime(z); }));
    CHECK(in_trap(trap, r.u));
  }
}

TEST_CASE("coarse lattices report violations instead of failing") {
  const auto f = maps::square();
  const auto sub = build_lattice_patch(LatticeSpec::make(deg(60), deg(60), deg(60), 0.5, {1.0, 0.0}),
                                       Region::disc({1.0, 0.0}, 0.95));
  const auto trap = barrier_fields(f, sub, barrier_constants(f, sub), 0.5);
  BarrierReport rep;
  CHECK_NOTHROW(rep = barrier_inequality_check(sub, trap));
  CHECK_FALSE(rep.pass);
  CHECK(rep.violations > 0);
  CHECK(rep.width_exceeds_epsilon);
  InwardReport inward;
  CHECK_NOTHROW(inward = inward_gradient_check(sub, trap, 50, 1));
  CHECK_FALSE(inward.pass);
}

TEST_CASE("inward check is reproducible") {
  const auto f = maps::cubic_perturbation({0.1, 0.0});
  const auto sub = build_lattice_patch(LatticeSpec::make(deg(80), deg(60), deg(40), 0.1), Region::disc({0.0, 0.0}, 0.6));
  const auto trap = barrier_fields(f, sub, barrier_constants(f, sub), 0.1);
  const auto a = inward_gradient_check(sub, trap, 100, 42);
  const auto b = inward_gradient_check(sub, trap, 100, 42);
  CHECK(a.samples == b.samples);
  CHECK(a.sign_failures == b.sign_failures);
  CHECK(a.infeasible == b.infeasible);
}
