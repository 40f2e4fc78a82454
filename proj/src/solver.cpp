#include "dcpl/solver.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "dcpl/geometry.hpp"

namespace dcpl {

namespace {

double edge_length(const Subcomplex& sub, int a, int b) {
  return std::abs(sub.vertices()[a].position - sub.vertices()[b].position);
}

// Visits each triangle of the star of interior vertex i with the
// (x, y) arguments of theta and the neighbor pair (vj, vj1).
template <class Fn>
void for_each_star_angle(const Subcomplex& sub, const ScaleField& u, int i, Fn&& fn) {
  const auto& nb = sub.neighbors(i);
  const Complex c = sub.vertices()[i].position;
  for (int j = 0; j < 6; ++j) {
    const int vj = nb[j], vk = nb[(j + 1) % 6];
    const Complex pj = sub.vertices()[vj].position, pk = sub.vertices()[vk].position;
    const double x = lambda_of(c, pj, pk) + u[vk] - u[i];
    const double y = lambda_of(c, pk, pj) + u[vj] - u[i];
    fn(x, y, vj, vk);
  }
}

std::vector<Eigen::Triplet<double>> hessian_triplets(const Subcomplex& sub, const ScaleField& u,
                                                     bool interior_columns) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(sub.interior_vertices().size() * 19);
  auto col = [&](int v) { return interior_columns ? sub.interior_index(v) : v; };
  try {
    for (int i : sub.interior_vertices()) {
      const int row = sub.interior_index(i);
      double diag = 0.0;
      for_each_star_angle(sub, u, i, [&](double x, double y, int vj, int vk) {
        const auto d = theta_partials(x, y);
        // x carries u(vk), y carries u(vj); both carry -u(i)
        if (col(vk) != kNone) trip.emplace_back(row, col(vk), -d.dx);
        if (col(vj) != kNone) trip.emplace_back(row, col(vj), -d.dy);
        diag += d.dx + d.dy;
      });
      trip.emplace_back(row, col(i), diag);
    }
  } catch (const InfeasibleTriangle& e) {
    throw InfeasibleScaleField(std::string("hessian: ") + e.what());
  }
  return trip;
}

double max_norm(const Eigen::VectorXd& g) { return g.size() == 0 ? 0.0 : g.lpNorm<Eigen::Infinity>(); }

}  // namespace

Eigen::VectorXd gradient(const Subcomplex& sub, const ScaleField& u) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(sub.interior_vertices().size()));
  try {
    for (int i : sub.interior_vertices()) {
      double sum = 0.0;
      for_each_star_angle(sub, u, i, [&](double x, double y, int, int) { sum += theta(x, y); });
      g[sub.interior_index(i)] = kTwoPi - sum;
    }
  } catch (const InfeasibleTriangle& e) {
    throw InfeasibleScaleField(std::string("gradient: ") + e.what());
  }
  return g;
}

Eigen::SparseMatrix<double> hessian(const Subcomplex& sub, const ScaleField& u) {
  const auto n = static_cast<Eigen::Index>(sub.interior_vertices().size());
  Eigen::SparseMatrix<double> h(n, n);
  auto trip = hessian_triplets(sub, u, true);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

Eigen::SparseMatrix<double> hessian_full(const Subcomplex& sub, const ScaleField& u) {
  Eigen::SparseMatrix<double> h(static_cast<Eigen::Index>(sub.interior_vertices().size()),
                                static_cast<Eigen::Index>(sub.num_vertices()));
  auto trip = hessian_triplets(sub, u, false);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

bool feasibility(const Subcomplex& sub, const ScaleField& u) {
  if (u.size() != static_cast<Eigen::Index>(sub.num_vertices())) return false;
  for (const auto& t : sub.triangles()) {
    const auto& v = t.v;
    auto l = rescaled_lengths({edge_length(sub, v[0], v[1]), edge_length(sub, v[1], v[2]),
                               edge_length(sub, v[2], v[0])},
                              {u[v[0]], u[v[1]], u[v[2]]});
    if (!std::isfinite(l[0]) || !std::isfinite(l[1]) || !std::isfinite(l[2])) return false;
    if (!triangle_inequalities_hold(l[0], l[1], l[2])) return false;
  }
  return true;
}

Eigen::VectorXd boundary_values_from(const Subcomplex& sub, const std::function<double(Complex)>& fn) {
  Eigen::VectorXd b(static_cast<Eigen::Index>(sub.boundary_vertices().size()));
  for (std::size_t k = 0; k < sub.boundary_vertices().size(); ++k) {
    b[static_cast<Eigen::Index>(k)] = fn(sub.vertices()[sub.boundary_vertices()[k]].position);
  }
  return b;
}

ScaleField harmonic_extension(const Subcomplex& sub, const Eigen::VectorXd& boundary_values) {
  const auto& bnd = sub.boundary_vertices();
  if (boundary_values.size() != static_cast<Eigen::Index>(bnd.size())) {
    throw Error("boundary value count does not match boundary vertices");
  }
  ScaleField u = ScaleField::Zero(static_cast<Eigen::Index>(sub.num_vertices()));
  for (std::size_t k = 0; k < bnd.size(); ++k) u[bnd[k]] = boundary_values[static_cast<Eigen::Index>(k)];

  const auto n = static_cast<Eigen::Index>(sub.interior_vertices().size());
  if (n == 0) return u;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i : sub.interior_vertices()) {
    const int row = sub.interior_index(i);
    trip.emplace_back(row, row, 6.0);
    for (int w : sub.neighbors(i)) {
      if (sub.is_interior(w)) {
        trip.emplace_back(row, sub.interior_index(w), -1.0);
      } else {
        rhs[row] += u[w];
      }
    }
  }
  Eigen::SparseMatrix<double> lap(n, n);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(lap);
  Eigen::VectorXd x = ldlt.solve(rhs);
  for (int i : sub.interior_vertices()) u[i] = x[sub.interior_index(i)];
  return u;
}

SolveResult solve_dirichlet(const Subcomplex& sub, const Eigen::VectorXd& boundary_values,
                            const SolverOptions& opts) {
  const auto& spec = sub.spec();
  if (!spec.strictly_acute()) {
    const char* name = spec.alpha >= kPi / 2 ? "alpha" : spec.beta >= kPi / 2 ? "beta" : "gamma";
    const double deg = (spec.alpha >= kPi / 2 ? spec.alpha : spec.beta >= kPi / 2 ? spec.beta : spec.gamma) *
                       180.0 / kPi;
    throw NotAcute(std::string("lattice angle ") + name + " = " + std::to_string(deg) +
                   " deg is not strictly acute");
  }
  if (!(opts.gradient_tolerance > 0.0)) throw Error("gradient tolerance must be positive");
  if (!(opts.line_search_shrink > 0.0 && opts.line_search_shrink < 1.0)) {
    throw Error("line search shrink factor must lie in (0, 1)");
  }

  ScaleField u;
  if (opts.initial_guess) {
    u = *opts.initial_guess;
    if (u.size() != static_cast<Eigen::Index>(sub.num_vertices())) throw Error("initial guess has wrong size");
    const auto& bnd = sub.boundary_vertices();
    for (std::size_t k = 0; k < bnd.size(); ++k) u[bnd[k]] = boundary_values[static_cast<Eigen::Index>(k)];
  } else {
    u = harmonic_extension(sub, boundary_values);
  }
  if (!feasibility(sub, u)) throw InfeasibleScaleField("initial guess violates triangle inequalities");

  const auto& interior = sub.interior_vertices();
  Eigen::VectorXd g = gradient(sub, u);
  double norm = max_norm(g);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool analyzed = false;
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    if (norm <= opts.gradient_tolerance) return {u, iter, norm, true};

    Eigen::SparseMatrix<double> h = hessian(sub, u);
    if (!analyzed) {
      ldlt.analyzePattern(h);
      analyzed = true;
    }
    ldlt.factorize(h);
    if (ldlt.info() != Eigen::Success) throw LineSearchFailure("Hessian factorization failed");
    const Eigen::VectorXd step = -ldlt.solve(g);

    bool accepted = false;
    double t = 1.0;
    for (int attempt = 0; attempt < 64 && !accepted; ++attempt, t *= opts.line_search_shrink) {
      ScaleField trial = u;
      for (int i : interior) trial[i] += t * step[sub.interior_index(i)];
      if (!feasibility(sub, trial)) continue;
      Eigen::VectorXd gt;
      try {
        gt = gradient(sub, trial);
      } catch (const InfeasibleScaleField&) {
        continue;
      }
      const double nt = max_norm(gt);
      if (nt < norm) {
        u = std::move(trial);
        g = std::move(gt);
        norm = nt;
        accepted = true;
      }
    }
    if (!accepted) {
      throw LineSearchFailure("no feasible step decreases the angle defect (|grad| = " +
                              std::to_string(norm) + ")");
    }
  }
  SolveResult last{u, opts.max_iterations, norm, norm <= opts.gradient_tolerance};
  if (last.converged) return last;
  throw MaxIterations("Newton iteration did not converge within " + std::to_string(opts.max_iterations) +
                          " iterations",
                      std::move(last));
}

}  // namespace dcpl
