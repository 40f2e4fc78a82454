#pragma once

#include <functional>
#include <optional>

#include <Eigen/Sparse>

#include "dcpl/errors.hpp"
#include "dcpl/lattice.hpp"
#include "dcpl/types.hpp"

namespace dcpl {

struct SolverOptions {
  double gradient_tolerance = 1e-10;  // max-norm of the angle defect, radians
  int max_iterations = 50;
  double line_search_shrink = 0.5;
  std::optional<ScaleField> initial_guess;
};

struct SolveResult {
  ScaleField u;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  bool converged = false;
};

// Raised when the iteration budget runs out; carries the last iterate.
class MaxIterations : public Error {
 public:
  MaxIterations(const std::string& what, SolveResult last) : Error(what), result(std::move(last)) {}
  SolveResult result;
};

// dE/du_i = 2 pi - (angle sum at v_i), one entry per interior vertex in the
// order of Subcomplex::interior_vertices(). Throws InfeasibleScaleField.
Eigen::VectorXd gradient(const Subcomplex& sub, const ScaleField& u);

// Jacobian of gradient() with respect to the interior values (cotangent-weighted
// Laplacian).
Eigen::SparseMatrix<double> hessian(const Subcomplex& sub, const ScaleField& u);

// Same, with columns for every vertex (boundary included). Rows sum to zero.
Eigen::SparseMatrix<double> hessian_full(const Subcomplex& sub, const ScaleField& u);

// Strict triangle inequalities for every rescaled triangle.
bool feasibility(const Subcomplex& sub, const ScaleField& u);

// Values in the order of Subcomplex::boundary_vertices().
Eigen::VectorXd boundary_values_from(const Subcomplex& sub, const std::function<double(Complex)>& fn);

// Harmonic extension under the combinatorial graph Laplacian.
ScaleField harmonic_extension(const Subcomplex& sub, const Eigen::VectorXd& boundary_values);

// Scale factors with the given boundary values and angle sums 2 pi at every
// interior vertex, by damped Newton iteration on gradient().
// Throws NotAcute, InfeasibleScaleField, LineSearchFailure, MaxIterations.
SolveResult solve_dirichlet(const Subcomplex& sub, const Eigen::VectorXd& boundary_values,
                            const SolverOptions& opts = {});

}  // namespace dcpl
