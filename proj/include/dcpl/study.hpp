#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcpl/analytic.hpp"
#include "dcpl/lattice.hpp"
#include "dcpl/layout.hpp"
#include "dcpl/solver.hpp"
#include "dcpl/verify.hpp"

namespace dcpl {

// A parsed study configuration. The JSON schema is documented in README.md.
struct StudyConfig {
  int version = 1;
  std::string map_name = "identity";
  MapParams map_params;
  LatticeSpec lattice;  // epsilon is replaced per run
  Region region = Region::disc({0.0, 0.0}, 1.0);
  std::vector<double> epsilons;
  SolverOptions solver;
  std::optional<Normalization> explicit_normalization;
  Complex taylor_v0{1.0, 0.0};
  int samples = 200;
  std::uint64_t seed = 0;

  ConformalMap map() const { return make_map(map_name, map_params); }
};

// Throws ConfigError (malformed JSON, schema violations, unknown map).
StudyConfig parse_config(std::string_view json_text);
StudyConfig load_config(const std::string& path);

// Least-squares slope of log(error) against log(epsilon). Throws InsufficientData.
double fit_rate(std::span<const double> epsilons, std::span<const double> errors);

// Polynomial extrapolation in epsilon^2 to epsilon = 0 (Richardson for halvings).
double richardson_limit(std::span<const double> epsilons, std::span<const double> values);

// --- solve ----------------------------------------------------------------

struct SolveRun {
  Subcomplex sub;
  SolveResult result;
  PLMap plmap;
  Normalization normalization;
};

// Patch, Dirichlet solve with boundary values log|f'|, and layout at one scale.
// Solver exceptions propagate.
SolveRun run_solve(const StudyConfig& cfg, double epsilon);

// --- convergence ------------------------------------------------------------

struct ConvergenceRow {
  double epsilon = 0.0;
  bool ok = false;
  std::string error;
  double err_u = 0.0;
  double err_f = 0.0;
  double err_dz = 0.0;
  double err_dzbar = 0.0;
  double err_psi = 0.0;
  double err_c1 = 0.0;
  double holonomy = 0.0;
  int iterations = 0;
  std::size_t vertices = 0;
};

struct ConvergenceReport {
  std::string map_name;
  std::vector<ConvergenceRow> rows;
  // Fitted order per metric; nullopt when not applicable (fewer than three
  // successful rows, or errors at round-off level).
  std::map<std::string, std::optional<double>> orders;
};

inline const std::vector<std::string> kErrorMetrics = {"err_u", "err_f", "err_dz", "err_dzbar", "err_psi", "err_c1"};

ConvergenceRow measure_errors(const ConformalMap& map, const SolveRun& run);
double metric(const ConvergenceRow& row, const std::string& name);

// One solve + layout per epsilon; rows stay ordered by epsilon. `threads`
// bounds concurrent per-epsilon runs.
ConvergenceReport run_convergence(const StudyConfig& cfg, int threads = 1);

std::string convergence_csv(const ConvergenceReport& report);
std::string convergence_json(const ConvergenceReport& report);

// --- Taylor defect ----------------------------------------------------------

struct TaylorRow {
  double epsilon = 0.0;
  bool ok = false;
  std::string error;
  double defect = 0.0;
  double ratio = 0.0;  // defect / eps^4
  double predicted = 0.0;
};

struct TaylorReport {
  std::string map_name;
  Complex v0;
  double predicted = 0.0;
  std::vector<TaylorRow> rows;
  std::optional<double> extrapolated;
};

TaylorReport run_taylor(const StudyConfig& cfg);
std::string taylor_csv(const TaylorReport& report);
std::string taylor_json(const TaylorReport& report);

// --- verification -----------------------------------------------------------

struct VerifyReport {
  double epsilon = 0.0;
  BarrierConstants constants;
  BarrierReport barrier;
  InwardReport inward;
  bool solved = false;
  std::string solver_error;
  bool solution_in_trap = false;
  bool pass = false;
};

VerifyReport run_verify(const StudyConfig& cfg, std::uint64_t seed);
std::string verify_json(const VerifyReport& report);

// Fixed-precision formatting (17 significant digits) used for every export.
std::string format_number(double x);

}  // namespace dcpl
