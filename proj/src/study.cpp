#include "dcpl/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dcpl/errors.hpp"
#include "dcpl/geometry.hpp"

namespace dcpl {

using json = nlohmann::ordered_json;

namespace {

// Errors below this are round-off; no order is fitted for them.
constexpr double kNegligibleError = 1e-10;

Complex parse_complex(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(what + ": expected a number or [re, im]");
}

double parse_angle(const json& j, bool degrees) {
  if (j.is_number()) {
    const double v = j.get<double>();
    return degrees ? v * kPi / 180.0 : v;
  }
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    bool deg = false;
    for (const char* suffix : {"deg", "°"}) {
      const std::string suf(suffix);
      if (s.size() > suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0) {
        s.resize(s.size() - suf.size());
        deg = true;
        break;
      }
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("lattice.angles: cannot parse '" + j.get<std::string>() + "'");
    }
    if (used != s.size()) throw ConfigError("lattice.angles: cannot parse '" + j.get<std::string>() + "'");
    return deg || degrees ? v * kPi / 180.0 : v;
  }
  throw ConfigError("lattice.angles: expected numbers or strings");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double max_or_zero(double a, double b) { return std::max(a, b); }

double wrap_angle(double x) { return std::remainder(x, kTwoPi); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Config

StudyConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  StudyConfig cfg;
  cfg.version = get_or<int>(j, "version", 1);
  if (cfg.version != 1) throw ConfigError("unsupported config version " + std::to_string(cfg.version));

  if (!j.contains("map")) throw ConfigError("missing 'map'");
  const json& jm = j["map"];
  if (jm.is_string()) {
    cfg.map_name = jm.get<std::string>();
  } else if (jm.is_object()) {
    cfg.map_name = get_or<std::string>(jm, "name", "");
    if (jm.contains("params")) {
      if (!jm["params"].is_object()) throw ConfigError("map.params must be an object");
      for (const auto& [key, value] : jm["params"].items()) {
        cfg.map_params[key] = parse_complex(value, "map.params." + key);
      }
    }
  } else {
    throw ConfigError("'map' must be a name or an object");
  }
  try {
    cfg.map();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("lattice")) {
    const json& jl = j["lattice"];
    const bool degrees = get_or<std::string>(jl, "units", "radians") == "degrees";
    if (jl.contains("angles")) {
      const json& ja = jl["angles"];
      if (!ja.is_array() || ja.size() != 3) throw ConfigError("lattice.angles must list three angles");
      cfg.lattice.alpha = parse_angle(ja[0], degrees);
      cfg.lattice.beta = parse_angle(ja[1], degrees);
      cfg.lattice.gamma = parse_angle(ja[2], degrees);
    }
    if (jl.contains("offset")) cfg.lattice.origin_offset = parse_complex(jl["offset"], "lattice.offset");
  }
  try {
    cfg.lattice.validate();
  } catch (const InvalidLattice& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("region")) {
    const json& jr = j["region"];
    const std::string type = get_or<std::string>(jr, "type", "disc");
    if (type == "disc") {
      const Complex c = jr.contains("center") ? parse_complex(jr["center"], "region.center") : Complex{};
      const double r = get_or<double>(jr, "radius", 0.0);
      if (!(r > 0.0)) throw ConfigError("region.radius must be positive");
      cfg.region = Region::disc(c, r);
    } else if (type == "polygon") {
      if (!jr.contains("vertices") || !jr["vertices"].is_array() || jr["vertices"].size() < 3) {
        throw ConfigError("region.vertices must list at least three points");
      }
      std::vector<Complex> pts;
      for (const auto& p : jr["vertices"]) pts.push_back(parse_complex(p, "region.vertices"));
      cfg.region = Region::polygon(std::move(pts));
    } else {
      throw ConfigError("unknown region type '" + type + "'");
    }
  }

  if (j.contains("epsilons")) {
    if (!j["epsilons"].is_array()) throw ConfigError("'epsilons' must be an array");
    for (const auto& e : j["epsilons"]) {
      if (!e.is_number()) throw ConfigError("'epsilons' entries must be numbers");
      cfg.epsilons.push_back(e.get<double>());
    }
  } else if (j.contains("epsilon")) {
    cfg.epsilons.push_back(get_or<double>(j, "epsilon", 0.0));
  }
  if (cfg.epsilons.empty()) throw ConfigError("epsilon list is empty");
  for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
    if (!(cfg.epsilons[k] > 0.0) || !std::isfinite(cfg.epsilons[k])) throw ConfigError("epsilons must be positive");
    if (k > 0 && !(cfg.epsilons[k] < cfg.epsilons[k - 1])) {
      throw ConfigError("epsilons must be strictly decreasing");
    }
  }

  if (j.contains("solver")) {
    const json& js = j["solver"];
    cfg.solver.gradient_tolerance = get_or<double>(js, "gradient_tolerance", cfg.solver.gradient_tolerance);
    cfg.solver.max_iterations = get_or<int>(js, "max_iterations", cfg.solver.max_iterations);
    cfg.solver.line_search_shrink = get_or<double>(js, "line_search_shrink", cfg.solver.line_search_shrink);
    if (!(cfg.solver.gradient_tolerance > 0.0)) throw ConfigError("solver.gradient_tolerance must be positive");
    if (!(cfg.solver.line_search_shrink > 0.0 && cfg.solver.line_search_shrink < 1.0)) {
      throw ConfigError("solver.line_search_shrink must lie in (0, 1)");
    }
    if (cfg.solver.max_iterations < 1) throw ConfigError("solver.max_iterations must be >= 1");
  }

  if (j.contains("normalization")) {
    const json& jn = j["normalization"];
    const std::string source = get_or<std::string>(jn, "source", "analytic");
    if (source == "explicit") {
      Normalization n;
      if (jn.contains("image_of_origin")) n.image_of_origin = parse_complex(jn["image_of_origin"], "normalization");
      n.seed_direction = get_or<double>(jn, "seed_direction", 0.0);
      cfg.explicit_normalization = n;
    } else if (source != "analytic") {
      throw ConfigError("normalization.source must be 'analytic' or 'explicit'");
    }
  }

  if (j.contains("taylor") && j["taylor"].contains("v0")) {
    cfg.taylor_v0 = parse_complex(j["taylor"]["v0"], "taylor.v0");
  }
  if (j.contains("verify")) cfg.samples = get_or<int>(j["verify"], "samples", cfg.samples);
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
  return cfg;
}

StudyConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

// ---------------------------------------------------------------------------
// Fitting

double fit_rate(std::span<const double> epsilons, std::span<const double> errors) {
  if (epsilons.size() != errors.size()) throw InsufficientData("epsilon and error lists differ in length");
  if (epsilons.size() < 2) throw InsufficientData("at least two points are needed to fit a rate");
  const double n = static_cast<double>(epsilons.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || !(errors[k] > 0.0)) throw InsufficientData("rates need positive data");
    const double x = std::log(epsilons[k]), y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw InsufficientData("epsilons must not all coincide");
  return (n * sxy - sx * sy) / den;
}

double richardson_limit(std::span<const double> epsilons, std::span<const double> values) {
  if (epsilons.size() != values.size() || epsilons.empty()) {
    throw InsufficientData("extrapolation needs matching, nonempty lists");
  }
  // Neville's scheme in h = eps^2, evaluated at h = 0.
  std::vector<double> h(epsilons.size()), p(values.begin(), values.end());
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = epsilons[k] * epsilons[k];
  for (std::size_t level = 1; level < p.size(); ++level) {
    for (std::size_t k = 0; k + level < p.size(); ++k) {
      const double hi = h[k], hj = h[k + level];
      p[k] = (hi * p[k + 1] - hj * p[k]) / (hi - hj);
    }
  }
  return p[0];
}

// ---------------------------------------------------------------------------
// Solve + measure

SolveRun run_solve(const StudyConfig& cfg, double epsilon) {
  const ConformalMap map = cfg.map();
  Subcomplex sub = build_lattice_patch(cfg.lattice.with_epsilon(epsilon), cfg.region);
  const Eigen::VectorXd bnd = boundary_values_from(sub, [&](Complex z) { return map.log_abs_fprime(z); });
  SolveResult result = solve_dirichlet(sub, bnd, cfg.solver);
  Normalization norm = cfg.explicit_normalization ? *cfg.explicit_normalization : normalization_from_map(map, sub);
  PLMap plmap = layout(sub, result.u, norm);
  return {std::move(sub), std::move(result), std::move(plmap), norm};
}

ConvergenceRow measure_errors(const ConformalMap& map, const SolveRun& run) {
  const Subcomplex& sub = run.sub;
  const auto& V = sub.vertices();
  const auto& F = run.plmap.image_positions;
  const ScaleField& u = run.result.u;

  ConvergenceRow row;
  row.epsilon = sub.spec().epsilon;
  row.ok = true;
  row.iterations = run.result.iterations;
  row.holonomy = run.plmap.holonomy_defect;
  row.vertices = sub.num_vertices();

  for (std::size_t v = 0; v < V.size(); ++v) {
    row.err_u = max_or_zero(row.err_u, std::abs(u[static_cast<Eigen::Index>(v)] - map.log_abs_fprime(V[v].position)));
    row.err_f = max_or_zero(row.err_f, std::abs(F[v] - map.eval_f(V[v].position)));
  }
  const auto& edges = sub.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int a = edges[e][0], b = edges[e][1];
    const Complex mid = 0.5 * (V[a].position + V[b].position);
    row.err_f = max_or_zero(row.err_f, std::abs(0.5 * (F[a] + F[b]) - map.eval_f(mid)));
    row.err_psi = max_or_zero(row.err_psi, std::abs(wrap_angle(run.plmap.edge_rotations[e] - map.arg_fprime(mid))));
    const Complex d = V[a].position - V[b].position;
    const double len = std::abs(d);
    const double directional = (map.eval_g_derivs(mid).g1 * (d / len)).real();
    row.err_c1 = max_or_zero(row.err_c1, std::abs((u[a] - u[b]) / len - directional));
  }
  const auto& tris = sub.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& v = tris[t].v;
    const Complex centroid = (V[v[0]].position + V[v[1]].position + V[v[2]].position) / 3.0;
    const TriangleMap& tm = run.plmap.triangle_maps[t];
    row.err_dz = max_or_zero(row.err_dz, std::abs(tm.a - map.eval_fprime(centroid)));
    row.err_dzbar = max_or_zero(row.err_dzbar, std::abs(tm.b));
  }
  return row;
}

double metric(const ConvergenceRow& row, const std::string& name) {
  if (name == "err_u") return row.err_u;
  if (name == "err_f") return row.err_f;
  if (name == "err_dz") return row.err_dz;
  if (name == "err_dzbar") return row.err_dzbar;
  if (name == "err_psi") return row.err_psi;
  if (name == "err_c1") return row.err_c1;
  if (name == "holonomy") return row.holonomy;
  throw Error("unknown metric '" + name + "'");
}

ConvergenceReport run_convergence(const StudyConfig& cfg, int threads) {
  const ConformalMap map = cfg.map();
  ConvergenceReport report;
  report.map_name = map.name;
  report.rows.resize(cfg.epsilons.size());

  auto work = [&](std::size_t k) {
    ConvergenceRow& row = report.rows[k];
    try {
      row = measure_errors(map, run_solve(cfg, cfg.epsilons[k]));
    } catch (const MaxIterations& e) {
      row = ConvergenceRow{};
      row.error = e.what();
      row.iterations = e.result.iterations;
    } catch (const Error& e) {
      row = ConvergenceRow{};
      row.error = e.what();
    }
    row.epsilon = cfg.epsilons[k];
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                      cfg.epsilons.size());
  if (workers <= 1) {
    for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cfg.epsilons.size(); k = next++) work(k);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& name : kErrorMetrics) {
    std::vector<double> eps, err;
    double largest = 0.0;
    for (const auto& row : report.rows) {
      if (!row.ok) continue;
      eps.push_back(row.epsilon);
      err.push_back(metric(row, name));
      largest = std::max(largest, err.back());
    }
    std::optional<double> order;
    if (eps.size() >= 3 && largest > kNegligibleError &&
        std::all_of(err.begin(), err.end(), [](double x) { return x > 0.0; })) {
      order = fit_rate(eps, err);
    }
    report.orders[name] = order;
  }
  return report;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "epsilon,err_u,err_f,err_dz,err_dzbar,err_psi,err_c1,holonomy,iterations\n";
  for (const auto& r : report.rows) {
    const double nan = std::nan("");
    auto v = [&](double x) { return format_number(r.ok ? x : nan); };
    out += format_number(r.epsilon) + "," + v(r.err_u) + "," + v(r.err_f) + "," + v(r.err_dz) + "," +
           v(r.err_dzbar) + "," + v(r.err_psi) + "," + v(r.err_c1) + "," + v(r.holonomy) + "," +
           (r.ok ? std::to_string(r.iterations) : std::string("-1")) + "\n";
  }
  return out;
}

std::string convergence_json(const ConvergenceReport& report) {
  json j;
  j["study"] = "convergence";
  j["map"] = report.map_name;
  j["notes"] = "err_c1 compares (u(v)-u(w))/|v-w| with the directional derivative of log|f'| at the edge midpoint";
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["epsilon"] = r.epsilon;
    row["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
      for (const auto& name : kErrorMetrics) row[name] = metric(r, name);
      row["holonomy"] = r.holonomy;
      row["iterations"] = r.iterations;
      row["vertices"] = r.vertices;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  json orders;
  for (const auto& name : kErrorMetrics) {
    const auto& o = report.orders.at(name);
    orders[name] = o ? json(*o) : json(nullptr);
  }
  j["orders"] = orders;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Taylor

TaylorReport run_taylor(const StudyConfig& cfg) {
  const ConformalMap map = cfg.map();
  TaylorReport report;
  report.map_name = map.name;
  report.v0 = cfg.taylor_v0;
  try {
    report.predicted = predicted_constant(map, cfg.taylor_v0, cfg.lattice);
  } catch (const OutsideDomain& e) {
    throw ConfigError(std::string("taylor.v0: ") + e.what());
  }
  std::vector<double> eps, ratios;
  for (double e : cfg.epsilons) {
    TaylorRow row;
    row.epsilon = e;
    row.predicted = report.predicted;
    try {
      row.defect = angle_sum_defect(map, cfg.taylor_v0, cfg.lattice, e);
      row.ratio = row.defect / std::pow(e, 4);
      row.ok = true;
      eps.push_back(e);
      ratios.push_back(row.ratio);
    } catch (const Error& ex) {
      row.error = ex.what();
    }
    report.rows.push_back(row);
  }
  if (!eps.empty()) report.extrapolated = richardson_limit(eps, ratios);
  return report;
}

std::string taylor_csv(const TaylorReport& report) {
  std::string out = "epsilon,defect,defect_over_eps4,predicted_constant\n";
  for (const auto& r : report.rows) {
    const double nan = std::nan("");
    out += format_number(r.epsilon) + "," + format_number(r.ok ? r.defect : nan) + "," +
           format_number(r.ok ? r.ratio : nan) + "," + format_number(r.predicted) + "\n";
  }
  return out;
}

std::string taylor_json(const TaylorReport& report) {
  json j;
  j["study"] = "taylor";
  j["map"] = report.map_name;
  j["v0"] = complex_json(report.v0);
  j["predicted_constant"] = report.predicted;
  j["extrapolated_limit"] = report.extrapolated ? json(*report.extrapolated) : json(nullptr);
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["epsilon"] = r.epsilon;
    row["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
      row["defect"] = r.defect;
      row["defect_over_eps4"] = r.ratio;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Verification

VerifyReport run_verify(const StudyConfig& cfg, std::uint64_t seed) {
  const ConformalMap map = cfg.map();
  VerifyReport r;
  r.epsilon = cfg.epsilons.front();
  const Subcomplex sub = build_lattice_patch(cfg.lattice.with_epsilon(r.epsilon), cfg.region);
  r.constants = barrier_constants(map, sub);
  const TrapSet trap = barrier_fields(map, sub, r.constants, r.epsilon);
  r.barrier = barrier_inequality_check(sub, trap);
  r.inward = inward_gradient_check(sub, trap, cfg.samples, seed);
  try {
    const Eigen::VectorXd bnd = boundary_values_from(sub, [&](Complex z) { return map.log_abs_fprime(z); });
    const SolveResult res = solve_dirichlet(sub, bnd, cfg.solver);
    r.solved = res.converged;
    r.solution_in_trap = in_trap(trap, res.u);
  } catch (const Error& e) {
    r.solver_error = e.what();
  }
  r.pass = r.barrier.pass && r.inward.pass && r.solved && r.solution_in_trap;
  return r;
}

std::string verify_json(const VerifyReport& r) {
  json j;
  j["study"] = "verify";
  j["epsilon"] = r.epsilon;
  j["pass"] = r.pass;
  j["constants"] = {{"m_plus", r.constants.m_plus},
                    {"m_minus", r.constants.m_minus},
                    {"c_plus", r.constants.c_plus},
                    {"c_minus", r.constants.c_minus}};
  double min_upper = std::numeric_limits<double>::infinity(), min_lower = min_upper;
  for (const auto& m : r.barrier.margins) {
    if (!m.feasible) continue;
    min_upper = std::min(min_upper, m.upper_margin);
    min_lower = std::min(min_lower, m.lower_margin);
  }
  json violations = json::array();
  for (const auto& m : r.barrier.margins) {
    if (m.feasible && m.upper_margin > 0.0 && m.lower_margin > 0.0) continue;
    violations.push_back({{"vertex", m.vertex},
                          {"feasible", m.feasible},
                          {"upper_margin", nullable(m.upper_margin)},
                          {"lower_margin", nullable(m.lower_margin)}});
  }
  j["barrier"] = {{"pass", r.barrier.pass},
                  {"interior_vertices", r.barrier.margins.size()},
                  {"violations", r.barrier.violations},
                  {"min_upper_margin", nullable(min_upper)},
                  {"min_lower_margin", nullable(min_lower)},
                  {"max_trap_width", r.barrier.max_width},
                  {"trap_width_exceeds_epsilon", r.barrier.width_exceeds_epsilon},
                  {"violating_vertices", violations}};
  j["inward_gradient"] = {{"pass", r.inward.pass},
                          {"samples", r.inward.samples},
                          {"sign_failures", r.inward.sign_failures},
                          {"infeasible", r.inward.infeasible}};
  j["solution"] = {{"converged", r.solved}, {"in_trap", r.solution_in_trap}};
  if (!r.solver_error.empty()) j["solution"]["error"] = r.solver_error;
  std::vector<std::string> unmet;
  if (!r.barrier.pass) unmet.push_back("barrier inequalities");
  if (!r.inward.pass) unmet.push_back("inward gradient");
  if (r.barrier.width_exceeds_epsilon) unmet.push_back("trap width exceeds epsilon");
  if (!r.solved) unmet.push_back("solver");
  else if (!r.solution_in_trap) unmet.push_back("solution outside trap set");
  j["unmet_preconditions"] = unmet;
  return j.dump(2) + "\n";
}

}  // namespace dcpl
