#include "dcpl/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcpl/errors.hpp"
#include "dcpl/export.hpp"
#include "dcpl/study.hpp"

namespace dcpl {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int worker_threads() {
  const char* env = std::getenv("DCPL_THREADS");
  if (env == nullptr) return 1;
  try {
    return std::max(1, std::stoi(env));
  } catch (const std::exception&) {
    return 1;
  }
}

std::string join(const fs::path& dir, const char* name) { return (dir / name).string(); }

int cmd_solve(const StudyConfig& cfg, const fs::path& out, std::ostream& log) {
  const double eps = cfg.epsilons.front();
  json report;
  report["study"] = "solve";
  report["map"] = cfg.map_name;
  report["epsilon"] = eps;
  try {
    const SolveRun run = run_solve(cfg, eps);
    std::vector<Complex> source;
    for (const auto& v : run.sub.vertices()) source.push_back(v.position);
    write_text_file(join(out, "scalefield.json"), scalefield_json(run.sub, run.result.u));
    write_text_file(join(out, "mesh_source.obj"), mesh_obj(run.sub, source));
    write_text_file(join(out, "mesh_image.obj"), mesh_obj(run.sub, run.plmap.image_positions));
    write_text_file(join(out, "overlay.svg"), overlay_svg(run.sub, run.plmap, eps, cfg.map_name));
    report["status"] = "converged";
    report["iterations"] = run.result.iterations;
    report["final_gradient_norm"] = run.result.final_gradient_norm;
    report["holonomy_defect"] = run.plmap.holonomy_defect;
    report["vertices"] = run.sub.num_vertices();
    report["interior_vertices"] = run.sub.interior_vertices().size();
    report["triangles"] = run.sub.num_triangles();
    report["normalization"] = {{"image_of_origin", {run.normalization.image_of_origin.real(),
                                                    run.normalization.image_of_origin.imag()}},
                               {"seed_direction", run.normalization.seed_direction}};
    write_text_file(join(out, "report.json"), report.dump(2) + "\n");
    log << "solve: converged in " << run.result.iterations << " iterations, |grad| = "
        << format_number(run.result.final_gradient_norm) << "\n";
    return kExitOk;
  } catch (const NotAcute&) {
    throw;
  } catch (const MaxIterations& e) {
    report["status"] = "failed";
    report["error"] = e.what();
    report["iterations"] = e.result.iterations;
    report["final_gradient_norm"] = e.result.final_gradient_norm;
  } catch (const LineSearchFailure& e) {
    report["status"] = "failed";
    report["error"] = e.what();
  } catch (const InfeasibleScaleField& e) {
    report["status"] = "failed";
    report["error"] = e.what();
  }
  write_text_file(join(out, "report.json"), report.dump(2) + "\n");
  log << "solve: " << report["error"].get<std::string>() << "\n";
  return kExitSolver;
}

int cmd_converge(const StudyConfig& cfg, const fs::path& out, std::ostream& log) {
  if (!cfg.lattice.strictly_acute()) throw NotAcute("convergence studies need a strictly acute lattice");
  const ConvergenceReport report = run_convergence(cfg, worker_threads());
  write_text_file(join(out, "errors.csv"), convergence_csv(report));
  write_text_file(join(out, "report.json"), convergence_json(report));
  bool all_ok = true;
  for (const auto& r : report.rows) all_ok = all_ok && r.ok;
  for (const auto& [name, order] : report.orders) {
    log << "order(" << name << ") = " << (order ? format_number(*order) : std::string("n/a")) << "\n";
  }
  return all_ok ? kExitOk : kExitSolver;
}

int cmd_taylor(const StudyConfig& cfg, const fs::path& out, std::ostream& log) {
  const TaylorReport report = run_taylor(cfg);
  write_text_file(join(out, "taylor.csv"), taylor_csv(report));
  write_text_file(join(out, "report.json"), taylor_json(report));
  log << "predicted constant " << format_number(report.predicted) << ", extrapolated "
      << (report.extrapolated ? format_number(*report.extrapolated) : std::string("n/a")) << "\n";
  return kExitOk;
}

int cmd_verify(const StudyConfig& cfg, const fs::path& out, std::uint64_t seed, std::ostream& log) {
  const VerifyReport report = run_verify(cfg, seed);
  write_text_file(join(out, "report.json"), verify_json(report));
  log << "verify: " << (report.pass ? "pass" : "fail") << "\n";
  return report.pass ? kExitOk : kExitPrecondition;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete conformal PL-maps on triangular lattices"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"solve", "converge", "taylor", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "study configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "random seed (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    StudyConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir + "'");

    if (command == "solve") return cmd_solve(cfg, dir, out);
    if (command == "converge") return cmd_converge(cfg, dir, out);
    if (command == "taylor") return cmd_taylor(cfg, dir, out);
    return cmd_verify(cfg, dir, cfg.seed, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotAcute& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const RegionTooSmall& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const TopologyFailure& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const OutsideDomain& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace dcpl
