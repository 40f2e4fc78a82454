#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcpl/cli.hpp"

using namespace dcpl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("dcpl_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const TempDir& dir, const std::string& text) {
  const fs::path p = dir.path / "config.json";
  std::ofstream(p) << text;
  return p;
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "dcpl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::vector<std::complex<double>> obj_vertices(const std::string& text) {
  std::vector<std::complex<double>> v;
  std::istringstream in(text);
  std::string tag;
  double x, y, z;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (ls >> tag && tag == "v" && ls >> x >> y >> z) v.emplace_back(x, y);
  }
  return v;
}

}  // namespace

TEST_CASE("solve writes its outputs") {
  TempDir dir("solve");
  const auto cfg = write_config(dir, R"({"map": {"name": "affine", "params": {"c": [1, 1], "d": [0.5, 0]}},
    "region": {"radius": 0.6}, "epsilon": 0.1})");
  const auto out = dir.path / "out";
  REQUIRE(run({"solve", "--config", cfg.string(), "--out", out.string()}) == kExitOk);
  for (const char* name : {"scalefield.json", "mesh_source.obj", "mesh_image.obj", "overlay.svg", "report.json"}) {
    CHECK(fs::exists(out / name));
  }
  const auto report = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(report["status"] == "converged");

  const auto src = obj_vertices(read_file(out / "mesh_source.obj"));
  const auto img = obj_vertices(read_file(out / "mesh_image.obj"));
  REQUIRE(src.size() == img.size());
  REQUIRE_FALSE(src.empty());
  for (std::size_t i = 0; i < src.size(); ++i) {
    CHECK(std::abs(img[i] - (std::complex<double>(1, 1) * src[i] + 0.5)) <= 1e-9);
  }
}

TEST_CASE("configuration errors exit with code 1") {
  TempDir dir("config");
  const auto bad = write_config(dir, "{\"map\": \"exp\", ");
  const auto out = (dir.path / "out").string();
  std::string err;
  CHECK(run({"solve", "--config", bad.string(), "--out", out}, &err) == kExitConfig);
  CHECK_FALSE(err.empty());
  CHECK(run({"solve", "--config", (dir.path / "missing.json").string(), "--out", out}) == kExitConfig);
  CHECK(run({"solve", "--out", out}) == kExitConfig);
  CHECK(run({"frobnicate", "--config", bad.string(), "--out", out}) == kExitConfig);
  CHECK(run({}) == kExitConfig);
}

TEST_CASE("obtuse lattices exit with code 3") {
  TempDir dir("obtuse");
  const auto cfg = write_config(dir, R"({"map": "exp", "lattice": {"angles": ["100deg", "40deg", "40deg"]},
    "region": {"radius": 0.5}, "epsilon": 0.1})");
  std::string err;
  CHECK(run({"solve", "--config", cfg.string(), "--out", (dir.path / "a").string()}, &err) == kExitPrecondition);
  CHECK(err.find("alpha") != std::string::npos);
  CHECK(run({"converge", "--config", cfg.string(), "--out", (dir.path / "b").string()}) == kExitPrecondition);
}

TEST_CASE("solver failures exit with code 2") {
  TempDir dir("solver");
  const auto cfg = write_config(dir, R"({"map": {"name": "cubic_perturbation", "params": {"mu": 0.3}},
    "region": {"radius": 0.8}, "epsilon": 0.05, "solver": {"max_iterations": 2, "gradient_tolerance": 1e-30}})");
  const auto out = dir.path / "out";
  CHECK(run({"solve", "--config", cfg.string(), "--out", out.string()}) == kExitSolver);
  const auto report = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(report["status"] == "failed");
}

TEST_CASE("converge output is deterministic") {
  TempDir dir("converge");
  const auto cfg = write_config(dir, R"({"map": {"name": "cubic_perturbation", "params": {"mu": 0.1}},
    "region": {"radius": 0.6}, "epsilons": [0.2, 0.1, 0.05]})");
  const auto a = dir.path / "a", b = dir.path / "b";
  REQUIRE(run({"converge", "--config", cfg.string(), "--out", a.string()}) == kExitOk);
  REQUIRE(run({"converge", "--config", cfg.string(), "--out", b.string()}) == kExitOk);
  const auto csv = read_file(a / "errors.csv");
  CHECK(csv == read_file(b / "errors.csv"));
  CHECK(csv.rfind("epsilon,err_u,err_f,err_dz,err_dzbar,err_psi,err_c1,holonomy,iterations\n", 0) == 0);
  const auto report = nlohmann::json::parse(read_file(a / "report.json"));
  CHECK(report["orders"]["err_u"].is_number());
}

TEST_CASE("taylor and verify subcommands") {
  TempDir dir("taylor");
  const auto cfg = write_config(dir, R"({"map": "square", "epsilons": [0.1, 0.05], "taylor": {"v0": 1}})");
  REQUIRE(run({"taylor", "--config", cfg.string(), "--out", (dir.path / "t").string()}) == kExitOk);
  CHECK(fs::exists(dir.path / "t" / "taylor.csv"));

  const auto good = write_config(dir, R"({"map": "exp", "region": {"radius": 0.8}, "epsilon": 0.05})");
  CHECK(run({"verify", "--config", good.string(), "--out", (dir.path / "v").string(), "--seed", "3"}) == kExitOk);

  const auto coarse = write_config(dir, R"({"map": "square", "lattice": {"offset": [1, 0]},
    "region": {"center": [1, 0], "radius": 0.95}, "epsilon": 0.5})");
  CHECK(run({"verify", "--config", coarse.string(), "--out", (dir.path / "w").string()}) == kExitPrecondition);
  const auto report = nlohmann::json::parse(read_file(dir.path / "w" / "report.json"));
  CHECK(report["pass"] == false);
}
