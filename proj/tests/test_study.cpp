#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "dcpl/errors.hpp"
#include "dcpl/study.hpp"

using namespace dcpl;

namespace {

StudyConfig config(const std::string& text) { return parse_config(text); }

}  // namespace

TEST_CASE("fit_rate") {
  const double e3[] = {0.2, 0.1, 0.05};
  const double q3[] = {0.04, 0.01, 0.0025};
  CHECK(std::abs(fit_rate(e3, q3) - 2.0) <= 1e-9);
  const double e2[] = {0.2, 0.1};
  CHECK(std::abs(fit_rate(e2, e2) - 1.0) <= 1e-12);

  const double e4[] = {0.2, 0.1, 0.05, 0.025};
  double c4[4];
  for (int k = 0; k < 4; ++k) c4[k] = 3.7 * e4[k] * e4[k];
  CHECK(std::abs(fit_rate(e4, c4) - 2.0) <= 1e-9);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> wobble(0.95, 1.05);
  for (int trial = 0; trial < 200; ++trial) {
    double p[4];
    for (int k = 0; k < 4; ++k) p[k] = 0.8 * e4[k] * e4[k] * wobble(rng);
    const double r = fit_rate(e4, p);
    CHECK(r >= 1.8);
    CHECK(r <= 2.2);
  }

  const double one[] = {0.1};
  CHECK_THROWS_AS(fit_rate(one, one), InsufficientData);
  CHECK_THROWS_AS(fit_rate(e3, e2), InsufficientData);
  const double zero[] = {0.01, 0.0, 0.001};
  CHECK_THROWS_AS(fit_rate(e3, zero), InsufficientData);
}

TEST_CASE("richardson_limit removes even powers") {
  const double e[] = {0.1, 0.05, 0.025};
  double v[3];
  for (int k = 0; k < 3; ++k) v[k] = -0.25 + 3.0 * e[k] * e[k] - 40.0 * std::pow(e[k], 4);
  CHECK(std::abs(richardson_limit(e, v) + 0.25) <= 1e-13);
  CHECK_THROWS_AS(richardson_limit(std::span<const double>{}, std::span<const double>{}), InsufficientData);
}

TEST_CASE("config parsing") {
  const auto c = config(R"({
    "version": 1,
    "map": {"name": "cubic_perturbation", "params": {"mu": [0.1, 0.05]}},
    "lattice": {"angles": ["80deg", "60deg", "40deg"], "offset": [0.01, 0.0]},
    "region": {"type": "disc", "center": [0.0, 0.1], "radius": 0.7},
    "epsilons": [0.2, 0.1, 0.05],
    "solver": {"gradient_tolerance": 1e-11, "max_iterations": 30},
    "taylor": {"v0": [1.0, 0.5]},
    "verify": {"samples": 50},
    "seed": 9
  })");
  CHECK(c.map_name == "cubic_perturbation");
  CHECK(c.map_params.at("mu") == Complex(0.1, 0.05));
  CHECK(std::abs(c.lattice.alpha - 80 * kPi / 180) < 1e-15);
  CHECK(std::abs(c.lattice.gamma - 40 * kPi / 180) < 1e-15);
  CHECK(c.lattice.origin_offset == Complex(0.01, 0.0));
  CHECK(c.epsilons.size() == 3);
  CHECK(c.solver.gradient_tolerance == 1e-11);
  CHECK(c.solver.max_iterations == 30);
  CHECK(c.taylor_v0 == Complex(1.0, 0.5));
  CHECK(c.samples == 50);
  CHECK(c.seed == 9);

  const auto d = config(R"({"map": "exp", "lattice": {"angles": [70, 60, 50], "units": "degrees"},
    "region": {"type": "polygon", "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]]}, "epsilon": 0.1,
    "normalization": {"source": "explicit", "image_of_origin": [1, 0], "seed_direction": 0.25}})");
  CHECK(std::abs(d.lattice.beta - 60 * kPi / 180) < 1e-15);
  CHECK(d.epsilons == std::vector<double>{0.1});
  REQUIRE(d.explicit_normalization.has_value());
  CHECK(d.explicit_normalization->seed_direction == 0.25);

  const auto r = config(R"({"map": "identity", "lattice": {"angles": [1.0471975511965976, 1.0471975511965976, 1.0471975511965979]}, "epsilon": 0.1})");
  CHECK(r.lattice.is_equilateral(1e-12));
}

TEST_CASE("config errors") {
  const char* bad[] = {
      "{\"map\": \"exp\", ",
      "[1, 2]",
      R"({"epsilons": [0.1]})",
      R"({"map": "sinh", "epsilons": [0.1]})",
      R"({"map": "exp"})",
      R"({"map": "exp", "epsilons": [0.1, 0.2]})",
      R"({"map": "exp", "epsilons": [0.1, -0.05]})",
      R"({"map": "exp", "epsilons": []})",
      R"({"map": "exp", "epsilons": [0.1], "version": 2})",
      R"({"map": "exp", "epsilons": [0.1], "lattice": {"angles": [60, 60, 70], "units": "degrees"}})",
      R"({"map": "exp", "epsilons": [0.1], "lattice": {"angles": ["sixty", "60deg", "60deg"]}})",
      R"({"map": "exp", "epsilons": [0.1], "lattice": {"angles": [60, 60]}})",
      R"({"map": "exp", "epsilons": [0.1], "region": {"type": "disc", "radius": -1}})",
      R"({"map": "exp", "epsilons": [0.1], "region": {"type": "annulus"}})",
      R"({"map": "exp", "epsilons": [0.1], "solver": {"line_search_shrink": 1.5}})",
      R"({"map": "exp", "epsilons": [0.1], "solver": {"max_iterations": "many"}})",
      R"({"map": "exp", "epsilons": [0.1], "normalization": {"source": "guess"}})",
      R"({"map": {"name": "affine", "params": {"c": "two"}}, "epsilons": [0.1]})",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(config(text), ConfigError);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/dcpl/config.json"), ConfigError);
}

TEST_CASE("identity map converges trivially") {
  const auto c = config(R"({"map": "identity", "region": {"radius": 0.6}, "epsilons": [0.2, 0.1, 0.05]})");
  const auto rep = run_convergence(c);
  for (const auto& row : rep.rows) {
    CHECK(row.ok);
    for (const auto& name : kErrorMetrics) CHECK(metric(row, name) <= 1e-10);
  }
  for (const auto& name : kErrorMetrics) CHECK_FALSE(rep.orders.at(name).has_value());
}

TEST_CASE("convergence orders for a non-trivial map") {
  const auto c = config(R"({"map": {"name": "cubic_perturbation", "params": {"mu": 0.1}},
    "region": {"radius": 0.8}, "epsilons": [0.2, 0.1, 0.05, 0.025]})");
  const auto rep = run_convergence(c);
  for (const auto& row : rep.rows) CHECK(row.ok);
  REQUIRE(rep.orders.at("err_u").has_value());
  CHECK(*rep.orders.at("err_u") >= 1.7);
  CHECK(*rep.orders.at("err_u") <= 2.3);
  for (const char* name : {"err_f", "err_dz", "err_dzbar", "err_psi", "err_c1"}) {
    INFO(name);
    REQUIRE(rep.orders.at(name).has_value());
    CHECK(*rep.orders.at(name) >= 0.8);
  }
}

TEST_CASE("exponential boundary data is reproduced exactly") {
  const auto c = config(R"({"map": "exp", "region": {"radius": 0.8}, "epsilons": [0.2, 0.1, 0.05, 0.025]})");
  const auto rep = run_convergence(c);
  for (const auto& row : rep.rows) {
    CHECK(row.ok);
    CHECK(row.err_u <= 1e-12);
    CHECK(row.iterations == 1);
  }
  CHECK_FALSE(rep.orders.at("err_u").has_value());
  REQUIRE(rep.orders.at("err_f").has_value());
  CHECK(*rep.orders.at("err_f") >= 0.8);
}

TEST_CASE("midpoint errors are bounded by vertex errors and linearity") {
  const auto c = config(R"({"map": "exp", "region": {"radius": 0.8}, "epsilon": 0.1})");
  const auto run = run_solve(c, 0.1);
  const auto f = c.map();
  const auto& V = run.sub.vertices();
  const auto& F = run.plmap.image_positions;
  for (const auto& e : run.sub.edges()) {
    const Complex a = V[e[0]].position, b = V[e[1]].position, mid = 0.5 * (a + b);
    const double at_vertices = std::max(std::abs(F[e[0]] - f.eval_f(a)), std::abs(F[e[1]] - f.eval_f(b)));
    const double chord = std::abs(0.5 * (f.eval_f(a) + f.eval_f(b)) - f.eval_f(mid));
    CHECK(std::abs(0.5 * (F[e[0]] + F[e[1]]) - f.eval_f(mid)) <= at_vertices + chord + 1e-15);
  }
}

TEST_CASE("convergence output") {
  const auto c = config(R"({"map": "exp", "region": {"radius": 0.6}, "epsilons": [0.2, 0.1, 0.05]})");
  const auto a = convergence_csv(run_convergence(c, 1));
  const auto b = convergence_csv(run_convergence(c, 3));
  CHECK(a == b);
  CHECK(a.rfind("epsilon,err_u,err_f,err_dz,err_dzbar,err_psi,err_c1,holonomy,iterations\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 4);

  const auto j = nlohmann::json::parse(convergence_json(run_convergence(c)));
  CHECK(j["rows"].size() == 3);
  CHECK(j["orders"]["err_u"].is_null());
  CHECK(j["orders"]["err_f"].is_number());
}

TEST_CASE("failed rows are reported") {
  const auto c = config(R"({"map": {"name": "cubic_perturbation", "params": {"mu": 0.3}}, "region": {"radius": 0.8},
    "epsilons": [0.1, 0.05], "solver": {"max_iterations": 2, "gradient_tolerance": 1e-30}})");
  const auto rep = run_convergence(c);
  for (const auto& row : rep.rows) {
    CHECK_FALSE(row.ok);
    CHECK_FALSE(row.error.empty());
  }
  const auto csv = convergence_csv(rep);
  CHECK(csv.find("nan") != std::string::npos);
  CHECK(csv.find(",-1\n") != std::string::npos);
}

TEST_CASE("taylor study") {
  const auto sq = run_taylor(config(R"({"map": "square", "epsilons": [0.1, 0.05, 0.025], "taylor": {"v0": 1}})"));
  const double target = -9 * std::sqrt(3.0) / 64;
  REQUIRE(sq.extrapolated.has_value());
  CHECK(std::abs(*sq.extrapolated / target - 1.0) <= 0.05);
  CHECK(std::abs(sq.predicted - target) <= 1e-15);
  CHECK(taylor_csv(sq).rfind("epsilon,defect,defect_over_eps4,predicted_constant\n", 0) == 0);

  const auto obtuse = run_taylor(config(R"({"map": "square", "lattice": {"angles": ["100deg", "40deg", "40deg"]},
    "epsilons": [0.1, 0.05, 0.025], "taylor": {"v0": [1, 0.3]}})"));
  for (const auto& row : obtuse.rows) {
    CHECK(row.ok);
    CHECK(std::isfinite(row.defect));
  }
  REQUIRE(obtuse.extrapolated.has_value());
  CHECK(std::abs(*obtuse.extrapolated / obtuse.predicted - 1.0) <= 0.01);

  CHECK_THROWS_AS(run_taylor(config(R"({"map": "square", "epsilon": 0.1, "taylor": {"v0": 0}})")), ConfigError);
}

TEST_CASE("verification study") {
  const auto ok = run_verify(config(R"({"map": "exp", "region": {"radius": 0.8}, "epsilon": 0.05})"), 0);
  CHECK(ok.pass);
  const auto aff = run_verify(config(R"({"map": {"name": "affine", "params": {"c": [1, 2], "d": 3}}, "region": {"radius": 0.6}, "epsilon": 0.05})"), 0);
  CHECK(aff.pass);

  const auto coarse = run_verify(config(R"({"map": "square", "lattice": {"offset": [1, 0]},
    "region": {"center": [1, 0], "radius": 0.95}, "epsilon": 0.5})"), 0);
  CHECK_FALSE(coarse.pass);
  const auto j = nlohmann::json::parse(verify_json(coarse));
  CHECK(j["pass"] == false);
  CHECK_FALSE(j["unmet_preconditions"].empty());
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::nan("")) == "nan");
}
