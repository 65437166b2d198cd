#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tentlab/config.hpp"

using namespace tentlab;

TEST_CASE("defaults and full parse") {
  const auto dflt = parse_config("{}");
  CHECK(dflt.dim == 1);
  CHECK(dflt.n == 32);
  CHECK(dflt.omega_family == "power");
  CHECK(dflt.omega_p == 1.0);
  CHECK(dflt.levels == 16);
  CHECK_FALSE(dflt.M.has_value());
  CHECK(config_guard_violations(dflt).empty());

  const auto cfg = parse_config(R"({
    "operator": {"dim": 2, "n": 16,
                 "coefficients": {"family": "oscillating", "params": [1.0, 0.3]}},
    "omega": {"family": "power_log", "p": 0.5, "a": 1.0, "shift": 54.598150033144236},
    "time_grid": {"levels": 24, "t_min": 0.02, "t_max": 0.5},
    "kinds": ["heat_square", "vertical:2", "maximal_heat:0.75"],
    "decomposition": {"M": 3, "eps": 1.5, "gamma": 0.8, "slack": 0.2},
    "probes": ["gaffney", "riesz"],
    "seed": 42,
    "fixtures": {"n_random": 2, "band_limit": 3},
    "output": {"json": "out.json", "csv": "out.csv"}
  })");
  CHECK(cfg.dim == 2);
  CHECK(cfg.n == 16);
  CHECK(cfg.coeff_family == "oscillating");
  CHECK(cfg.omega_p == 0.5);
  CHECK(cfg.levels == 24);
  CHECK(cfg.t_min == doctest::Approx(0.02));
  CHECK(cfg.M == 3);
  CHECK(cfg.eps == doctest::Approx(1.5));
  CHECK(cfg.seed == 42);
  CHECK(cfg.fixtures.n_random == 2);
  CHECK(cfg.out_csv == "out.csv");
  CHECK(config_guard_violations(cfg).empty());

  const auto kinds = cfg.kinds;
  CHECK(parse_kind(kinds[1]).order == 2);
  CHECK(parse_kind(kinds[2]).beta == doctest::Approx(0.75));
}

TEST_CASE("invalid json and unknown names fail at parse time") {
  CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"kinds": ["warp_drive"]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"probes": ["telepathy"]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), std::runtime_error);
}

TEST_CASE("guards report the violated inequality") {
  ExperimentConfig cfg;

  // molecular order below the admissibility threshold: for p = 0.5 in 1D
  // the threshold is (1/2)(2 - 1/2) = 0.75, so M = 0 fails
  cfg.omega_p = 0.5;
  cfg.M = 0;
  auto v = config_guard_violations(cfg);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "M=0 <= (n/2)(1/p_omega-1/2)=0.75");

  cfg.M.reset();
  cfg.eps = 0.0;
  cfg.omega_p = 1.0;
  v = config_guard_violations(cfg);
  REQUIRE(v.size() == 1);
  // power omega has equal upper and lower type, so the threshold is 0
  CHECK(v[0] == "eps=0 <= n(1/p_omega-1/p_omega+)=0");

  // embedding probe needs p above n/(n+1)
  cfg = ExperimentConfig{};
  cfg.omega_p = 0.5;
  cfg.probes = {"embedding"};
  v = config_guard_violations(cfg);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "p_omega=0.5 <= n/(n+1)=0.5");

  // several basics at once
  cfg = ExperimentConfig{};
  cfg.dim = 3;
  cfg.n = 4;
  cfg.levels = 8;
  v = config_guard_violations(cfg);
  CHECK(v.size() == 3);

  // non-accretive coefficients
  cfg = ExperimentConfig{};
  cfg.coeff_family = "scalar";
  cfg.coeff_params = {-1.0, 0.0};
  v = config_guard_violations(cfg);
  REQUIRE(v.size() == 1);

  // time window outside the resolvable band
  cfg = ExperimentConfig{};
  cfg.t_min = 1e-4;
  cfg.t_max = 2.0;
  v = config_guard_violations(cfg);
  CHECK(v.size() == 2);
}

TEST_CASE("builders reproduce the configured objects") {
  ExperimentConfig cfg;
  cfg.dim = 1;
  cfg.n = 32;
  cfg.omega_family = "power";
  cfg.omega_p = 0.8;
  cfg.levels = 16;

  const Grid g = make_grid(cfg);
  CHECK(g.size() == 32);
  const auto w = make_omega(cfg);
  CHECK(w.declared_pw() == doctest::Approx(0.8));
  const auto tg = make_timegrid(cfg, g);
  CHECK(tg.size() == 16);
  CHECK(tg.t_min == doctest::Approx(0.25 * g.h()));

  cfg.coeff_family = "diag_plus_antisym";
  cfg.coeff_params = {1.0, 2.0, 0.5};
  const auto A = make_coefficients(cfg, g);
  CHECK(A.entry(0, 0, 0) == Cplx(1.0, 0.0));

  cfg.coeff_family = "unobtainium";
  CHECK_THROWS_AS(make_coefficients(cfg, g), std::invalid_argument);
  cfg.omega_family = "mystery";
  CHECK_THROWS_AS(make_omega(cfg), std::invalid_argument);
}
