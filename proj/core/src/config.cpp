#include "tentlab/config.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/core.h>
#include <json.hpp>

namespace tentlab {

namespace {

using nlohmann::json;

template <typename T>
void maybe(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(fmt::format("config parse error: {}", e.what()));
  }

  ExperimentConfig cfg;
  if (j.contains("operator")) {
    const json& op = j.at("operator");
    maybe(op, "dim", cfg.dim);
    maybe(op, "n", cfg.n);
    if (op.contains("coefficients")) {
      const json& co = op.at("coefficients");
      maybe(co, "family", cfg.coeff_family);
      maybe(co, "params", cfg.coeff_params);
    }
  }
  if (j.contains("omega")) {
    const json& om = j.at("omega");
    maybe(om, "family", cfg.omega_family);
    maybe(om, "p", cfg.omega_p);
    maybe(om, "a", cfg.omega_a);
    maybe(om, "shift", cfg.omega_shift);
  }
  if (j.contains("time_grid")) {
    const json& tg = j.at("time_grid");
    maybe(tg, "levels", cfg.levels);
    if (tg.contains("t_min")) cfg.t_min = tg.at("t_min").get<double>();
    if (tg.contains("t_max")) cfg.t_max = tg.at("t_max").get<double>();
  }
  maybe(j, "kinds", cfg.kinds);
  if (j.contains("decomposition")) {
    const json& de = j.at("decomposition");
    if (de.contains("M")) cfg.M = de.at("M").get<int>();
    if (de.contains("eps")) cfg.eps = de.at("eps").get<double>();
    maybe(de, "gamma", cfg.gamma);
    maybe(de, "slack", cfg.slack);
  }
  maybe(j, "probes", cfg.probes);
  maybe(j, "seed", cfg.seed);
  if (j.contains("fixtures")) {
    const json& fx = j.at("fixtures");
    maybe(fx, "n_random", cfg.fixtures.n_random);
    maybe(fx, "band_limit", cfg.fixtures.band_limit);
    maybe(fx, "modes", cfg.fixtures.modes);
    maybe(fx, "n_bumps", cfg.fixtures.n_bumps);
    maybe(fx, "n_molecules", cfg.fixtures.n_molecules);
    maybe(fx, "molecule_order", cfg.fixtures.molecule_order);
  }
  if (j.contains("output")) {
    const json& out = j.at("output");
    maybe(out, "json", cfg.out_json);
    maybe(out, "csv", cfg.out_csv);
  }

  // unknown functional names and probe names fail at parse time, not mid-run
  for (const auto& k : cfg.kinds) parse_kind(k);
  for (const auto& p : cfg.probes)
    if (p != "gaffney" && p != "riesz" && p != "offdiagonal" &&
        p != "fractional" && p != "embedding" && p != "john_nirenberg" &&
        p != "pairing" && p != "aperture")
      throw std::invalid_argument(fmt::format("unknown probe '{}'", p));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::vector<std::string> config_guard_violations(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.dim != 1 && cfg.dim != 2)
    out.push_back(fmt::format("dim={} not in {{1, 2}}", cfg.dim));
  if (cfg.n < 8) out.push_back(fmt::format("n={} < 8", cfg.n));
  if (!(cfg.omega_p > 0.0 && cfg.omega_p <= 1.0))
    out.push_back(fmt::format("p_omega={} not in (0, 1]", cfg.omega_p));
  if (cfg.omega_family != "power" && cfg.omega_family != "power_log")
    out.push_back(fmt::format("unknown omega family '{}'", cfg.omega_family));
  if (cfg.levels < 16) out.push_back(fmt::format("levels={} < 16", cfg.levels));
  if (!out.empty()) return out;  // derived guards assume the basics hold

  const OrliczFunction w = make_omega(cfg);
  const double pw = w.declared_pw();
  const double pwp = w.declared_pw_plus();
  const double n = cfg.dim;

  if (cfg.M) {
    const double thresh = 0.5 * n * (1.0 / pw - 0.5);
    if (!(*cfg.M > thresh))
      out.push_back(fmt::format("M={} <= (n/2)(1/p_omega-1/2)={}", *cfg.M,
                                thresh));
  }
  if (cfg.eps) {
    const double thresh = n * (1.0 / pw - 1.0 / pwp);
    if (!(*cfg.eps > thresh))
      out.push_back(fmt::format("eps={} <= n(1/p_omega-1/p_omega+)={}",
                                *cfg.eps, thresh));
  }
  for (const auto& p : cfg.probes)
    if (p == "embedding" && !(pw > n / (n + 1.0)))
      out.push_back(
          fmt::format("p_omega={} <= n/(n+1)={}", pw, n / (n + 1.0)));

  const Grid g(cfg.dim, cfg.n);
  try {
    ellipticity_constants(make_coefficients(cfg, g));
  } catch (const std::exception& e) {
    out.push_back(e.what());
  }
  if (cfg.t_min && *cfg.t_min < 0.25 * g.h())
    out.push_back(fmt::format("t_min={} < h/4={}", *cfg.t_min, 0.25 * g.h()));
  if (cfg.t_max && *cfg.t_max > g.length)
    out.push_back(fmt::format("t_max={} > length={}", *cfg.t_max, g.length));
  return out;
}

Grid make_grid(const ExperimentConfig& cfg) { return Grid(cfg.dim, cfg.n); }

CoefficientField make_coefficients(const ExperimentConfig& cfg, const Grid& g) {
  const auto& p = cfg.coeff_params;
  auto param = [&](size_t i, double dflt) { return i < p.size() ? p[i] : dflt; };
  if (cfg.coeff_family == "identity") return CoefficientField::identity(g);
  if (cfg.coeff_family == "scalar")
    return CoefficientField::scalar(g, Cplx(param(0, 1.0), param(1, 0.0)));
  if (cfg.coeff_family == "diag_plus_antisym")
    return CoefficientField::diag_plus_antisym(g, param(0, 1.0), param(1, 1.0),
                                               param(2, 0.0));
  if (cfg.coeff_family == "oscillating")
    return CoefficientField::oscillating(g, param(0, 1.0), param(1, 0.3));
  throw std::invalid_argument(
      fmt::format("unknown coefficient family '{}'", cfg.coeff_family));
}

OrliczFunction make_omega(const ExperimentConfig& cfg) {
  if (cfg.omega_family == "power") return OrliczFunction::power(cfg.omega_p);
  if (cfg.omega_family == "power_log")
    return OrliczFunction::power_log(cfg.omega_p, cfg.omega_a, cfg.omega_shift);
  throw std::invalid_argument(
      fmt::format("unknown omega family '{}'", cfg.omega_family));
}

TimeGrid make_timegrid(const ExperimentConfig& cfg, const Grid& g) {
  return TimeGrid::log_uniform(g, cfg.levels, cfg.t_min.value_or(-1.0),
                               cfg.t_max.value_or(-1.0));
}

FunctionalKind parse_kind(const std::string& name) {
  std::string head = name;
  std::string arg;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    head = name.substr(0, colon);
    arg = name.substr(colon + 1);
  }
  const auto int_arg = [&](int dflt) {
    return arg.empty() ? dflt : std::stoi(arg);
  };
  const auto dbl_arg = [&](double dflt) {
    return arg.empty() ? dflt : std::stod(arg);
  };
  if (head == "heat_square") return FunctionalKind::heat_square(int_arg(1));
  if (head == "poisson_grad") return FunctionalKind::poisson_grad();
  if (head == "poisson_time") return FunctionalKind::poisson_time();
  if (head == "heat_grad") return FunctionalKind::heat_grad();
  if (head == "vertical") return FunctionalKind::vertical(int_arg(1));
  if (head == "maximal_heat") return FunctionalKind::maximal_heat(dbl_arg(1.0));
  if (head == "maximal_poisson")
    return FunctionalKind::maximal_poisson(dbl_arg(1.0));
  if (head == "radial_heat") return FunctionalKind::radial_heat(int_arg(0));
  if (head == "radial_poisson") return FunctionalKind::radial_poisson();
  throw std::invalid_argument(fmt::format("unknown functional '{}'", name));
}

}  // namespace tentlab
