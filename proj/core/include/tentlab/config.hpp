#ifndef TENTLAB_CONFIG_HPP
#define TENTLAB_CONFIG_HPP

#include <optional>

#include "tentlab/fixtures.hpp"
#include "tentlab/square_maximal.hpp"

namespace tentlab {

/// Declarative experiment description, parsed from JSON. Flags in the CLI
/// override individual fields after parsing.
struct ExperimentConfig {
  // operator
  int dim = 1;
  int n = 32;
  std::string coeff_family = "identity";  // identity | scalar |
                                          // diag_plus_antisym | oscillating
  std::vector<double> coeff_params;

  // growth function
  std::string omega_family = "power";  // power | power_log
  double omega_p = 1.0;
  double omega_a = 1.0;
  double omega_shift = 54.598150033144236;

  // time ladder
  int levels = 16;
  std::optional<double> t_min;
  std::optional<double> t_max;

  // functionals to evaluate (see parse_kind for the accepted names)
  std::vector<std::string> kinds;

  // decomposition parameters
  std::optional<int> M;
  std::optional<double> eps;
  double gamma = 0.75;
  double slack = 0.1;

  // probe selection for the `probe` subcommand
  std::vector<std::string> probes;

  std::uint64_t seed = 0;
  FixtureSpec fixtures;

  std::string out_json;
  std::string out_csv;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Every hypothesis inequality any selected probe relies on, evaluated up
/// front. Returns the violated inequalities verbatim; empty means the run
/// may proceed.
std::vector<std::string> config_guard_violations(const ExperimentConfig& cfg);

Grid make_grid(const ExperimentConfig& cfg);
CoefficientField make_coefficients(const ExperimentConfig& cfg, const Grid& g);
OrliczFunction make_omega(const ExperimentConfig& cfg);
TimeGrid make_timegrid(const ExperimentConfig& cfg, const Grid& g);

/// Accepted names: heat_square[:k], poisson_grad, poisson_time, heat_grad,
/// vertical[:k], maximal_heat[:beta], maximal_poisson[:beta],
/// radial_heat[:M], radial_poisson. Throws std::invalid_argument otherwise.
FunctionalKind parse_kind(const std::string& name);

}  // namespace tentlab

#endif  // TENTLAB_CONFIG_HPP
