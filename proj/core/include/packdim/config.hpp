#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "packdim/gauge.hpp"
#include "packdim/martingale.hpp"

namespace packdim {

struct LawConfig {
  std::string name;
  std::size_t grid_n = std::size_t{1} << 14;
};

struct AlphaConfig {
  double tol = 0.0;
  std::size_t mc_samples = 1'000'000;
  bool force_monte_carlo = false;
};

struct MartingaleConfig {
  std::size_t samples = 100'000;
  TruncationMode mode = TruncationMode::kAdaptive;
  int depth = 60;
  double eps_rel = 3e-3;
  double heavy_threshold = 0.05;
};

struct SmallBallConfig {
  double grid_lo = 1e-2;
  double grid_hi = 0.6;
  int per_decade = 8;
  std::size_t min_hits = 30;
  bool exclude_low_confidence = true;
  double fit_lo = 0.1;
  double fit_hi = 0.6;
  double r2_threshold = 0.98;
  std::size_t min_points = 5;
};

struct GaugeConfig {
  GaugeFamily family = GaugeFamily::kLogLogPower;
  /// Unset means "use the fitted beta".
  std::optional<double> theta;
  double c = 1.0;
  std::vector<double> table_t;
  std::vector<double> table_g;
};

struct SpineConfig {
  bool enabled = false;
  std::size_t spines = 10'000;
  int depth = 40;
  int child_mart_depth = 12;
  double child_eps_rel = 1e-2;
};

struct EventsConfig {
  double C = 2.0;
  double rho = 0.5;
  int s0 = 0;
  std::string R = "trivial";
  double R_parameter = 0.0;
  double p0_hat = 1.0;
  std::size_t p0_samples = 100'000;
  GaugeConfig gauge{GaugeFamily::kConstant, std::nullopt, 1.0, {}, {}};
};

struct BoxCountConfig {
  bool enabled = false;
  std::size_t realizations = 50;
  int depth = 18;
  /// epsilon = 2^-k for k in [eps_min_exp, eps_max_exp].
  int eps_min_exp = 4;
  int eps_max_exp = 15;
};

struct RunConfig {
  LawConfig law;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string output_dir = "packdim-out";
  AlphaConfig alpha;
  MartingaleConfig martingale;
  SmallBallConfig smallball;
  GaugeConfig gauge;
  SpineConfig spine;
  EventsConfig events;
  BoxCountConfig boxcount;
};

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return config.has_value(); }
};

/// Parses and range-checks a JSON config. "law" and "seed" are required;
/// everything else has a default. All problems are reported together.
ConfigResult validate_config(const std::string& text);

/// Reads a file and validates it; throws ConfigError listing every problem.
RunConfig load_config(const std::string& path);

/// The config with every default filled in, as pretty-printed JSON.
std::string expand_config(const RunConfig& config);

/// Builds the gauge; an unset theta takes `fitted_beta`, and ContractError
/// is thrown when neither is available.
GaugeSpec build_gauge(const GaugeConfig& config, double alpha, std::optional<double> fitted_beta);

}  // namespace packdim
