#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "packdim/law.hpp"

namespace packdim {

/// Closed-form reference values that tests check the samplers against.
struct OraclePack {
  /// P(T_1 < x).
  std::function<double(double)> t1_cdf;
  /// Joint density of (T_1, T_2).
  std::function<double(double, double)> density;
  /// E[sum T_i^s].
  std::function<double(double)> moment;
  std::optional<double> alpha;
  std::optional<double> extinction;
  /// Where each oracle comes from, one line each.
  std::vector<std::string> provenance;
};

struct ExampleLaw {
  std::string name;
  ReductionLaw law;
  OraclePack oracles;
  std::vector<std::string> warnings;
};

ExampleLaw deterministic_cantor_law();
ExampleLaw random_cantor_law();

enum class BridgeMode { kDensityRejection, kPathSimulation };

/// grid_n only matters in path mode and must be >= 2^14 there.
ExampleLaw brownian_bridge_law(BridgeMode mode, std::size_t grid_n = std::size_t{1} << 14);

/// Two slots, each independently delta with probability p, else 0.
/// p in (0, 1], delta in (0, 1/2]. 2p <= 1 adds a subcritical warning.
ExampleLaw bernoulli_cantor_law(double p, double delta);

/// Smallest root of q = (1 - p + p q)^2 in [0, 1].
double bernoulli_extinction_probability(double p);

/// Looks up det-cantor, rand-cantor, bb-zero-density, bb-zero-path or
/// bernoulli-cantor(p,delta). Throws ConfigError for unknown names.
ExampleLaw make_example_law(const std::string& spec, std::size_t grid_n = std::size_t{1} << 14);

/// Names accepted by make_example_law (without parameters).
std::vector<std::string> example_law_names();

}  // namespace packdim
