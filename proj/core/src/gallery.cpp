#include "packdim/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "packdim/brownian.hpp"
#include "packdim/error.hpp"

namespace packdim {

namespace {

void left_right_ends(std::span<const double> ratios, std::span<double> offsets) {
  offsets[0] = 0.0;
  offsets[1] = 1.0 - ratios[1];
}

}  // namespace

ExampleLaw deterministic_cantor_law() {
  ExampleLaw ex;
  ex.name = "det-cantor";
  ex.law.name = ex.name;
  ex.law.slots = 2;
  ex.law.sampler = [](Stream&, std::span<double> out) {
    out[0] = 1.0 / 3.0;
    out[1] = 1.0 / 3.0;
  };
  ex.law.moment = [](double s) { return 2.0 * std::pow(3.0, -s); };
  ex.law.interval_osc = true;
  ex.law.placement = left_right_ends;
  ex.law.closed_form_alpha = std::log(2.0) / std::log(3.0);
  ex.oracles.t1_cdf = [](double x) { return x > 1.0 / 3.0 ? 1.0 : 0.0; };
  ex.oracles.moment = ex.law.moment;
  ex.oracles.alpha = ex.law.closed_form_alpha;
  ex.oracles.extinction = 0.0;
  ex.oracles.provenance = {"moment: 2 * 3^-s for constant ratios 1/3", "alpha: log 2 / log 3"};
  return ex;
}

ExampleLaw random_cantor_law() {
  ExampleLaw ex;
  ex.name = "rand-cantor";
  ex.law.name = ex.name;
  ex.law.slots = 2;
  ex.law.sampler = [](Stream& stream, std::span<double> out) {
    const double u = stream.uniform(), v = stream.uniform();
    out[0] = std::min(u, v);
    out[1] = 1.0 - std::max(u, v);
  };
  ex.law.moment = [](double s) { return 4.0 / ((s + 1.0) * (s + 2.0)); };
  ex.law.interval_osc = true;
  ex.law.placement = left_right_ends;
  ex.law.closed_form_alpha = (std::sqrt(17.0) - 3.0) / 2.0;
  ex.oracles.t1_cdf = [](double x) {
    x = std::clamp(x, 0.0, 1.0);
    return 2.0 * x - x * x;
  };
  ex.oracles.density = [](double u, double v) { return (u > 0.0 && v > 0.0 && u + v < 1.0) ? 2.0 : 0.0; };
  ex.oracles.moment = ex.law.moment;
  ex.oracles.alpha = ex.law.closed_form_alpha;
  ex.oracles.extinction = 0.0;
  ex.oracles.provenance = {"density: 2 on the triangle u, v > 0, u + v < 1",
                           "t1_cdf: 2x - x^2 from the marginal density 2(1 - t)",
                           "moment: 4 / ((s+1)(s+2)), twice int t^s 2(1-t) dt",
                           "alpha: root of s^2 + 3s - 2 = 0, (sqrt 17 - 3)/2"};
  return ex;
}

ExampleLaw brownian_bridge_law(BridgeMode mode, std::size_t grid_n) {
  ExampleLaw ex;
  ex.law.slots = 2;
  ex.law.interval_osc = true;
  ex.law.placement = left_right_ends;
  if (mode == BridgeMode::kDensityRejection) {
    ex.name = "bb-zero-density";
    ex.law.sampler = [](Stream& stream, std::span<double> out) {
      const auto [a, b] = sample_bridge_density(stream);
      out[0] = a;
      out[1] = b;
    };
  } else {
    if (grid_n < (std::size_t{1} << 14)) throw ConfigError("bb-zero-path needs grid_n >= 16384");
    if ((grid_n & (grid_n - 1)) != 0) throw ConfigError("bb-zero-path needs grid_n to be a power of two");
    ex.name = "bb-zero-path";
    BridgePathOptions options;
    options.grid_n = grid_n;
    ex.law.sampler = [options](Stream& stream, std::span<double> out) {
      const auto [a, b] = sample_bridge_ratios_path(stream, options);
      out[0] = a;
      out[1] = b;
    };
  }
  ex.law.name = ex.name;
  ex.oracles.t1_cdf = bridge_t1_cdf;
  ex.oracles.density = bridge_density;
  ex.oracles.alpha = 0.5;
  ex.oracles.extinction = 0.0;
  ex.oracles.provenance = {"density: (1/2pi) (uv)^-1/2 (1-u-v)^-3/2 on [0,1/2]^2",
                           "t1_cdf: (2/pi) arcsin sqrt(x/(1-x)), from the time change t -> t/(1-t)",
                           "alpha: 1/2, the dimension of Brownian zeros"};
  return ex;
}

double bernoulli_extinction_probability(double p) {
  // q = (1 - p + p q)^2 has roots 1 and ((1-p)/p)^2.
  if (p <= 0.0) return 1.0;
  const double r = (1.0 - p) / p;
  return std::min(1.0, r * r);
}

ExampleLaw bernoulli_cantor_law(double p, double delta) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("bernoulli-cantor: p must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 0.5)) throw ConfigError("bernoulli-cantor: delta must lie in (0, 1/2]");
  ExampleLaw ex;
  std::ostringstream name;
  name.precision(17);
  name << "bernoulli-cantor(" << p << "," << delta << ")";
  ex.name = name.str();
  ex.law.name = ex.name;
  ex.law.slots = 2;
  ex.law.sampler = [p, delta](Stream& stream, std::span<double> out) {
    for (auto& t : out) t = stream.uniform() < p ? delta : 0.0;
  };
  ex.law.moment = [p, delta](double s) { return 2.0 * p * std::pow(delta, s); };
  ex.law.interval_osc = true;
  ex.law.placement = left_right_ends;
  if (2.0 * p > 1.0) ex.law.closed_form_alpha = std::log(2.0 * p) / std::log(1.0 / delta);
  ex.oracles.t1_cdf = [p, delta](double x) { return x <= 0.0 ? 0.0 : (x <= delta ? 1.0 - p : 1.0); };
  ex.oracles.moment = ex.law.moment;
  ex.oracles.alpha = ex.law.closed_form_alpha;
  ex.oracles.extinction = bernoulli_extinction_probability(p);
  ex.oracles.provenance = {"moment: 2 p delta^s", "alpha: log(2p) / log(1/delta)",
                           "extinction: smallest root of q = (1 - p + p q)^2"};
  if (2.0 * p <= 1.0) ex.warnings.push_back("subcritical: 2p <= 1, the construction dies out almost surely");
  return ex;
}

std::vector<std::string> example_law_names() {
  return {"det-cantor", "rand-cantor", "bb-zero-density", "bb-zero-path", "bernoulli-cantor(p,delta)"};
}

ExampleLaw make_example_law(const std::string& spec, std::size_t grid_n) {
  if (spec == "det-cantor") return deterministic_cantor_law();
  if (spec == "rand-cantor") return random_cantor_law();
  if (spec == "bb-zero-density") return brownian_bridge_law(BridgeMode::kDensityRejection);
  if (spec == "bb-zero-path") return brownian_bridge_law(BridgeMode::kPathSimulation, grid_n);
  static const std::regex bernoulli(R"(\s*bernoulli-cantor\s*\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*)");
  std::smatch m;
  if (std::regex_match(spec, m, bernoulli)) {
    double p = 0.0, delta = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(m[1].str(), &used);
      if (used != m[1].str().size()) throw std::invalid_argument("p");
      delta = std::stod(m[2].str(), &used);
      if (used != m[2].str().size()) throw std::invalid_argument("delta");
    } catch (const std::exception&) {
      throw ConfigError("bernoulli-cantor: cannot parse parameters in '" + spec + "'");
    }
    return bernoulli_cantor_law(p, delta);
  }
  throw ConfigError("unknown law '" + spec + "'");
}

}  // namespace packdim
