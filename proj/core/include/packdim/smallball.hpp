#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packdim/martingale.hpp"
#include "packdim/stats.hpp"

namespace packdim {

/// `per_decade` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int per_decade);

struct SmallBallPoint {
  double a = 0.0;
  std::size_t hits = 0;
  /// P_hat(X <= a | X > 0).
  double p = 0.0;
  ConfidenceInterval ci;
  bool reliable = false;
};

/// Empirical conditional CDF of X near zero plus summary statistics of the
/// positive samples it was built from.
struct SmallBallTable {
  std::vector<SmallBallPoint> points;
  std::size_t total = 0;
  std::size_t positive = 0;
  std::size_t extinct = 0;
  std::size_t excluded_low_confidence = 0;
  double mean = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SmallBallOptions {
  /// Grid points with fewer hits are flagged unreliable.
  std::size_t min_hits = 30;
  bool exclude_low_confidence = true;
  double z = kZ95;
};

SmallBallTable smallball_cdf(std::span<const MartingaleEstimate> samples, std::span<const double> grid,
                             const SmallBallOptions& options = {});

/// Same, for raw values (no truncation metadata).
SmallBallTable smallball_cdf(std::span<const double> values, std::span<const double> grid,
                             const SmallBallOptions& options = {});

enum class DecayRegime { kDegenerate, kPolynomial, kExponential, kInconclusive };

const char* to_string(DecayRegime regime);
std::optional<DecayRegime> parse_regime(const std::string& text);

/// A straight-line fit of a transformed CDF against log a.
struct DecayFit {
  std::vector<double> a;
  std::vector<double> p;
  LinearFit line;
};

struct DecayProfile {
  DecayRegime regime = DecayRegime::kInconclusive;
  /// P(0<X<=a) ~ a^beta (polynomial) or -log P(0<X<=a) ~ a^(-1/beta)
  /// (exponential).
  std::optional<double> beta;
  std::optional<double> beta_se;
  /// min over the reliable grid of a^(1/beta) * (-log P_hat), exponential only.
  std::optional<double> t0;
  /// log P vs log a.
  std::optional<DecayFit> polynomial_fit;
  /// log(-log P) vs log a.
  std::optional<DecayFit> exponential_fit;
  std::string explanation;
};

struct ClassifyOptions {
  double r2_threshold = 0.98;
  /// Points needed to accept a regime.
  std::size_t min_points = 5;
  /// Points needed to attempt a fit at all.
  std::size_t min_fit_points = 4;
  double min_decades = 1.0;
  /// Below this sample variance the law is treated as degenerate.
  double degenerate_variance = 1e-12;
};

/// Chooses the decay regime whose linearized fit is better, subject to the
/// R^2 threshold; degenerate when X is (numerically) constant.
DecayProfile classify_decay(const SmallBallTable& table, const ClassifyOptions& options = {});

/// Power-law fit log P_hat = beta log a + c over reliable points in [a_lo, a_hi].
DecayFit fit_polynomial_decay(const SmallBallTable& table, double a_lo, double a_hi);

}  // namespace packdim
