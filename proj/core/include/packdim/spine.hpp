#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packdim/gauge.hpp"
#include "packdim/law.hpp"
#include "packdim/random.hpp"
#include "packdim/stats.hpp"

namespace packdim {

/// A named condition R on the offspring vectors of the first s0 generations
/// below a node. An empty window (s0 = 0) always satisfies it.
struct RatioPredicate {
  std::string name = "trivial";
  double parameter = 0.0;
  std::function<bool(std::span<const std::vector<double>>)> test;

  bool operator()(std::span<const std::vector<double>> window) const { return !test || test(window); }

  static RatioPredicate trivial();
  /// Every entry of every vector in the window is >= c.
  static RatioPredicate min_ratio(double c);
  /// Every entry of every vector in the window is > 0.
  static RatioPredicate all_alive();
};

/// trivial, min-ratio (with parameter) or all-alive; ConfigError otherwise.
RatioPredicate make_ratio_predicate(const std::string& name, double parameter = 0.0);
std::vector<std::string> ratio_predicate_names();

struct EventParams {
  double C = 2.0;
  double rho = 0.5;
  int s0 = 0;
  RatioPredicate R = RatioPredicate::trivial();
  double p0_hat = 1.0;

  /// Throws ConfigError unless C >= 0, 0 < rho < 1, s0 >= 0, 0 < p0_hat <= 1.
  void validate() const;
};

struct SpineLevel {
  /// 1-based slot of the spine child at the parent.
  std::uint32_t child = 0;
  double T = 0.0;
  double l = 0.0;
  double x_hat = 0.0;
  /// Offspring vectors of the first `window` generations below this node,
  /// breadth-first; window_end[g] is the count through generation g + 1.
  std::vector<std::vector<double>> window;
  std::vector<std::size_t> window_end;
};

enum class EventFlag : std::int8_t { kFalse = 0, kTrue = 1, kUnevaluated = -1 };

/// One path under the size-biased measure Q. levels[k-1] is the spine node
/// at depth k for k = 1..depth + lookahead.
struct SpinePath {
  int depth = 0;
  int lookahead = 0;
  int window = 0;
  double root_x_hat = 0.0;
  std::vector<SpineLevel> levels;
  /// Offspring vectors drawn along the spine and rejected before acceptance.
  std::size_t rejections = 0;
  /// Extinct subtrees that had to be redrawn; the exact construction never
  /// needs this, but the count is kept for the audit.
  std::size_t resamples = 0;
  std::vector<EventFlag> R;
  std::vector<EventFlag> B;

  const SpineLevel& at(int k) const { return levels.at(static_cast<std::size_t>(k - 1)); }
};

struct SpineOptions {
  int depth = 40;
  /// Depth cap of the off-spine subtree estimates and length of the spine
  /// extension used to estimate X_hat at the deepest levels.
  int child_mart_depth = 12;
  double child_eps_rel = 1e-2;
  /// Generations of offspring vectors kept below each spine node (>= s0).
  int window = 0;
  /// Levels beyond depth with a recorded X_hat (>= s0).
  int lookahead = 0;
};

/// Samples one spine.
///
/// At each spine node an offspring vector T is drawn from the law together
/// with a uniform slot i, and the pair is accepted with probability T_i^alpha;
/// the accepted pair has the size-biased law and the spine moves to child i.
/// Off-spine children get independent adaptive subtree estimates. The spine
/// runs child_mart_depth levels beyond depth + lookahead, its tail estimate
/// is set to 1, and X_hat_k = T_{k+1}^alpha X_hat_{k+1} + sum_off T_j^alpha X_hat_j
/// is filled in bottom-up. Given all X_hat, child i is then the spine child
/// with probability T_i^alpha X_hat_i / sum_j T_j^alpha X_hat_j.
SpinePath sample_spine(const ReductionLaw& law, double alpha, const SpineOptions& options, Stream& stream);

/// Spine i uses stream (seed, kSpine, i).
std::vector<SpinePath> sample_spines(const ReductionLaw& law, double alpha, const SpineOptions& options,
                                     std::size_t count, std::uint64_t seed, unsigned jobs = 1);

/// B_k = [l_k^alpha X_hat_{k+s0} < C phi(rho l_k)] and R_k, for k = 1..depth,
/// stored into spine.B and spine.R. A level where phi(rho l_k) is undefined
/// is marked unevaluated. Returns spine.B.
std::vector<EventFlag> evaluate_events(SpinePath& spine, const GaugeSpec& gauge, const EventParams& params);

struct MarkovCheck {
  int i = 0;
  int j = 0;
  /// j - i - s0.
  int m = 0;
  double delta = 0.0;
  double observed = 0.0;
  ConfidenceInterval ci;
  double bound = 0.0;
  bool holds = false;
};

struct CovarianceReport {
  std::size_t spines = 0;
  int depth = 0;
  int s0 = 0;
  std::vector<int> levels;
  std::vector<double> q_hat;
  std::vector<ConfidenceInterval> q_ci;
  std::vector<std::size_t> evaluated;
  std::vector<double> partial_sums;
  /// joint[j-1][i-1] = Q_hat(B_i B_j) for i + s0 < j, negative where not estimated.
  std::vector<std::vector<double>> joint;
  /// Per j: sum_{i < j - s0} (Q_hat(B_i B_j) - Q_hat(B_i) Q_hat(B_j)).
  std::vector<double> covariance_sums;
  /// Per j: min(s0, j-1) p0 Q_hat(B_j), the near-pair allowance.
  std::vector<double> near_pair_terms;
  /// Per K: sum_{j<=K} (covariance_sums + near_pair_terms) / (partial_sums[K])^2.
  std::vector<double> bc_ratio;
  double bc_ratio_final = 0.0;

  double m1_hat = 0.0;
  double m1_se = 0.0;
  ConfidenceInterval m1_ci;
  double delta = 0.0;
  double eq_x0 = 0.0;
  std::vector<MarkovCheck> markov;
  bool markov_all_hold = true;

  double mean_t_q = 0.0;
  double mean_abs_log_t_q = 0.0;
  /// sum_{i<=depth} E_Q[T]^i.
  double tail_bound = 0.0;
  /// sum_{i<=depth} mean l_i along the spines.
  double tail_empirical = 0.0;
  /// Mean of l_k^alpha along the spines, k = 1..depth.
  std::vector<double> mean_l_alpha;

  int limsup_window_lo = 0;
  int limsup_window_hi = 0;
  double limsup_hit_fraction = 0.0;

  std::size_t resamples = 0;
  std::size_t rejections = 0;
  bool biased = false;
  std::string m2_note;
  std::vector<std::string> notes;
};

/// Borel-Cantelli statistics of a flag matrix (one row per path, one column
/// per level k = 1..D). Only the event fields of the report are filled.
CovarianceReport audit_events(std::span<const std::vector<EventFlag>> flags, int s0, double p0_hat);

struct AuditOptions {
  /// delta for the Markov check; <= 0 picks (M1_hat + 1) / 2.
  double delta = 0.0;
  /// First indices i of the tested (i, j) pairs; every j with j - i > s0 is tested.
  std::vector<int> markov_i = {1, 5, 10, 20};
};

/// Evaluates the events on every spine and fills the whole report. Throws
/// PremiseError when M1_hat >= 1 and ContractError for fewer than 2 spines
/// or mixed depths.
CovarianceReport covariance_audit(std::vector<SpinePath>& spines, const GaugeSpec& gauge, const EventParams& params,
                                  const AuditOptions& options = {});

struct P0Estimate {
  double value = 0.0;
  double std_error = 0.0;
  ConfidenceInterval ci;
  std::size_t samples = 0;
  std::size_t satisfied = 0;
  std::string warning;
};

/// Monte Carlo estimate of E[1_R sum_{|tau|=s0} prod T^alpha] over fresh
/// s0-generation subtrees; sample i uses stream (seed, kAssumption, i).
P0Estimate estimate_p0(const ReductionLaw& law, double alpha, const EventParams& params, std::size_t samples,
                       std::uint64_t seed, unsigned jobs = 1);

}  // namespace packdim
