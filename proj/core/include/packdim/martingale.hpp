#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "packdim/law.hpp"
#include "packdim/random.hpp"

namespace packdim {

enum class TruncationMode { kFixedDepth, kAdaptive };

const char* to_string(TruncationMode mode);

struct MartingaleOptions {
  TruncationMode mode = TruncationMode::kAdaptive;
  /// Exact depth in fixed mode; depth cap in adaptive mode.
  int depth = 60;
  /// Adaptive mode freezes a node once its weight l^alpha drops below
  /// eps_rel times the previous level sum.
  double eps_rel = 3e-3;
  /// Adaptive samples that hit the cap with more unresolved mass than this
  /// are flagged low-confidence.
  double heavy_threshold = 0.05;
  /// Generations expanded unconditionally before freezing may start.
  int min_expand_depth = 0;
  std::size_t node_cap = 10'000'000;
};

/// One truncated draw of the limit X = lim sum_{|tau| = k} l_tau^alpha.
struct MartingaleEstimate {
  double value = 0.0;
  int depth_used = 0;
  /// Weight of frontier nodes cut off by the depth limit rather than
  /// resolved by the adaptive threshold. In fixed mode this is the whole
  /// level sum.
  double frontier_mass = 0.0;
  TruncationMode mode = TruncationMode::kAdaptive;
  bool low_confidence = false;
  /// Offspring vectors drawn.
  std::size_t expanded = 0;
};

/// Collects the offspring vectors of the first `generations` levels of a
/// simulated subtree, in breadth-first order.
struct VectorCapture {
  int generations = 0;
  std::vector<std::vector<double>> vectors;
  /// vectors.size() after each captured generation.
  std::vector<std::size_t> generation_end;
};

/// Simulates one truncated martingale sample.
///
/// Fixed mode returns the level sum at `depth`. Adaptive mode expands level
/// by level; a child whose weight falls below eps_rel * S (S the previous
/// level sum) is frozen and contributes its weight unchanged, which keeps
/// E[value] = 1. The run stops when no unfrozen node remains or at the cap.
MartingaleEstimate simulate_X(const ReductionLaw& law, double alpha, const MartingaleOptions& options,
                              Stream& stream, VectorCapture* capture = nullptr);

/// `samples` independent draws; draw i uses stream (seed, kMartingale, i).
std::vector<MartingaleEstimate> simulate_X_ensemble(const ReductionLaw& law, double alpha,
                                                    const MartingaleOptions& options, std::size_t samples,
                                                    std::uint64_t seed, unsigned jobs = 1);

/// X' = sum_i T_i^alpha X_i with fresh T and X_i resampled from `pool`.
/// Used to check the distributional fixed point of X.
std::vector<double> fixed_point_resample(const ReductionLaw& law, double alpha, std::span<const double> pool,
                                         std::size_t samples, std::uint64_t seed);

}  // namespace packdim
