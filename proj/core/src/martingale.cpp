#include "packdim/martingale.hpp"

#include <cmath>
#include <string>

#include "packdim/error.hpp"
#include "packdim/parallel.hpp"

namespace packdim {

const char* to_string(TruncationMode mode) {
  return mode == TruncationMode::kFixedDepth ? "fixed-depth" : "adaptive";
}

MartingaleEstimate simulate_X(const ReductionLaw& law, double alpha, const MartingaleOptions& options,
                              Stream& stream, VectorCapture* capture) {
  law.validate();
  if (!(alpha > 0.0)) throw ContractError("simulate_X: alpha must be positive");
  if (options.depth < 1) throw ContractError("simulate_X: depth must be >= 1");
  const bool adaptive = options.mode == TruncationMode::kAdaptive;

  MartingaleEstimate est;
  est.mode = options.mode;
  std::vector<double> active{1.0};
  std::vector<double> next;
  std::vector<double> buf(law.slots);
  double frozen = 0.0;
  double level_sum = 1.0;
  int k = 0;
  while (k < options.depth && !active.empty()) {
    next.clear();
    const double threshold = options.eps_rel * level_sum;
    const bool may_freeze = adaptive && k + 1 > options.min_expand_depth;
    for (double w : active) {
      law.sample(stream, buf);
      ++est.expanded;
      if (capture && k < capture->generations) capture->vectors.emplace_back(buf.begin(), buf.end());
      for (double t : buf) {
        if (t <= 0.0) continue;
        const double cw = w * std::pow(t, alpha);
        if (may_freeze && cw < threshold) {
          frozen += cw;
        } else {
          next.push_back(cw);
        }
      }
      if (next.size() > options.node_cap) {
        throw ResourceError("simulate_X: node cap of " + std::to_string(options.node_cap) + " exceeded");
      }
    }
    if (capture && k < capture->generations) capture->generation_end.push_back(capture->vectors.size());
    active.swap(next);
    ++k;
    double s = frozen;
    for (double w : active) s += w;
    level_sum = s;
  }
  double unresolved = 0.0;
  for (double w : active) unresolved += w;
  est.value = frozen + unresolved;
  est.depth_used = k;
  est.frontier_mass = unresolved;
  est.low_confidence = adaptive && !active.empty() && unresolved > options.heavy_threshold;
  return est;
}

std::vector<MartingaleEstimate> simulate_X_ensemble(const ReductionLaw& law, double alpha,
                                                    const MartingaleOptions& options, std::size_t samples,
                                                    std::uint64_t seed, unsigned jobs) {
  std::vector<MartingaleEstimate> out(samples);
  parallel_for(samples, jobs, [&](std::size_t i) {
    Stream stream(seed, StreamStage::kMartingale, i);
    out[i] = simulate_X(law, alpha, options, stream);
  });
  return out;
}

std::vector<double> fixed_point_resample(const ReductionLaw& law, double alpha, std::span<const double> pool,
                                         std::size_t samples, std::uint64_t seed) {
  if (pool.empty()) throw ContractError("fixed_point_resample: empty pool");
  Stream stream(seed, StreamStage::kFixedPoint, 0);
  std::vector<double> buf(law.slots);
  std::vector<double> out(samples);
  for (auto& x : out) {
    law.sample(stream, buf);
    double s = 0.0;
    for (double t : buf) {
      if (t > 0.0) s += std::pow(t, alpha) * pool[stream.below(pool.size())];
    }
    x = s;
  }
  return out;
}

}  // namespace packdim
