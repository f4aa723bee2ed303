#pragma once

#include <cstdint>
#include <random>

namespace packdim {

/// Identifies the pipeline stage a stream belongs to. Together with the root
/// seed and a per-sample index this fully determines the stream.
enum class StreamStage : std::uint64_t {
  kGeneric = 0,
  kMoment = 1,
  kMartingale = 2,
  kSpine = 3,
  kExtinction = 4,
  kGeometry = 5,
  kAssumption = 6,
  kFixedPoint = 7,
  kLawCheck = 8,
};

struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t stage = 0;
  std::uint64_t index = 0;

  friend bool operator==(const StreamId&, const StreamId&) = default;
};

/// Deterministic pseudo-random stream.
///
/// The engine is a mt19937_64 seeded through std::seed_seq with the five
/// 32-bit words (seed_lo, seed_hi, stage, index_lo, index_hi). Both the
/// engine and seed_seq are fully specified by the standard, so a
/// (seed, stage, index) triple names the same stream on every platform.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : Stream(StreamId{seed, 0, 0}) {}
  Stream(std::uint64_t seed, StreamStage stage, std::uint64_t index)
      : Stream(StreamId{seed, static_cast<std::uint64_t>(stage), index}) {}
  explicit Stream(StreamId id);

  const StreamId& id() const { return id_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open();
  double normal() { return normal_(engine_); }
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// Beta(a, b) via two gamma draws.
  double beta(double a, double b);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  StreamId id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace packdim
