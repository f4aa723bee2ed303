#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packdim/random.hpp"

namespace packdim {

/// Writes one offspring ratio vector (T_1, ..., T_n) into `out` (size n).
/// Zero entries are empty offspring.
using RatioSampler = std::function<void(Stream&, std::span<double>)>;

/// Closed-form m(s) = E[sum_i T_i^s], counting only nonzero T_i.
using MomentFunction = std::function<double(double)>;

/// Left endpoints of the children, relative to a parent of length 1, given
/// the sampled ratios. Used by geometry-lab for "configured" placement.
using PlacementRule = std::function<void(std::span<const double> ratios, std::span<double> offsets)>;

/// The random mechanism that shrinks a parent into its children.
struct ReductionLaw {
  std::string name;
  std::size_t slots = 0;
  RatioSampler sampler;
  MomentFunction moment;
  /// Every vector satisfies sum T_i <= 1, so children fit side by side in
  /// their parent interval.
  bool interval_osc = false;
  PlacementRule placement;
  /// Known analytic root of m(s) = 1, when the law has one.
  std::optional<double> closed_form_alpha;

  bool has_moment() const { return static_cast<bool>(moment); }

  /// Throws ConfigError when the law cannot be sampled.
  void validate() const;

  /// Draws one vector into `out`; `out.size()` must equal `slots`.
  void sample(Stream& stream, std::span<double> out) const;
};

/// Draws one offspring vector.
std::vector<double> sample_offspring(const ReductionLaw& law, Stream& stream);

/// A finite word over {1, ..., n}; the empty word is the root.
class CodePoint {
 public:
  CodePoint() = default;
  explicit CodePoint(std::vector<std::uint32_t> digits) : digits_(std::move(digits)) {}

  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  std::uint32_t operator[](std::size_t i) const { return digits_[i]; }
  const std::vector<std::uint32_t>& digits() const { return digits_; }

  /// sigma * tau.
  CodePoint concat(const CodePoint& tail) const;
  /// sigma * i.
  CodePoint child(std::uint32_t i) const;
  /// sigma|_k; throws ContractError when k > size().
  CodePoint prefix(std::size_t k) const;
  bool is_prefix_of(const CodePoint& other) const;

  /// Dot-separated digits, "-" for the root.
  std::string to_string() const;

  friend bool operator==(const CodePoint&, const CodePoint&) = default;
  friend auto operator<=>(const CodePoint&, const CodePoint&) = default;

 private:
  std::vector<std::uint32_t> digits_;
};

}  // namespace packdim
