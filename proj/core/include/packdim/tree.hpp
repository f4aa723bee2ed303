#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "packdim/law.hpp"
#include "packdim/random.hpp"

namespace packdim {

/// Alive nodes of one generation, stored column-wise. Node j of level k has
/// parent `parent[j]` in level k-1, occupies slot `slot[j]` (1-based) of that
/// parent, and has ratio T = ratio[j] and diameter l = length[j].
struct TreeLevel {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> slot;
  std::vector<double> ratio;
  std::vector<double> length;

  std::size_t size() const { return length.size(); }
};

/// A depth-limited realization of the code tree. Only alive nodes (l > 0)
/// are recorded; a child with T = 0 leaves no record.
class TreeRealization {
 public:
  TreeRealization(std::vector<TreeLevel> levels, std::size_t slots, StreamId source);

  /// Number of generations below the root.
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  std::size_t slots() const { return slots_; }
  const TreeLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  std::size_t node_count() const;
  bool extinct() const { return levels_.back().size() == 0; }
  const StreamId& source() const { return source_; }

  /// Code word of node `index` at level k.
  CodePoint code(int k, std::size_t index) const;

  /// sum over alive nodes of level k of l^alpha.
  double level_sum(int k, double alpha) const;

  /// CSV with header "code,depth,T,l,alive", one row per recorded node.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<TreeLevel> levels_;
  std::size_t slots_;
  StreamId source_;
};

struct GrowOptions {
  std::size_t node_cap = 10'000'000;
};

/// Samples the construction breadth-first down to `depth`. Each alive node
/// consumes exactly one offspring vector from `stream`, in level order.
TreeRealization grow_tree(const ReductionLaw& law, int depth, Stream& stream, const GrowOptions& options = {});

/// Fraction of `samples` realizations with no alive node at `depth`.
/// Realization i uses stream (seed, kExtinction, i), so the estimate is
/// nondecreasing in depth for a fixed seed.
double estimate_extinction(const ReductionLaw& law, std::size_t samples, int depth, std::uint64_t seed,
                           unsigned jobs = 1, const GrowOptions& options = {});

}  // namespace packdim
