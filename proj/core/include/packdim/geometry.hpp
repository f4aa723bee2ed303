#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packdim/gauge.hpp"
#include "packdim/law.hpp"
#include "packdim/random.hpp"
#include "packdim/stats.hpp"

namespace packdim {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Depth-k approximant of K: the alive level-k intervals, sorted by lo.
struct RealizedSet {
  std::vector<Interval> intervals;
  int depth = 0;
  StreamId source;

  double total_length() const;
  double min_length() const;
};

enum class Placement { kLeftRightEnds, kConfigured };

const char* to_string(Placement placement);

/// Places children inside their parent. kLeftRightEnds puts child 1 at the
/// left end, the last child at the right end, and any middle children
/// packed after child 1. kConfigured uses the law's placement rule.
/// Throws GeometryError on overlapping or escaping children.
RealizedSet realize(const ReductionLaw& law, Placement placement, int depth, Stream& stream);

struct BoxCountPoint {
  double epsilon = 0.0;
  std::size_t boxes = 0;
  bool excluded = false;
};

struct BoxCountResult {
  std::vector<BoxCountPoint> points;
  /// Fit of log N against log(1/epsilon) over the non-excluded points.
  std::optional<LinearFit> fit;
  std::vector<std::string> warnings;
};

/// Number of dyadic boxes [j eps, (j+1) eps) meeting the set.
std::size_t count_boxes(const RealizedSet& set, double epsilon);

/// Counts for every epsilon; values below the smallest interval length are
/// excluded with a warning.
BoxCountResult box_count(const RealizedSet& set, std::span<const double> epsilons);

/// Largest number of points of the set with pairwise distance >= 2r, chosen
/// greedily from the left.
std::size_t greedy_packing_count(const RealizedSet& set, double r);

struct PackingProbePoint {
  double r = 0.0;
  std::size_t count = 0;
  /// phi(2r) * count.
  double value = 0.0;
  bool excluded = false;
};

/// phi(2r) times the greedy packing count; a finite-depth probe, not a
/// packing measure.
PackingProbePoint gauge_packing_count(const RealizedSet& set, const GaugeSpec& gauge, double r);

std::vector<PackingProbePoint> gauge_packing_profile(const RealizedSet& set, const GaugeSpec& gauge,
                                                     std::span<const double> radii);

}  // namespace packdim
