#include "packdim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "packdim/error.hpp"
#include "packdim/tree.hpp"

namespace packdim {

double RealizedSet::total_length() const {
  double s = 0.0;
  for (const auto& iv : intervals) s += iv.length();
  return s;
}

double RealizedSet::min_length() const {
  double m = intervals.empty() ? 0.0 : intervals.front().length();
  for (const auto& iv : intervals) m = std::min(m, iv.length());
  return m;
}

const char* to_string(Placement placement) {
  return placement == Placement::kLeftRightEnds ? "left-right-ends" : "configured";
}

namespace {

constexpr double kSlack = 1e-12;

void place_left_right(std::span<const double> ratios, std::span<double> offsets) {
  const std::size_t n = ratios.size();
  double cursor = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    offsets[i] = cursor;
    cursor += ratios[i];
  }
  offsets[n - 1] = n == 1 ? 0.0 : 1.0 - ratios[n - 1];
}

}  // namespace

RealizedSet realize(const ReductionLaw& law, Placement placement, int depth, Stream& stream) {
  if (!law.interval_osc) throw ContractError("realize: law '" + law.name + "' is not flagged interval-OSC");
  if (placement == Placement::kConfigured && !law.placement) {
    throw ConfigError("realize: law '" + law.name + "' has no placement rule");
  }
  const StreamId source = stream.id();
  const TreeRealization tree = grow_tree(law, depth, stream);
  const std::size_t n = law.slots;

  std::vector<Interval> current{{0.0, 1.0}};
  std::vector<double> ratios(n), offsets(n);
  for (int k = 1; k <= tree.depth(); ++k) {
    const TreeLevel& lv = tree.level(k);
    std::vector<Interval> next(lv.size());
    std::size_t j = 0;
    while (j < lv.size()) {
      const std::uint32_t parent = lv.parent[j];
      std::size_t end = j;
      std::fill(ratios.begin(), ratios.end(), 0.0);
      while (end < lv.size() && lv.parent[end] == parent) {
        ratios[lv.slot[end] - 1] = lv.ratio[end];
        ++end;
      }
      double sum = 0.0;
      for (double t : ratios) sum += t;
      if (sum > 1.0 + kSlack) {
        std::ostringstream msg;
        msg << "realize: ratios of node " << tree.code(k - 1, parent).to_string() << " sum to " << sum << " > 1";
        throw GeometryError(msg.str());
      }
      if (placement == Placement::kLeftRightEnds) {
        place_left_right(ratios, offsets);
      } else {
        law.placement(ratios, offsets);
      }
      const Interval& p = current[parent];
      const double len = p.length();
      std::vector<std::pair<double, double>> kids;
      for (std::size_t q = j; q < end; ++q) {
        const std::size_t slot = lv.slot[q] - 1;
        if (offsets[slot] < -kSlack || offsets[slot] + ratios[slot] > 1.0 + kSlack) {
          throw GeometryError("realize: child escapes its parent interval");
        }
        next[q] = {p.lo + offsets[slot] * len, p.lo + offsets[slot] * len + lv.length[q]};
        kids.emplace_back(offsets[slot], offsets[slot] + ratios[slot]);
      }
      std::sort(kids.begin(), kids.end());
      for (std::size_t q = 1; q < kids.size(); ++q) {
        if (kids[q].first < kids[q - 1].second - kSlack) throw GeometryError("realize: sibling intervals overlap");
      }
      j = end;
    }
    current.swap(next);
  }
  RealizedSet set;
  set.intervals = std::move(current);
  std::sort(set.intervals.begin(), set.intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  set.depth = tree.depth();
  set.source = source;
  return set;
}

std::size_t count_boxes(const RealizedSet& set, double epsilon) {
  if (!(epsilon > 0.0)) throw ContractError("count_boxes: epsilon must be positive");
  const auto last_box = static_cast<long long>(std::ceil(1.0 / epsilon)) - 1;
  std::size_t count = 0;
  long long covered = -1;
  for (const auto& iv : set.intervals) {
    const auto lo = std::max(static_cast<long long>(std::floor(iv.lo / epsilon)), covered + 1);
    const auto hi = std::min(static_cast<long long>(std::floor(iv.hi / epsilon)), last_box);
    if (hi >= lo) {
      count += static_cast<std::size_t>(hi - lo + 1);
      covered = hi;
    }
  }
  return count;
}

BoxCountResult box_count(const RealizedSet& set, std::span<const double> epsilons) {
  BoxCountResult res;
  const double guard = set.min_length();
  std::vector<double> x, y;
  for (double eps : epsilons) {
    BoxCountPoint pt;
    pt.epsilon = eps;
    if (eps < guard) {
      pt.excluded = true;
      std::ostringstream msg;
      msg << "epsilon " << eps << " is below the smallest interval length " << guard << "; excluded";
      res.warnings.push_back(msg.str());
    } else {
      pt.boxes = count_boxes(set, eps);
      if (pt.boxes > 0) {
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(static_cast<double>(pt.boxes)));
      }
    }
    res.points.push_back(pt);
  }
  if (x.size() >= 2) res.fit = fit_line(x, y);
  return res;
}

std::size_t greedy_packing_count(const RealizedSet& set, double r) {
  if (!(r > 0.0)) throw ContractError("greedy_packing_count: r must be positive");
  std::size_t count = 0;
  double next_allowed = -std::numeric_limits<double>::infinity();
  for (const auto& iv : set.intervals) {
    double c = std::max(iv.lo, next_allowed);
    if (c > iv.hi) continue;
    const auto more = static_cast<std::size_t>(std::floor((iv.hi - c) / (2.0 * r)));
    count += more + 1;
    next_allowed = c + static_cast<double>(more) * 2.0 * r + 2.0 * r;
  }
  return count;
}

PackingProbePoint gauge_packing_count(const RealizedSet& set, const GaugeSpec& gauge, double r) {
  PackingProbePoint pt;
  pt.r = r;
  if (r < set.min_length()) {
    pt.excluded = true;
    return pt;
  }
  pt.count = greedy_packing_count(set, r);
  pt.value = gauge.phi(2.0 * r) * static_cast<double>(pt.count);
  return pt;
}

std::vector<PackingProbePoint> gauge_packing_profile(const RealizedSet& set, const GaugeSpec& gauge,
                                                     std::span<const double> radii) {
  std::vector<PackingProbePoint> out;
  for (double r : radii) out.push_back(gauge_packing_count(set, gauge, r));
  return out;
}

}  // namespace packdim
