#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "packdim/error.hpp"
#include "packdim/gallery.hpp"
#include "packdim/geometry.hpp"

using namespace packdim;

namespace {

RealizedSet make_set(std::vector<Interval> intervals) {
  RealizedSet s;
  s.intervals = std::move(intervals);
  return s;
}

// Longest chain of candidate points lo_i + 2r m inside the set with gaps >= 2r.
std::size_t packing_oracle(const RealizedSet& set, double r) {
  std::vector<double> pts;
  for (const auto& a : set.intervals) {
    for (const auto& b : set.intervals) {
      if (b.lo > a.hi) break;
      for (double x = b.lo; x <= a.hi; x += 2 * r) {
        if (x >= a.lo) pts.push_back(x);
        if (pts.size() > 20000) break;
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<std::size_t> best(pts.size(), 1);
  std::size_t top = pts.empty() ? 0 : 1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (pts[i] - pts[j] >= 2 * r * (1 - 1e-12)) best[i] = std::max(best[i], best[j] + 1);
    }
    top = std::max(top, best[i]);
  }
  return top;
}

ReductionLaw fixed_law(double a, double b) {
  ReductionLaw law;
  law.name = "fixed";
  law.slots = 2;
  law.interval_osc = true;
  law.sampler = [a, b](Stream&, std::span<double> out) {
    out[0] = a;
    out[1] = b;
  };
  return law;
}

}  // namespace

TEST_CASE("deterministic Cantor depth-2 intervals") {
  Stream s(1);
  const auto set = realize(deterministic_cantor_law().law, Placement::kLeftRightEnds, 2, s);
  REQUIRE(set.intervals.size() == 4);
  const double lo[] = {0.0, 2.0 / 9, 6.0 / 9, 8.0 / 9};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(set.intervals[i].lo == doctest::Approx(lo[i]).epsilon(1e-14));
    CHECK(set.intervals[i].length() == doctest::Approx(1.0 / 9).epsilon(1e-14));
  }
  CHECK(set.total_length() == doctest::Approx(4.0 / 9));
}

TEST_CASE("random Cantor realization is nested, sorted and disjoint") {
  const auto ex = random_cantor_law();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Stream s(seed);
    const auto d1 = realize(ex.law, Placement::kLeftRightEnds, 1, s);
    REQUIRE(d1.intervals.size() == 2);
    CHECK(d1.intervals[0].lo == 0.0);
    CHECK(d1.intervals[1].hi == doctest::Approx(1.0));
    Stream s2(seed);
    const auto d6 = realize(ex.law, Placement::kLeftRightEnds, 6, s2);
    REQUIRE(d6.intervals.size() == 64);
    double sum = 0.0;
    for (std::size_t i = 0; i < d6.intervals.size(); ++i) {
      const auto& iv = d6.intervals[i];
      sum += iv.length();
      CHECK(iv.length() > 0.0);
      if (i) CHECK(iv.lo >= d6.intervals[i - 1].hi);
      const bool inside = std::any_of(d1.intervals.begin(), d1.intervals.end(), [&](const Interval& p) {
        return iv.lo >= p.lo - 1e-15 && iv.hi <= p.hi + 1e-15;
      });
      CHECK(inside);
    }
    CHECK(d6.total_length() == doctest::Approx(sum));
    CHECK(d6.min_length() <= d6.intervals.front().length());
  }
}

TEST_CASE("overlapping children are rejected") {
  Stream s(1);
  CHECK_THROWS_AS(realize(fixed_law(0.6, 0.6), Placement::kLeftRightEnds, 2, s), GeometryError);
}

TEST_CASE("box counting") {
  SUBCASE("deterministic Cantor slope") {
    Stream s(1);
    const auto set = realize(deterministic_cantor_law().law, Placement::kLeftRightEnds, 12, s);
    std::vector<double> eps;
    for (int k = 5; k <= 15; ++k) eps.push_back(std::ldexp(1.0, -k));
    const auto r = box_count(set, eps);
    REQUIRE(r.fit);
    CHECK(r.fit->slope == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(0.02 / 0.63));
    CHECK(r.warnings.empty());
  }
  SUBCASE("the halving law fills the interval and has slope one") {
    Stream s(4);
    const auto set = realize(fixed_law(0.5, 0.5), Placement::kLeftRightEnds, 12, s);
    std::vector<double> eps;
    for (int k = 2; k <= 12; ++k) eps.push_back(std::ldexp(1.0, -k));
    const auto r = box_count(set, eps);
    REQUIRE(r.fit);
    CHECK(r.fit->slope == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("counts do not increase with epsilon and add over separated pieces") {
    Stream s(2);
    const auto set = realize(deterministic_cantor_law().law, Placement::kLeftRightEnds, 8, s);
    std::vector<Interval> left, right;
    for (const auto& iv : set.intervals) (iv.hi <= 0.5 ? left : right).push_back(iv);
    std::size_t prev = count_boxes(set, std::ldexp(1.0, -14));
    for (int k = 13; k >= 0; --k) {
      const double e = std::ldexp(1.0, -k);
      const std::size_t n = count_boxes(set, e);
      CHECK(n <= prev);
      prev = n;
      if (k >= 2) CHECK(n == count_boxes(make_set(left), e) + count_boxes(make_set(right), e));
    }
  }
  SUBCASE("scales below the resolution are excluded with a warning") {
    Stream s(3);
    const auto set = realize(deterministic_cantor_law().law, Placement::kLeftRightEnds, 4, s);
    const std::vector<double> eps{0.1, 1e-4};
    const auto r = box_count(set, eps);
    CHECK_FALSE(r.points[0].excluded);
    CHECK(r.points[1].excluded);
    CHECK_FALSE(r.warnings.empty());
  }
}

TEST_CASE("greedy packing is optimal") {
  const auto ex = random_cantor_law();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Stream s(seed);
    const auto set = realize(ex.law, Placement::kLeftRightEnds, 5, s);
    for (double r : {0.2, 0.05, 0.01, 0.003}) {
      CAPTURE(seed);
      CAPTURE(r);
      CHECK(greedy_packing_count(set, r) == packing_oracle(set, r));
    }
  }
  const auto two = make_set({{0.0, 0.1}, {0.15, 0.3}});
  CHECK(greedy_packing_count(two, 0.05) == packing_oracle(two, 0.05));
}

TEST_CASE("gauge packing probe") {
  SUBCASE("unit interval with phi(t) = t gives about one") {
    Stream s(5);
    const auto set = realize(fixed_law(0.5, 0.5), Placement::kLeftRightEnds, 12, s);
    for (double r : {0.01, 0.001}) {
      CHECK(gauge_packing_count(set, GaugeSpec::constant(1.0, 1.0), r).value == doctest::Approx(1.0).epsilon(0.03));
    }
  }
  SUBCASE("deterministic Cantor probe stays within a factor four") {
    Stream s(1);
    const double alpha = std::log(2.0) / std::log(3.0);
    const auto set = realize(deterministic_cantor_law().law, Placement::kLeftRightEnds, 14, s);
    std::vector<double> radii;
    for (int k = 6; k <= 10; ++k) radii.push_back(std::ldexp(1.0, -k));
    const auto prof = gauge_packing_profile(set, GaugeSpec::constant(alpha, 1.0), radii);
    double lo = 1e300, hi = 0.0;
    for (const auto& p : prof) {
      CHECK_FALSE(p.excluded);
      lo = std::min(lo, p.value);
      hi = std::max(hi, p.value);
    }
    CHECK(hi / lo <= 4.0);
  }
}
