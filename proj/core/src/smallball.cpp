#include "packdim/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "packdim/error.hpp"

namespace packdim {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw ContractError("log_grid: need 0 < lo < hi, per_decade >= 1");
  const double step = 1.0 / per_decade;
  const double span = std::log10(hi / lo);
  std::vector<double> grid;
  for (int i = 0; i * step < span - 1e-12; ++i) grid.push_back(lo * std::pow(10.0, i * step));
  grid.push_back(hi);
  return grid;
}

namespace {

SmallBallTable build_table(std::vector<double> positive, std::size_t total, std::size_t extinct,
                           std::size_t excluded, std::span<const double> grid, const SmallBallOptions& options) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || grid[i] > 1.0 || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ContractError("smallball_cdf: grid must be strictly increasing in (0, 1]");
    }
  }
  std::sort(positive.begin(), positive.end());
  SmallBallTable table;
  table.total = total;
  table.positive = positive.size();
  table.extinct = extinct;
  table.excluded_low_confidence = excluded;
  RunningStats stats;
  for (double x : positive) stats.add(x);
  table.mean = stats.mean();
  table.variance = stats.variance();
  table.min = positive.empty() ? 0.0 : stats.min();
  table.max = positive.empty() ? 0.0 : stats.max();
  for (double a : grid) {
    SmallBallPoint pt;
    pt.a = a;
    pt.hits = static_cast<std::size_t>(std::upper_bound(positive.begin(), positive.end(), a) - positive.begin());
    pt.p = positive.empty() ? 0.0 : static_cast<double>(pt.hits) / static_cast<double>(positive.size());
    pt.ci = wilson_interval(pt.hits, positive.size(), options.z);
    pt.reliable = pt.hits >= options.min_hits;
    table.points.push_back(pt);
  }
  return table;
}

}  // namespace

SmallBallTable smallball_cdf(std::span<const MartingaleEstimate> samples, std::span<const double> grid,
                             const SmallBallOptions& options) {
  std::vector<double> positive;
  positive.reserve(samples.size());
  std::size_t extinct = 0, excluded = 0;
  for (const auto& s : samples) {
    if (s.value <= 0.0) {
      ++extinct;
    } else if (options.exclude_low_confidence && s.low_confidence) {
      ++excluded;
    } else {
      positive.push_back(s.value);
    }
  }
  return build_table(std::move(positive), samples.size(), extinct, excluded, grid, options);
}

SmallBallTable smallball_cdf(std::span<const double> values, std::span<const double> grid,
                             const SmallBallOptions& options) {
  std::vector<double> positive;
  std::size_t extinct = 0;
  for (double x : values) {
    if (x > 0.0) {
      positive.push_back(x);
    } else {
      ++extinct;
    }
  }
  return build_table(std::move(positive), values.size(), extinct, 0, grid, options);
}

const char* to_string(DecayRegime regime) {
  switch (regime) {
    case DecayRegime::kDegenerate:
      return "degenerate";
    case DecayRegime::kPolynomial:
      return "polynomial";
    case DecayRegime::kExponential:
      return "exponential";
    case DecayRegime::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::optional<DecayRegime> parse_regime(const std::string& text) {
  for (auto r : {DecayRegime::kDegenerate, DecayRegime::kPolynomial, DecayRegime::kExponential,
                 DecayRegime::kInconclusive}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

namespace {

// Reliable points with 0 < P_hat < 1 inside [lo, hi].
void usable_points(const SmallBallTable& table, double lo, double hi, std::vector<double>& a,
                   std::vector<double>& p) {
  for (const auto& pt : table.points) {
    if (pt.reliable && pt.p > 0.0 && pt.p < 1.0 && pt.a >= lo && pt.a <= hi) {
      a.push_back(pt.a);
      p.push_back(pt.p);
    }
  }
}

DecayFit make_fit(const std::vector<double>& a, const std::vector<double>& p, bool exponential) {
  std::vector<double> x(a.size()), y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    x[i] = std::log(a[i]);
    y[i] = exponential ? std::log(-std::log(p[i])) : std::log(p[i]);
  }
  return DecayFit{a, p, fit_line(x, y)};
}

}  // namespace

DecayFit fit_polynomial_decay(const SmallBallTable& table, double a_lo, double a_hi) {
  std::vector<double> a, p;
  usable_points(table, a_lo, a_hi, a, p);
  if (a.size() < 2) throw ContractError("fit_polynomial_decay: fewer than 2 reliable points in range");
  return make_fit(a, p, false);
}

DecayProfile classify_decay(const SmallBallTable& table, const ClassifyOptions& options) {
  DecayProfile profile;
  if (table.positive >= 2 && (table.variance <= options.degenerate_variance || table.max - table.min <= 0.0)) {
    profile.regime = DecayRegime::kDegenerate;
    std::ostringstream msg;
    msg << "sample variance " << table.variance << " of X is below " << options.degenerate_variance
        << "; X is a.s. constant";
    profile.explanation = msg.str();
    return profile;
  }
  std::vector<double> a, p;
  usable_points(table, 0.0, 1.0, a, p);
  if (a.size() < options.min_fit_points) {
    std::ostringstream msg;
    msg << "only " << a.size() << " reliable grid points; need " << options.min_fit_points;
    profile.explanation = msg.str();
    return profile;
  }
  const double decades = std::log10(a.back() / a.front());
  if (decades < options.min_decades - 1e-9) {
    std::ostringstream msg;
    msg << "reliable points span " << decades << " decades; need " << options.min_decades;
    profile.explanation = msg.str();
    return profile;
  }
  profile.polynomial_fit = make_fit(a, p, false);
  profile.exponential_fit = make_fit(a, p, true);
  const LinearFit& poly = profile.polynomial_fit->line;
  const LinearFit& expo = profile.exponential_fit->line;

  const bool enough = a.size() >= options.min_points;
  const bool poly_ok = enough && poly.slope > 0.0 && poly.r2 >= options.r2_threshold;
  const bool expo_ok = enough && expo.slope < 0.0 && expo.r2 >= options.r2_threshold;
  std::ostringstream msg;
  msg << "polynomial fit R^2 = " << poly.r2 << ", exponential fit R^2 = " << expo.r2 << " on " << a.size()
      << " points";
  if (poly_ok && (!expo_ok || poly.r2 >= expo.r2)) {
    profile.regime = DecayRegime::kPolynomial;
    profile.beta = poly.slope;
    profile.beta_se = poly.slope_se;
  } else if (expo_ok) {
    profile.regime = DecayRegime::kExponential;
    const double beta = -1.0 / expo.slope;
    profile.beta = beta;
    profile.beta_se = expo.slope_se / (expo.slope * expo.slope);
    double t0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) t0 = std::min(t0, std::pow(a[i], 1.0 / beta) * -std::log(p[i]));
    profile.t0 = t0;
  } else {
    msg << "; neither passes R^2 >= " << options.r2_threshold << " with >= " << options.min_points << " points";
  }
  profile.explanation = msg.str();
  return profile;
}

}  // namespace packdim
