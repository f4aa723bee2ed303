#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace packdim {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

/// Welford accumulator.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two observations.
  double variance() const;
  double std_error() const;
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

/// Wilson score interval for a binomial proportion.
ConfidenceInterval wilson_interval(std::size_t hits, std::size_t trials, double z = kZ95);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x. Requires >= 2 points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value at significance `level`.
double ks_critical(std::size_t n, std::size_t m, double level);

/// sup_x |F_n(x) - cdf(x)| for a continuous reference cdf.
double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Upper tail probability of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

}  // namespace packdim
