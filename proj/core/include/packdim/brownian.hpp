#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "packdim/random.hpp"

namespace packdim {

/// Joint density of (T1, T2) for the bridge zero set:
/// (1/2pi) (uv)^(-1/2) (1-u-v)^(-3/2) on [0, 1/2]^2, zero elsewhere.
double bridge_density(double u, double v);

/// Exact marginal CDF of T1 = last zero of the bridge before 1/2:
/// (2/pi) arcsin sqrt(x / (1 - x)) on [0, 1/2].
double bridge_t1_cdf(double x);

/// (2/pi) arcsin sqrt(x), the arcsine CDF on [0, 1].
double arcsine_cdf(double x);

/// P(sqrt(T1) + sqrt(T2) < x) by Gauss-Legendre quadrature of the joint
/// density after u = a^2, v = b^2. Valid for 0 <= x <= sqrt(1/2).
double bridge_sqrt_sum_cdf(double x);

/// 1/sqrt(1 - 3x^2/4) - 1.
double bridge_polar_bound(double x);

/// Draws (T1, T2) from bridge_density by rejection from the product
/// envelope u^(-1/2) (1/2-u)^(-3/4) v^(-1/2) (1/2-v)^(-3/4).
std::pair<double, double> sample_bridge_density(Stream& stream);

struct BridgePathOptions {
  std::size_t grid_n = std::size_t{1} << 14;
  double tolerance = 0x1p-20;
  /// Cells whose crossing probability is below this are skipped unrefined.
  double negligible = 1e-14;
};

/// A Brownian bridge on [0, 1] sampled at grid_n + 1 points, with
/// tau1 = last zero <= 1/2 and tau2 = first zero >= 1/2.
struct BridgePath {
  std::vector<double> values;
  double tau1 = 0.0;
  double tau2 = 1.0;
};

/// Simulates the bridge on a dyadic grid and locates tau1, tau2. Cells are
/// scanned outward from 1/2; a cell is refined by sampling bridge midpoints
/// when it shows a sign change or its crossing probability
/// exp(-2 x0 x1 / dt) is not negligible, down to `tolerance`.
BridgePath sample_bridge_path(Stream& stream, const BridgePathOptions& options = {});

/// (T1, T2) = (tau1, 1 - tau2) from a simulated path.
std::pair<double, double> sample_bridge_ratios_path(Stream& stream, const BridgePathOptions& options = {});

/// (T1, T2) by an exact time change of a free Brownian motion; used as an
/// independent reference sampler.
std::pair<double, double> sample_bridge_time_change(Stream& stream);

}  // namespace packdim
