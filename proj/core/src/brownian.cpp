#include "packdim/brownian.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "packdim/error.hpp"

namespace packdim {

double bridge_density(double u, double v) {
  if (u <= 0.0 || v <= 0.0 || u > 0.5 || v > 0.5) return 0.0;
  return 1.0 / (2.0 * std::numbers::pi) / std::sqrt(u * v) * std::pow(1.0 - u - v, -1.5);
}

double bridge_t1_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 0.5) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x / (1.0 - x)));
}

double arcsine_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

namespace {

// 20-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
constexpr std::array<double, 10> kGLx = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                         0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                         0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                         0.9931285991850949};
constexpr std::array<double, 10> kGLw = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                         0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                         0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                         0.0176140071391521};

template <class F>
double gauss_legendre(F&& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < kGLx.size(); ++i) {
    s += kGLw[i] * (f(mid - half * kGLx[i]) + f(mid + half * kGLx[i]));
  }
  return s * half;
}

}  // namespace

double bridge_sqrt_sum_cdf(double x) {
  if (x <= 0.0) return 0.0;
  const double edge = std::sqrt(0.5);
  if (x > edge) throw DomainError("bridge_sqrt_sum_cdf: x must be <= sqrt(1/2)");
  // With u = a^2, v = b^2 the density becomes (2/pi) (1 - a^2 - b^2)^(-3/2) on a + b < x.
  auto inner = [x](double a) {
    return gauss_legendre([a](double b) { return std::pow(1.0 - a * a - b * b, -1.5); }, 0.0, x - a);
  };
  return 2.0 / std::numbers::pi * gauss_legendre(inner, 0.0, x);
}

double bridge_polar_bound(double x) { return 1.0 / std::sqrt(1.0 - 0.75 * x * x) - 1.0; }

std::pair<double, double> sample_bridge_density(Stream& stream) {
  for (;;) {
    const double u = 0.5 * stream.beta(0.5, 0.25);
    const double v = 0.5 * stream.beta(0.5, 0.25);
    const double a = 0.5 - u, b = 0.5 - v;
    if (!(u > 0.0 && v > 0.0 && a > 0.0 && b > 0.0)) continue;
    const double accept = std::pow(2.0 * std::sqrt(a * b) / (a + b), 1.5);
    if (stream.uniform() < accept) return {u, v};
  }
}

namespace {

struct ZeroSearch {
  Stream& stream;
  const BridgePathOptions& options;

  double crossing_probability(double x0, double x1, double dt) const {
    if (x0 * x1 <= 0.0) return 1.0;
    return std::exp(-2.0 * x0 * x1 / dt);
  }

  // Extreme zero of the bridge inside [t0, t1] given its end values; the
  // last zero when `last`, else the first.
  std::optional<double> find(double t0, double t1, double x0, double x1, bool last) {
    const double dt = t1 - t0;
    const bool sign_change = x0 * x1 <= 0.0;
    if (!sign_change && crossing_probability(x0, x1, dt) < options.negligible) return std::nullopt;
    if (dt <= options.tolerance) {
      if (sign_change || stream.uniform() < crossing_probability(x0, x1, dt)) return 0.5 * (t0 + t1);
      return std::nullopt;
    }
    const double tm = 0.5 * (t0 + t1);
    const double xm = 0.5 * (x0 + x1) + 0.5 * std::sqrt(dt) * stream.normal();
    if (last) {
      if (auto z = find(tm, t1, xm, x1, true)) return z;
      return find(t0, tm, x0, xm, true);
    }
    if (auto z = find(t0, tm, x0, xm, false)) return z;
    return find(tm, t1, xm, x1, false);
  }
};

}  // namespace

BridgePath sample_bridge_path(Stream& stream, const BridgePathOptions& options) {
  const std::size_t n = options.grid_n;
  if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("bridge path grid_n must be a power of two >= 2");
  const double dt = 1.0 / static_cast<double>(n);
  const double sd = std::sqrt(dt);
  BridgePath path;
  path.values.assign(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) path.values[k] = path.values[k - 1] + sd * stream.normal();
  const double end = path.values[n];
  for (std::size_t k = 0; k <= n; ++k) path.values[k] -= static_cast<double>(k) * dt * end;
  path.values[n] = 0.0;

  ZeroSearch search{stream, options};
  const std::size_t half = n / 2;
  const auto& x = path.values;
  path.tau1 = 0.0;
  for (std::size_t k = half; k > 0; --k) {
    if (auto z = search.find(static_cast<double>(k - 1) * dt, static_cast<double>(k) * dt, x[k - 1], x[k], true)) {
      path.tau1 = *z;
      break;
    }
  }
  path.tau2 = 1.0;
  for (std::size_t k = half; k < n; ++k) {
    if (auto z = search.find(static_cast<double>(k) * dt, static_cast<double>(k + 1) * dt, x[k], x[k + 1], false)) {
      path.tau2 = *z;
      break;
    }
  }
  return path;
}

std::pair<double, double> sample_bridge_ratios_path(Stream& stream, const BridgePathOptions& options) {
  const BridgePath path = sample_bridge_path(stream, options);
  return {path.tau1, 1.0 - path.tau2};
}

std::pair<double, double> sample_bridge_time_change(Stream& stream) {
  // B(t) = (1-t) W(t/(1-t)): zeros of B at t <-> zeros of W at s = t/(1-t),
  // and t = 1/2 maps to s = 1. The last zero of W before 1 is arcsine
  // distributed; the first zero after 1 is 1 + W(1)^2 / Z^2.
  const double y = std::pow(std::sin(0.5 * std::numbers::pi * stream.uniform_open()), 2);
  const double r = std::sqrt(-2.0 * std::log(stream.uniform_open())) * std::sqrt(1.0 - y);
  const double z = stream.normal();
  const double d = 1.0 + r * r / (z * z);
  return {y / (1.0 + y), 1.0 - d / (1.0 + d)};
}

}  // namespace packdim
