#include "packdim/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "packdim/error.hpp"
#include "packdim/stats.hpp"

namespace packdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

std::string number(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(GaugeFamily family) {
  switch (family) {
    case GaugeFamily::kConstant:
      return "constant";
    case GaugeFamily::kLogLogPower:
      return "loglog-power";
    case GaugeFamily::kLogPower:
      return "log-power";
    case GaugeFamily::kTabulated:
      return "tabulated";
  }
  return "constant";
}

std::optional<GaugeFamily> parse_gauge_family(const std::string& text) {
  for (auto f : {GaugeFamily::kConstant, GaugeFamily::kLogLogPower, GaugeFamily::kLogPower, GaugeFamily::kTabulated}) {
    if (text == to_string(f)) return f;
  }
  return std::nullopt;
}

GaugeSpec GaugeSpec::constant(double alpha, double c) {
  if (!(c >= 0.0)) throw ConfigError("constant gauge needs c >= 0");
  return GaugeSpec(GaugeFamily::kConstant, alpha, c);
}

GaugeSpec GaugeSpec::loglog_power(double alpha, double theta) {
  return GaugeSpec(GaugeFamily::kLogLogPower, alpha, theta);
}

GaugeSpec GaugeSpec::log_power(double alpha, double theta) {
  return GaugeSpec(GaugeFamily::kLogPower, alpha, theta);
}

GaugeSpec GaugeSpec::tabulated(double alpha, std::vector<double> t, std::vector<double> g) {
  if (t.size() != g.size() || t.size() < 2) throw ConfigError("tabulated gauge needs >= 2 (t, g) pairs");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(g[i] >= 0.0)) throw ConfigError("tabulated gauge needs t > 0 and g >= 0");
    if (i > 0 && !(t[i] > t[i - 1])) throw ConfigError("tabulated gauge needs strictly increasing t");
  }
  GaugeSpec spec(GaugeFamily::kTabulated, alpha, 0.0);
  spec.table_t_ = std::move(t);
  spec.table_g_ = std::move(g);
  return spec;
}

double GaugeSpec::t_min() const {
  return family_ == GaugeFamily::kTabulated ? table_t_.front() : 0.0;
}

double GaugeSpec::t_max() const {
  switch (family_) {
    case GaugeFamily::kConstant:
      return kInf;
    case GaugeFamily::kTabulated:
      return table_t_.back();
    default:
      return 1.0;
  }
}

double GaugeSpec::log_g(double log_t) const {
  switch (family_) {
    case GaugeFamily::kConstant:
      return std::log(parameter_);
    case GaugeFamily::kLogLogPower: {
      if (!(log_t < 0.0)) throw DomainError("loglog-power gauge is defined for 0 < t < 1");
      const double inner = std::abs(std::log(-log_t));
      if (parameter_ == 0.0) return 0.0;
      return parameter_ * std::log(inner);
    }
    case GaugeFamily::kLogPower:
      if (!(log_t < 0.0)) throw DomainError("log-power gauge is defined for 0 < t < 1");
      return -parameter_ * std::log(-log_t);
    case GaugeFamily::kTabulated: {
      const double lo = std::log(table_t_.front()), hi = std::log(table_t_.back());
      if (log_t < lo || log_t > hi) {
        throw DomainError("t = exp(" + number(log_t) + ") outside tabulated range [" + number(table_t_.front()) +
                          ", " + number(table_t_.back()) + "]");
      }
      const auto it = std::lower_bound(table_t_.begin(), table_t_.end(), std::exp(log_t));
      std::size_t j = static_cast<std::size_t>(it - table_t_.begin());
      if (j == 0) return std::log(table_g_.front());
      if (j >= table_t_.size()) return std::log(table_g_.back());
      const double x0 = std::log(table_t_[j - 1]), x1 = std::log(table_t_[j]);
      const double w = (log_t - x0) / (x1 - x0);
      return std::log(table_g_[j - 1] + w * (table_g_[j] - table_g_[j - 1]));
    }
  }
  return 0.0;
}

double GaugeSpec::g(double t) const {
  if (!(t > 0.0)) throw DomainError("gauge evaluated at t <= 0");
  if (t >= t_max() && family_ != GaugeFamily::kTabulated) throw DomainError("gauge evaluated at t >= t_max");
  return std::exp(log_g(std::log(t)));
}

double GaugeSpec::phi(double t) const {
  return std::pow(t, alpha_) * g(t);
}

double GaugeSpec::log_phi(double log_t) const {
  return alpha_ * log_t + log_g(log_t);
}

std::optional<double> GaugeSpec::log_g_at_log_u(double log_u) const {
  switch (family_) {
    case GaugeFamily::kConstant:
      return std::log(parameter_);
    case GaugeFamily::kLogLogPower:
      return parameter_ == 0.0 ? 0.0 : parameter_ * std::log(std::abs(log_u));
    case GaugeFamily::kLogPower:
      return -parameter_ * log_u;
    case GaugeFamily::kTabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string GaugeSpec::formula() const {
  const std::string head = "t^" + number(alpha_);
  switch (family_) {
    case GaugeFamily::kConstant:
      return number(parameter_) + " " + head;
    case GaugeFamily::kLogLogPower:
      return head + " |log|log t||^" + number(parameter_);
    case GaugeFamily::kLogPower:
      return head + " (log(1/t))^-" + number(parameter_);
    case GaugeFamily::kTabulated:
      return head + " g_tab(t) [" + std::to_string(table_t_.size()) + " points]";
  }
  return head;
}

double eval_gauge(const GaugeSpec& gauge, double t) { return gauge.phi(t); }

GaugeCheck check_gauge(const GaugeSpec& gauge) {
  std::vector<double> values;
  for (int k = 8; k <= 60; ++k) {
    const double t = std::ldexp(1.0, -k);
    if (t <= gauge.t_min() || t >= gauge.t_max()) continue;
    values.push_back(gauge.phi(t));
  }
  GaugeCheck check;
  if (values.size() < 2) return check;
  check.nondecreasing = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] * (1.0 + 1e-12)) check.nondecreasing = false;
  }
  check.vanishes_at_zero = values.back() <= 1e-3 * values.front();
  return check;
}

const char* to_string(IntegralOutcome outcome) {
  return outcome == IntegralOutcome::kDiverges ? "diverges" : "converges";
}

IntegralTestResult integral_test(const GaugeSpec& gauge, double beta) {
  if (!(beta > 0.0)) throw ContractError("integral_test: beta must be positive");
  const double power = beta + 1.0;
  IntegralTestResult r;
  switch (gauge.family()) {
    case GaugeFamily::kConstant:
      r.outcome = gauge.parameter() > 0.0 ? IntegralOutcome::kDiverges : IntegralOutcome::kConverges;
      r.method = "closed-form: u = log(1/s) turns the integral into int^inf c^(beta+1) du";
      return r;
    case GaugeFamily::kLogLogPower:
      r.outcome = IntegralOutcome::kDiverges;
      r.method = "closed-form: u = log(1/s) gives int^inf (log u)^(theta(beta+1)) du, infinite for every theta";
      return r;
    case GaugeFamily::kLogPower:
      r.outcome = gauge.parameter() * power > 1.0 ? IntegralOutcome::kConverges : IntegralOutcome::kDiverges;
      r.method = "closed-form: u = log(1/s) gives int^inf u^(-theta(beta+1)) du, finite iff theta(beta+1) > 1";
      return r;
    case GaugeFamily::kTabulated:
      return integral_test_numeric(gauge, beta);
  }
  return r;
}

namespace {

double logsumexp(std::initializer_list<double> xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

IntegralTestResult integral_test_numeric(const GaugeSpec& gauge, double beta) {
  if (!(beta > 0.0)) throw ContractError("integral_test: beta must be positive");
  const double power = beta + 1.0;

  // log g(e^{-u}) as a function of log u.
  std::function<double(double)> log_g_u;
  std::string source;
  if (gauge.family() == GaugeFamily::kTabulated) {
    std::vector<double> x, y;
    bool any_zero = false;
    for (std::size_t i = 0; i < gauge.table_t().size(); ++i) {
      const double t = gauge.table_t()[i];
      if (t > 1e-4 || t >= 1.0) continue;
      if (gauge.table_g()[i] <= 0.0) {
        any_zero = true;
        continue;
      }
      x.push_back(std::log(-std::log(t)));
      y.push_back(std::log(gauge.table_g()[i]));
    }
    if (x.size() + (any_zero ? 1 : 0) < 4) {
      throw UndeterminedIntegralError("tabulated gauge has fewer than 4 points with t <= 1e-4");
    }
    if (x.size() < 2) {
      log_g_u = [](double) { return -kInf; };
    } else {
      const LinearFit fit = fit_line(x, y);
      log_g_u = [fit](double lu) { return fit.intercept + fit.slope * lu; };
    }
    source = "power-of-log(1/s) extrapolation of the table";
  } else {
    log_g_u = [&gauge](double lu) { return *gauge.log_g_at_log_u(lu); };
    source = "analytic g evaluated in log space";
  }

  constexpr int kTerms = 200;
  constexpr int kWindow = 10;
  constexpr double kSlack = 0.9;
  std::vector<double> log_d(kTerms + 1);
  for (int j = 1; j <= kTerms; ++j) {
    // Octave m = 2^(2^j) covers u in [m ln2, (m+1) ln2]; Simpson with 3 nodes.
    const double log_m = std::ldexp(kLn2, j);
    const double inv_m = std::exp(-log_m);
    const double base = log_m + std::log(kLn2);
    const double f0 = power * log_g_u(base);
    const double f1 = power * log_g_u(base + std::log1p(0.5 * inv_m));
    const double f2 = power * log_g_u(base + std::log1p(inv_m));
    const double log_integral = std::log(kLn2 / 6.0) + logsumexp({f0, std::log(4.0) + f1, f2});
    log_d[static_cast<std::size_t>(j)] = j * kLn2 + log_m + log_integral;
  }
  bool diverges = false;
  for (int j = kTerms - kWindow; j < kTerms; ++j) {
    const double a = log_d[static_cast<std::size_t>(j)], b = log_d[static_cast<std::size_t>(j + 1)];
    if (b == -kInf) continue;
    if (a == -kInf || b - a > std::log(kSlack)) diverges = true;
  }
  IntegralTestResult r;
  r.outcome = diverges ? IntegralOutcome::kDiverges : IntegralOutcome::kConverges;
  r.method = "numeric: doubly condensed dyadic-octave partial integrals, ratio test with slack 0.9 over the last 10 "
             "terms (" + source + ")";
  return r;
}

}  // namespace packdim
