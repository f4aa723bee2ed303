#pragma once

#include <optional>
#include <string>
#include <vector>

namespace packdim {

enum class GaugeFamily { kConstant, kLogLogPower, kLogPower, kTabulated };

const char* to_string(GaugeFamily family);
std::optional<GaugeFamily> parse_gauge_family(const std::string& text);

/// A gauge phi(t) = t^alpha g(t) with g from one of four families:
///   constant       g = c
///   loglog-power   g = |log|log t||^theta
///   log-power      g = (log(1/t))^(-theta)
///   tabulated      g interpolated linearly in log t between samples
class GaugeSpec {
 public:
  static GaugeSpec constant(double alpha, double c);
  static GaugeSpec loglog_power(double alpha, double theta);
  static GaugeSpec log_power(double alpha, double theta);
  static GaugeSpec tabulated(double alpha, std::vector<double> t, std::vector<double> g);

  GaugeFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  /// c for the constant family, theta for the power families, 0 otherwise.
  double parameter() const { return parameter_; }
  const std::vector<double>& table_t() const { return table_t_; }
  const std::vector<double>& table_g() const { return table_g_; }

  /// Open domain (t_min, t_max) on which g is defined.
  double t_min() const;
  double t_max() const;

  /// g(t); throws DomainError outside the domain.
  double g(double t) const;
  /// log g(t) from log t, usable where t itself underflows. -inf when g = 0.
  double log_g(double log_t) const;
  /// phi(t) = t^alpha g(t).
  double phi(double t) const;
  /// log phi(t) from log t.
  double log_phi(double log_t) const;

  /// log g(e^{-u}) as a function of L = log u, for the analytic families.
  /// Lets the integral test probe u far beyond double range.
  std::optional<double> log_g_at_log_u(double log_u) const;

  /// Human-readable formula, e.g. "t^0.5 |log|log t||^1".
  std::string formula() const;

 private:
  GaugeSpec(GaugeFamily family, double alpha, double parameter) : family_(family), alpha_(alpha), parameter_(parameter) {}

  GaugeFamily family_;
  double alpha_;
  double parameter_;
  std::vector<double> table_t_;
  std::vector<double> table_g_;
};

/// phi(t) = t^alpha g(t); throws DomainError outside the family's domain.
double eval_gauge(const GaugeSpec& gauge, double t);

/// Numerical sanity check on t = 2^-k, k = 8..60 (clipped to the domain):
/// phi should vanish at 0+ and be nondecreasing.
struct GaugeCheck {
  bool vanishes_at_zero = false;
  bool nondecreasing = false;
};
GaugeCheck check_gauge(const GaugeSpec& gauge);

enum class IntegralOutcome { kDiverges, kConverges };

const char* to_string(IntegralOutcome outcome);

struct IntegralTestResult {
  IntegralOutcome outcome = IntegralOutcome::kDiverges;
  std::string method;
};

/// Decides whether int_{0+} g(s)^(beta+1) ds / s diverges. Analytic
/// families are answered in closed form after u = log(1/s); tabulated g
/// goes through integral_test_numeric.
IntegralTestResult integral_test(const GaugeSpec& gauge, double beta);

/// Numerical heuristic, available for every family.
///
/// Works with dyadic-octave partial integrals I_m = int over
/// [2^-(m+1), 2^-m] of g^(beta+1) ds/s. Since these are eventually monotone,
/// sum I_m converges iff the doubly condensed series d_j = 2^j 2^(2^j)
/// I_(2^(2^j)) does, and d_j is computed in log space for j up to 200. The
/// series is declared divergent when any of the last 10 consecutive ratios
/// d_(j+1)/d_j exceeds 0.9. Tabulated g is extrapolated as a power of
/// u = log(1/s) fitted on its points with t <= 1e-4; fewer than 4 such points
/// raise UndeterminedIntegralError.
IntegralTestResult integral_test_numeric(const GaugeSpec& gauge, double beta);

}  // namespace packdim
