#include "packdim/verdict.hpp"

#include <cmath>

#include "packdim/error.hpp"

namespace packdim {

const char* to_string(VerdictOutcome outcome) {
  switch (outcome) {
    case VerdictOutcome::kNoExactDimension:
      return "no-exact-dimension";
    case VerdictOutcome::kExactDimensionWithGauge:
      return "exact-dimension-with-gauge";
    case VerdictOutcome::kUndetermined:
      return "undetermined";
  }
  return "undetermined";
}

std::optional<VerdictOutcome> parse_verdict_outcome(const std::string& text) {
  for (auto o : {VerdictOutcome::kNoExactDimension, VerdictOutcome::kExactDimensionWithGauge,
                 VerdictOutcome::kUndetermined}) {
    if (text == to_string(o)) return o;
  }
  return std::nullopt;
}

namespace {

void add_estimate_notes(Verdict& v, const DecayProfile& profile, double alpha, const VerdictContext& context) {
  Justification note{"point-estimates",
                     "alpha and beta enter as point estimates; their uncertainty does not change the outcome",
                     {{"alpha", alpha}}};
  if (context.alpha_ci) note.values.emplace_back("alpha_ci_halfwidth", *context.alpha_ci);
  if (profile.beta) note.values.emplace_back("beta", *profile.beta);
  if (profile.beta_se) note.values.emplace_back("beta_se", *profile.beta_se);
  v.justification.push_back(std::move(note));
}

}  // namespace

Verdict verdict(const DecayProfile& profile, double alpha, const VerdictContext& context) {
  Verdict v;
  const DecayRegime regime = profile.regime;
  if ((regime == DecayRegime::kPolynomial || regime == DecayRegime::kExponential) && !profile.beta) {
    throw ContractError(std::string("verdict: ") + to_string(regime) + " profile without beta");
  }
  switch (regime) {
    case DecayRegime::kPolynomial: {
      const double beta = *profile.beta;
      v.outcome = VerdictOutcome::kNoExactDimension;
      v.justification.push_back({"polynomial-small-ball",
                                 "P(0<X<=a) decays like a^beta as a -> 0",
                                 {{"beta", beta}}});
      const auto constant = integral_test(GaugeSpec::constant(alpha, 1.0), beta);
      const auto loglog = integral_test(GaugeSpec::loglog_power(alpha, beta), beta);
      v.justification.push_back(
          {"divergent-integral-null-packing",
           "every gauge t^alpha g(t) with int_{0+} g(s)^(beta+1) ds/s = infinity gives zero packing measure "
           "almost surely; constant g: " + std::string(to_string(constant.outcome)) +
               ", loglog-power g with theta = beta: " + to_string(loglog.outcome),
           {{"alpha", alpha}, {"beta", beta}}});
      v.justification.push_back(
          {"convergent-integral-infinite-packing",
           "every gauge with a convergent integral gives infinite packing measure (external upper bound, "
           "taken as given)",
           {}});
      v.justification.push_back({"conclusion", "no gauge gives positive and finite packing measure", {}});
      break;
    }
    case DecayRegime::kExponential: {
      const double beta = *profile.beta;
      v.outcome = VerdictOutcome::kExactDimensionWithGauge;
      v.gauge = GaugeSpec::loglog_power(alpha, beta);
      v.justification.push_back({"exponential-small-ball",
                                 "-log P(0<X<=a) grows like a^(-1/beta) as a -> 0",
                                 {{"beta", beta}}});
      v.justification.push_back(
          {"loglog-gauge-positive-packing",
           "the gauge " + v.gauge->formula() +
               " gives positive packing measure almost surely on non-extinction, and finite by the external "
               "upper bound",
           {{"alpha", alpha}, {"theta", beta}}});
      if (profile.t0 && context.mean_abs_log_t && context.rho) {
        const double threshold = std::pow(*context.rho, -alpha) * std::exp(alpha * *context.mean_abs_log_t) *
                                 std::pow(*profile.t0, -beta);
        v.justification.push_back({"event-constant-threshold",
                                   "events B_k occur infinitely often for C above rho^-alpha e^(alpha E_Q|log T|) "
                                   "t0^-beta; tightness unknown",
                                   {{"rho", *context.rho},
                                    {"mean_abs_log_t", *context.mean_abs_log_t},
                                    {"t0", *profile.t0},
                                    {"threshold", threshold}}});
      }
      break;
    }
    case DecayRegime::kDegenerate:
      v.outcome = VerdictOutcome::kUndetermined;
      v.justification.push_back({"degenerate-limit",
                                 "X is almost surely constant, so no small-ball regime exists and the criterion "
                                 "does not apply",
                                 {}});
      break;
    case DecayRegime::kInconclusive:
      v.outcome = VerdictOutcome::kUndetermined;
      v.justification.push_back({"inconclusive-profile",
                                 "neither decay shape fits the small-ball data: " + profile.explanation,
                                 {}});
      break;
  }
  add_estimate_notes(v, profile, alpha, context);
  return v;
}

}  // namespace packdim
