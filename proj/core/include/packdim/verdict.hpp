#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "packdim/gauge.hpp"
#include "packdim/smallball.hpp"

namespace packdim {

enum class VerdictOutcome { kNoExactDimension, kExactDimensionWithGauge, kUndetermined };

const char* to_string(VerdictOutcome outcome);
std::optional<VerdictOutcome> parse_verdict_outcome(const std::string& text);

/// One applied criterion: a short rule id, a sentence, and the numbers it used.
struct Justification {
  std::string rule;
  std::string statement;
  std::vector<std::pair<std::string, double>> values;
};

struct Verdict {
  VerdictOutcome outcome = VerdictOutcome::kUndetermined;
  std::optional<GaugeSpec> gauge;
  std::vector<Justification> justification;
};

/// Optional extra estimates that only end up in justification notes.
struct VerdictContext {
  std::optional<double> alpha_ci;
  /// Spine estimate of E_Q|log T_1| and the event scale rho, used for the
  /// threshold on C in the exponential case.
  std::optional<double> mean_abs_log_t;
  std::optional<double> rho;
};

/// Exact-packing-dimension verdict from the small-ball regime.
///
/// polynomial   -> no-exact-dimension
/// exponential  -> exact-dimension-with-gauge t^alpha |log|log t||^beta
/// degenerate, inconclusive -> undetermined
///
/// Throws ContractError when a polynomial or exponential profile has no beta.
Verdict verdict(const DecayProfile& profile, double alpha, const VerdictContext& context = {});

}  // namespace packdim
