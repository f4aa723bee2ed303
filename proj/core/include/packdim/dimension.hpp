#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "packdim/law.hpp"

namespace packdim {

enum class MomentMethod { kClosedForm, kMonteCarlo };

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  MomentMethod method = MomentMethod::kClosedForm;
  std::size_t samples = 0;
  /// Set when the Monte Carlo standard error exceeds the requested precision.
  std::string warning;
};

/// A fixed batch of sampled offspring vectors. Every evaluation of the
/// empirical moment reuses the same vectors (common random numbers), which
/// makes s -> m_hat(s) pathwise monotone.
class MomentBatch {
 public:
  /// Vector i comes from stream (seed, kMoment, i).
  MomentBatch(const ReductionLaw& law, std::size_t samples, std::uint64_t seed, unsigned jobs = 1);

  std::size_t samples() const { return samples_; }
  /// Mean of sum_i T_i^s over the batch, with its standard error.
  MomentEstimate at(double s) const;
  /// Mean of sum_i T_i^s log T_i.
  double derivative(double s) const;

 private:
  std::size_t samples_;
  std::size_t slots_;
  std::vector<double> ratios_;
};

/// m(s) = E[sum_i T_i^s]: the closed form when the law has one, else a Monte
/// Carlo mean over `samples` vectors. `precision` > 0 requests a warning when
/// the standard error is larger.
MomentEstimate moment(const ReductionLaw& law, double s, std::size_t samples, std::uint64_t seed,
                      unsigned jobs = 1, double precision = 0.0);

enum class SolveMethod { kClosedFormRoot, kBisectionOnMoment, kBisectionOnMonteCarlo };

const char* to_string(SolveMethod method);

struct DimensionResult {
  double alpha = 0.0;
  SolveMethod method = SolveMethod::kBisectionOnMoment;
  /// |m(alpha) - 1|.
  double residual = 0.0;
  /// 95% half-width from the moment's standard error (delta method); 0 for
  /// closed forms.
  double ci_halfwidth = 0.0;
  std::size_t samples = 0;
  std::vector<std::string> notes;
};

struct SolveOptions {
  /// Residual tolerance; <= 0 picks 1e-6 (closed form) or 1e-3 (Monte Carlo).
  double tol = 0.0;
  std::size_t mc_samples = 1'000'000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  /// Ambient dimension d; the root is searched in (0, d].
  double max_dimension = 1.0;
  /// Ignore a closed-form moment and bisect on the Monte Carlo moment.
  bool force_monte_carlo = false;
  /// Return the law's analytic root instead of bisecting.
  bool use_closed_form_root = false;
};

/// Solves E[sum_i T_i^alpha] = 1 by bisection on [0, d].
/// Throws SubcriticalError when m(0) <= 1 and GeometryError when m(d) > 1.
DimensionResult solve_alpha(const ReductionLaw& law, const SolveOptions& options = {});

}  // namespace packdim
