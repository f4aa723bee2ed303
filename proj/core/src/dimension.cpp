#include "packdim/dimension.hpp"

#include <cmath>
#include <sstream>

#include "packdim/error.hpp"
#include "packdim/parallel.hpp"
#include "packdim/stats.hpp"

namespace packdim {

MomentBatch::MomentBatch(const ReductionLaw& law, std::size_t samples, std::uint64_t seed, unsigned jobs)
    : samples_(samples), slots_(law.slots), ratios_(samples * law.slots) {
  law.validate();
  if (samples < 2) throw ContractError("MomentBatch needs at least 2 samples");
  parallel_for(samples, jobs, [&](std::size_t i) {
    Stream stream(seed, StreamStage::kMoment, i);
    law.sample(stream, std::span<double>(ratios_.data() + i * slots_, slots_));
  });
}

MomentEstimate MomentBatch::at(double s) const {
  RunningStats acc;
  for (std::size_t i = 0; i < samples_; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < slots_; ++j) {
      const double t = ratios_[i * slots_ + j];
      if (t > 0.0) sum += std::pow(t, s);
    }
    acc.add(sum);
  }
  MomentEstimate est;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.method = MomentMethod::kMonteCarlo;
  est.samples = samples_;
  return est;
}

double MomentBatch::derivative(double s) const {
  double total = 0.0;
  for (double t : ratios_) {
    if (t > 0.0) total += std::pow(t, s) * std::log(t);
  }
  return total / static_cast<double>(samples_);
}

MomentEstimate moment(const ReductionLaw& law, double s, std::size_t samples, std::uint64_t seed, unsigned jobs,
                      double precision) {
  if (s < 0.0) throw ContractError("moment: s must be >= 0");
  if (law.has_moment()) {
    MomentEstimate est;
    est.value = law.moment(s);
    est.method = MomentMethod::kClosedForm;
    return est;
  }
  MomentEstimate est = MomentBatch(law, samples, seed, jobs).at(s);
  if (precision > 0.0 && est.std_error > precision) {
    std::ostringstream msg;
    msg << "standard error " << est.std_error << " exceeds requested precision " << precision << " at "
        << samples << " samples";
    est.warning = msg.str();
  }
  return est;
}

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::kClosedFormRoot:
      return "closed-form-root";
    case SolveMethod::kBisectionOnMoment:
      return "bisection-on-moment";
    case SolveMethod::kBisectionOnMonteCarlo:
      return "bisection-on-MC";
  }
  return "unknown";
}

namespace {

template <class MomentFn>
double bisect(MomentFn&& m, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (m(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <class MomentFn>
double bracket_and_solve(MomentFn&& m, double d, double tol) {
  const double m0 = m(0.0);
  if (!(m0 > 1.0)) {
    std::ostringstream msg;
    msg << "subcritical law: m(0) = " << m0 << " <= 1";
    throw SubcriticalError(msg.str());
  }
  const double md = m(d);
  if (std::abs(md - 1.0) <= tol) return d;
  if (md > 1.0) {
    std::ostringstream msg;
    msg << "no root of m(s) = 1 below s = " << d << " (m(d) = " << md << ")";
    throw GeometryError(msg.str());
  }
  return bisect(m, 0.0, d);
}

}  // namespace

DimensionResult solve_alpha(const ReductionLaw& law, const SolveOptions& options) {
  law.validate();
  DimensionResult result;
  const bool closed = law.has_moment() && !options.force_monte_carlo;

  if (options.use_closed_form_root && law.closed_form_alpha && closed) {
    result.alpha = *law.closed_form_alpha;
    result.method = SolveMethod::kClosedFormRoot;
    result.residual = std::abs(law.moment(result.alpha) - 1.0);
    return result;
  }

  if (closed) {
    const double tol = options.tol > 0.0 ? options.tol : 1e-6;
    result.alpha = bracket_and_solve([&](double s) { return law.moment(s); }, options.max_dimension, tol);
    result.method = SolveMethod::kBisectionOnMoment;
    result.residual = std::abs(law.moment(result.alpha) - 1.0);
    if (result.residual > tol) throw Error("bisection residual above tolerance");
    return result;
  }

  const double tol = options.tol > 0.0 ? options.tol : 1e-3;
  MomentBatch batch(law, options.mc_samples, options.seed, options.jobs);
  result.alpha = bracket_and_solve([&](double s) { return batch.at(s).value; }, options.max_dimension, tol);
  result.method = SolveMethod::kBisectionOnMonteCarlo;
  result.samples = options.mc_samples;
  const MomentEstimate at_root = batch.at(result.alpha);
  result.residual = std::abs(at_root.value - 1.0);
  const double slope = batch.derivative(result.alpha);
  if (slope < 0.0) result.ci_halfwidth = kZ95 * at_root.std_error / -slope;
  if (at_root.std_error > tol) {
    std::ostringstream msg;
    msg << "moment standard error " << at_root.std_error << " exceeds tolerance " << tol;
    result.notes.push_back(msg.str());
  }
  return result;
}

}  // namespace packdim
