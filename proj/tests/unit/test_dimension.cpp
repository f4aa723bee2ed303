#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "packdim/dimension.hpp"
#include "packdim/error.hpp"
#include "packdim/gallery.hpp"

using namespace packdim;

TEST_CASE("closed-form moments") {
  const auto det = deterministic_cantor_law().law;
  const auto rnd = random_cantor_law().law;
  for (double s : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(moment(det, s, 0, 1).value == doctest::Approx(2.0 * std::pow(3.0, -s)));
    // Oracle: twice the integral of t^s 2(1 - t) over [0, 1].
    const double oracle = 2.0 * simpson([s](double t) { return std::pow(t, s) * 2.0 * (1.0 - t); }, 0.0, 1.0, 20000);
    CHECK(moment(rnd, s, 0, 1).value == doctest::Approx(oracle).epsilon(1e-4));
  }
  CHECK(moment(rnd, 0.0, 0, 1).value == 2.0);
}

TEST_CASE("dimension of the deterministic and random Cantor sets") {
  const auto det = solve_alpha(deterministic_cantor_law().law);
  CHECK(std::abs(det.alpha - std::log(2.0) / std::log(3.0)) < 1e-10);
  CHECK(det.method == SolveMethod::kBisectionOnMoment);

  const auto rnd = solve_alpha(random_cantor_law().law);
  // Oracle: positive root of s^2 + 3s - 2.
  const double root = bisect([](double s) { return s * s + 3 * s - 2; }, 0.0, 1.0);
  CHECK(std::abs(rnd.alpha - root) < 1e-10);
  CHECK(rnd.residual <= 1e-6);

  SolveOptions cf;
  cf.use_closed_form_root = true;
  CHECK(solve_alpha(random_cantor_law().law, cf).method == SolveMethod::kClosedFormRoot);
}

TEST_CASE("Bernoulli dimension matches one-line algebra") {
  const auto r = solve_alpha(bernoulli_cantor_law(0.9, 1.0 / 3.0).law);
  CHECK(r.alpha == doctest::Approx(std::log(1.8) / std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("errors: subcritical and no root below d") {
  CHECK_THROWS_AS(solve_alpha(bernoulli_cantor_law(0.4, 0.3).law), SubcriticalError);
  ReductionLaw big;
  big.name = "too-big";
  big.slots = 2;
  big.sampler = [](Stream&, std::span<double> out) {
    out[0] = 0.6;
    out[1] = 0.6;
  };
  big.moment = [](double s) { return 2.0 * std::pow(0.6, s); };
  CHECK_THROWS_AS(solve_alpha(big), GeometryError);
}

TEST_CASE("moment is monotone in s, exactly for closed forms and pathwise under common random numbers") {
  const auto law = random_cantor_law().law;
  const MomentBatch batch(law, 20000, 9);
  double prev_cf = 1e300, prev_mc = 1e300;
  for (double s = 0.0; s <= 1.0; s += 0.05) {
    const double cf = law.moment(s);
    const double mc = batch.at(s).value;
    CHECK(cf <= prev_cf);
    CHECK(mc <= prev_mc);
    prev_cf = cf;
    prev_mc = mc;
  }
}

TEST_CASE("Monte Carlo solve agrees with the closed form and is root consistent") {
  const auto law = random_cantor_law().law;
  SolveOptions mc;
  mc.force_monte_carlo = true;
  mc.mc_samples = 200'000;
  mc.seed = 4;
  const auto r = solve_alpha(law, mc);
  CHECK(r.method == SolveMethod::kBisectionOnMonteCarlo);
  CHECK(r.ci_halfwidth > 0.0);
  const double exact = *random_cantor_law().oracles.alpha;
  CHECK(std::abs(r.alpha - exact) <= 2.0 * r.ci_halfwidth + 1e-3);
  const MomentBatch batch(law, mc.mc_samples, mc.seed);
  CHECK(std::abs(batch.at(r.alpha).value - 1.0) <= 1e-3);
}

TEST_CASE("Brownian bridge dimension is about 1/2") {
  SolveOptions mc;
  mc.mc_samples = 200'000;
  mc.seed = 8;
  const auto r = solve_alpha(brownian_bridge_law(BridgeMode::kDensityRejection).law, mc);
  CHECK(r.method == SolveMethod::kBisectionOnMonteCarlo);
  CHECK(std::abs(r.alpha - 0.5) < 0.02);
}

TEST_CASE("too few samples for the requested precision produce a warning") {
  const auto law = brownian_bridge_law(BridgeMode::kDensityRejection).law;
  const auto m = moment(law, 0.5, 100, 1, 1, 1e-4);
  CHECK_FALSE(m.warning.empty());
}
