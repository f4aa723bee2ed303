#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "packdim/error.hpp"
#include "packdim/gauge.hpp"
#include "packdim/io.hpp"
#include "packdim/random.hpp"
#include "packdim/verdict.hpp"

using namespace packdim;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) { return std::string(PACKDIM_SOURCE_DIR) + "/tests/golden/" + name; }

DecayProfile profile(DecayRegime regime, std::optional<double> beta, std::optional<double> t0 = std::nullopt) {
  DecayProfile p;
  p.regime = regime;
  p.beta = beta;
  p.t0 = t0;
  return p;
}

}  // namespace

TEST_CASE("gauge evaluation") {
  CHECK(eval_gauge(GaugeSpec::constant(0.5, 1.0), 0.25) == doctest::Approx(0.5));
  // |log|log t|| = 2 at t = exp(-e^2).
  const double t = std::exp(-std::exp(2.0));
  CHECK(eval_gauge(GaugeSpec::loglog_power(0.5, 1.0), t) == doctest::Approx(2.0 * std::sqrt(t)).epsilon(1e-12));
  CHECK(eval_gauge(GaugeSpec::log_power(1.0, 2.0), std::exp(-3.0)) ==
        doctest::Approx(std::exp(-3.0) / 9.0).epsilon(1e-12));
  CHECK(GaugeSpec::loglog_power(0.5, 1.0).log_phi(-1e6) ==
        doctest::Approx(-0.5e6 + std::log(std::log(1e6))).epsilon(1e-12));
}

TEST_CASE("gauge domain errors") {
  CHECK_THROWS_AS(eval_gauge(GaugeSpec::constant(0.5, 1.0), 0.0), DomainError);
  CHECK_THROWS_AS(eval_gauge(GaugeSpec::constant(0.5, 1.0), -1.0), DomainError);
  CHECK_THROWS_AS(eval_gauge(GaugeSpec::loglog_power(0.5, 1.0), 1.5), DomainError);
  CHECK_THROWS_AS(eval_gauge(GaugeSpec::log_power(0.5, 1.0), 1.0), DomainError);
  const auto tab = GaugeSpec::tabulated(0.5, {0.01, 0.1}, {1.0, 2.0});
  CHECK_THROWS_AS(eval_gauge(tab, 0.001), DomainError);
  CHECK_THROWS_AS(eval_gauge(tab, 0.2), DomainError);
  CHECK_THROWS_AS(GaugeSpec::tabulated(0.5, {0.1, 0.01}, {1.0, 1.0}), ConfigError);
  CHECK(parse_gauge_family("loglog-power") == GaugeFamily::kLogLogPower);
  CHECK_FALSE(parse_gauge_family("cubic"));
}

TEST_CASE("tabulated gauge reproduces the analytic one between nodes") {
  const auto exact = GaugeSpec::loglog_power(0.6, 1.5);
  const int n = 4000;
  std::vector<double> ts, gs;
  for (int i = 0; i < n; ++i) {
    const double lt = std::log(1e-12) + (std::log(1e-2) - std::log(1e-12)) * i / (n - 1);
    ts.push_back(std::exp(lt));
    gs.push_back(exact.g(ts.back()));
  }
  const auto tab = GaugeSpec::tabulated(0.6, ts, gs);
  for (int i = 0; i + 1 < n; i += 37) {
    const double mid = std::sqrt(ts[static_cast<std::size_t>(i)] * ts[static_cast<std::size_t>(i + 1)]);
    CHECK(std::abs(tab.g(mid) - exact.g(mid)) <= 1e-6 * exact.g(mid));
  }
}

TEST_CASE("gauge sanity check") {
  const auto c = check_gauge(GaugeSpec::loglog_power(0.5, 1.0));
  CHECK(c.vanishes_at_zero);
  CHECK(c.nondecreasing);
  const auto flat = check_gauge(GaugeSpec::constant(0.0, 1.0));
  CHECK_FALSE(flat.vanishes_at_zero);
  CHECK(flat.nondecreasing);
  // g = t^(-1) makes phi decrease when alpha < 1.
  std::vector<double> ts, gs;
  for (int k = 70; k >= 1; --k) {
    ts.push_back(std::ldexp(1.0, -k));
    gs.push_back(1.0 / ts.back());
  }
  CHECK_FALSE(check_gauge(GaugeSpec::tabulated(0.5, ts, gs)).nondecreasing);
}

TEST_CASE("integral test: closed forms") {
  CHECK(integral_test(GaugeSpec::constant(0.5, 1.0), 2.0).outcome == IntegralOutcome::kDiverges);
  CHECK(integral_test(GaugeSpec::loglog_power(0.5, 3.0), 2.0).outcome == IntegralOutcome::kDiverges);
  CHECK(integral_test(GaugeSpec::log_power(0.5, 1.0), 1.0).outcome == IntegralOutcome::kConverges);
  CHECK(integral_test(GaugeSpec::log_power(0.5, 0.25), 1.0).outcome == IntegralOutcome::kDiverges);
  CHECK(integral_test(GaugeSpec::log_power(0.5, 0.5), 1.0).outcome == IntegralOutcome::kDiverges);
  CHECK_THROWS_AS(integral_test(GaugeSpec::constant(0.5, 1.0), 0.0), ContractError);
  CHECK_THROWS_AS(integral_test_numeric(GaugeSpec::constant(0.5, 1.0), -1.0), ContractError);
}

TEST_CASE("integral test: numeric agrees with closed form on random cases") {
  Stream s(2024);
  for (int i = 0; i < 20; ++i) {
    const double beta = 0.2 + 4.0 * s.uniform();
    const double theta = 0.05 + 3.0 * s.uniform();
    const GaugeSpec gauge = i % 3 == 0   ? GaugeSpec::constant(0.5, 0.5 + s.uniform())
                            : i % 3 == 1 ? GaugeSpec::loglog_power(0.5, theta)
                                         : GaugeSpec::log_power(0.5, theta);
    CAPTURE(gauge.formula());
    CAPTURE(beta);
    CHECK(integral_test_numeric(gauge, beta).outcome == integral_test(gauge, beta).outcome);
  }
}

TEST_CASE("integral test: tabulated gauges") {
  SUBCASE("tabulated log-power extrapolates correctly") {
    std::vector<double> ts, gs;
    for (int k = 200; k >= 1; --k) {
      ts.push_back(std::ldexp(1.0, -k));
      gs.push_back(std::pow(k * std::log(2.0), -2.0));
    }
    const auto tab = GaugeSpec::tabulated(0.5, ts, gs);
    CHECK(integral_test(tab, 1.0).outcome == IntegralOutcome::kConverges);
    std::vector<double> flat(ts.size(), 1.0);
    CHECK(integral_test(GaugeSpec::tabulated(0.5, ts, flat), 1.0).outcome == IntegralOutcome::kDiverges);
  }
  SUBCASE("too little data near zero is undetermined") {
    const auto tab = GaugeSpec::tabulated(0.5, {1e-3, 1e-2, 1e-1}, {1.0, 1.0, 1.0});
    CHECK_THROWS_AS(integral_test(tab, 1.0), UndeterminedIntegralError);
  }
}

TEST_CASE("verdict outcomes") {
  SUBCASE("polynomial decay: no exact dimension") {
    const auto v = verdict(profile(DecayRegime::kPolynomial, 3.5), 0.56);
    CHECK(v.outcome == VerdictOutcome::kNoExactDimension);
    CHECK_FALSE(v.gauge);
    CHECK(v.justification.front().rule == "polynomial-small-ball");
  }
  SUBCASE("exponential decay: loglog gauge with theta = beta") {
    const auto v = verdict(profile(DecayRegime::kExponential, 1.0, 0.5), 0.5);
    CHECK(v.outcome == VerdictOutcome::kExactDimensionWithGauge);
    REQUIRE(v.gauge);
    CHECK(v.gauge->family() == GaugeFamily::kLogLogPower);
    CHECK(v.gauge->alpha() == 0.5);
    CHECK(v.gauge->parameter() == 1.0);
  }
  SUBCASE("degenerate and inconclusive are undetermined") {
    CHECK(verdict(profile(DecayRegime::kDegenerate, std::nullopt), 0.63).outcome == VerdictOutcome::kUndetermined);
    CHECK(verdict(profile(DecayRegime::kInconclusive, std::nullopt), 0.63).outcome ==
          VerdictOutcome::kUndetermined);
  }
  SUBCASE("missing beta is a contract violation") {
    CHECK_THROWS_AS(verdict(profile(DecayRegime::kPolynomial, std::nullopt), 0.5), ContractError);
    CHECK_THROWS_AS(verdict(profile(DecayRegime::kExponential, std::nullopt), 0.5), ContractError);
  }
  SUBCASE("every verdict carries a justification") {
    for (auto r : {DecayRegime::kDegenerate, DecayRegime::kPolynomial, DecayRegime::kExponential,
                   DecayRegime::kInconclusive}) {
      const auto v = verdict(profile(r, 2.0, 0.3), 0.5);
      CHECK_FALSE(v.justification.empty());
      CHECK(v.justification.back().rule == "point-estimates");
    }
  }
  SUBCASE("verdict is a pure function of its inputs") {
    const auto p = profile(DecayRegime::kExponential, 1.0, 0.5);
    VerdictContext ctx;
    ctx.rho = 0.5;
    ctx.mean_abs_log_t = 1.2;
    CHECK(verdict_json(verdict(p, 0.5, ctx)) == verdict_json(verdict(p, 0.5, ctx)));
  }
  CHECK(parse_verdict_outcome("exact-dimension-with-gauge") == VerdictOutcome::kExactDimensionWithGauge);
  CHECK_FALSE(parse_verdict_outcome("maybe"));
}

TEST_CASE("verdicts match the golden files") {
  struct Case {
    const char* name;
    double alpha;
  };
  for (const Case c : {Case{"rand-cantor", (std::sqrt(17.0) - 3.0) / 2.0}, Case{"bb-zero", 0.5},
                       Case{"synthetic-exponential", 0.5}}) {
    CAPTURE(c.name);
    const auto p = parse_profile_json(read_file(golden(std::string("profile-") + c.name + ".json")));
    const auto v = verdict(p, c.alpha);
    CHECK(verdict_json(v) == read_file(golden(std::string("verdict-") + c.name + ".json")));
  }
}
