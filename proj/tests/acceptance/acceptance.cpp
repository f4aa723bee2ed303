// Acceptance suite: prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "packdim/brownian.hpp"
#include "packdim/config.hpp"
#include "packdim/dimension.hpp"
#include "packdim/gallery.hpp"
#include "packdim/gauge.hpp"
#include "packdim/geometry.hpp"
#include "packdim/io.hpp"
#include "packdim/martingale.hpp"
#include "packdim/pipeline.hpp"
#include "packdim/smallball.hpp"
#include "packdim/spine.hpp"
#include "packdim/stats.hpp"
#include "packdim/verdict.hpp"

using namespace packdim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator()(const std::string& key, const T& value) {
    if (!first_) os_ << ", ";
    first_ = false;
    os_ << key << "=" << value;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  bool first_ = true;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<double> kFitGrid = log_grid(0.01, 0.6, 8);

// Shared ensembles: 10^6 draws each, the first 10^5 of which serve the mean test.
struct Ensembles {
  std::vector<MartingaleEstimate> rand_cantor;
  std::vector<MartingaleEstimate> bb_zero;
};

Ensembles& ensembles() {
  static Ensembles e = [] {
    Ensembles out;
    const unsigned jobs = 0;
    const auto rc = random_cantor_law();
    out.rand_cantor = simulate_X_ensemble(rc.law, *rc.oracles.alpha, MartingaleOptions{}, 1'000'000, 20240601, jobs);
    const auto bb = brownian_bridge_law(BridgeMode::kDensityRejection);
    out.bb_zero = simulate_X_ensemble(bb.law, 0.5, MartingaleOptions{}, 1'000'000, 20240602, jobs);
    return out;
  }();
  return e;
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double rc = solve_alpha(random_cantor_law().law).alpha;
  const double dc = solve_alpha(deterministic_cantor_law().law).alpha;
  const double secs = seconds_since(t0);
  const double e_rc = std::abs(rc - (std::sqrt(17.0) - 3.0) / 2.0);
  const double e_dc = std::abs(dc - std::log(2.0) / std::log(3.0));
  return {e_rc <= 1e-10 && e_dc <= 1e-10 && secs < 1.0,
          Detail()("rand_cantor_err", e_rc)("det_cantor_err", e_dc)("seconds", secs).str()};
}

Outcome ac2() {
  SolveOptions o;
  o.mc_samples = 1'000'000;
  o.seed = 20240602;
  o.jobs = 0;
  const auto r = solve_alpha(brownian_bridge_law(BridgeMode::kDensityRejection).law, o);
  return {std::abs(r.alpha - 0.5) <= 0.01,
          Detail()("alpha", r.alpha)("ci_halfwidth", r.ci_halfwidth)("method", to_string(r.method)).str()};
}

Outcome ac3() {
  auto mean_check = [](const std::vector<MartingaleEstimate>& xs, Detail& d, const std::string& name) {
    RunningStats st;
    for (std::size_t i = 0; i < 100'000; ++i) st.add(xs[i].value);
    const double z = (st.mean() - 1.0) / st.std_error();
    d(name + "_mean", st.mean())(name + "_z", z);
    return std::abs(z) <= 3.0;
  };
  Detail d;
  const bool rc = mean_check(ensembles().rand_cantor, d, "rand_cantor");
  const bool bb = mean_check(ensembles().bb_zero, d, "bb_zero");
  const auto det = deterministic_cantor_law();
  double worst = 0.0;
  for (const auto& x : simulate_X_ensemble(det.law, *det.oracles.alpha, MartingaleOptions{}, 1000, 3)) {
    worst = std::max(worst, std::abs(x.value - 1.0));
  }
  d("det_cantor_max_dev", worst);
  return {rc && bb && worst <= 1e-12, d.str()};
}

Outcome small_ball_exponent(const std::vector<MartingaleEstimate>& xs, double target, double tol) {
  const auto table = smallball_cdf(xs, kFitGrid);
  const auto fit = fit_polynomial_decay(table, 0.1, 0.6);
  const double beta = fit.line.slope;
  return {std::abs(beta - target) <= tol,
          Detail()("beta", beta)("target", target)("tolerance", tol)("points", fit.line.points)("r2", fit.line.r2)
              .str()};
}

Outcome ac4() {
  const double alpha = (std::sqrt(17.0) - 3.0) / 2.0;
  return small_ball_exponent(ensembles().rand_cantor, 2.0 / alpha, 0.5);
}

Outcome ac5() { return small_ball_exponent(ensembles().bb_zero, 2.0, 0.4); }

Outcome ac6() {
  const std::size_t n = 10'000;
  std::vector<double> p1, p2, d1, d2;
  for (std::size_t i = 0; i < n; ++i) {
    Stream sp(606, StreamStage::kLawCheck, i);
    const auto [a, b] = sample_bridge_ratios_path(sp);
    p1.push_back(a);
    p2.push_back(b);
    Stream sd(607, StreamStage::kLawCheck, i);
    const auto [c, e] = sample_bridge_density(sd);
    d1.push_back(c);
    d2.push_back(e);
  }
  const double crit = ks_critical(n, n, 0.001);
  const double ks1 = ks_statistic(p1, d1), ks2 = ks_statistic(p2, d2);
  const double arcsine_dev = ks_one_sample(p1, arcsine_cdf);
  const double exact_dev = ks_one_sample(p1, bridge_t1_cdf);
  return {ks1 < crit && ks2 < crit && arcsine_dev <= 0.01,
          Detail()("ks_T1", ks1)("ks_T2", ks2)("critical", crit)("sup_dev_arcsine", arcsine_dev)(
              "sup_dev_exact_marginal", exact_dev)
              .str()};
}

Outcome ac7() {
  bool ok = true;
  Detail d;
  for (double x : {0.05, 0.1, 0.2}) {
    const double p = bridge_sqrt_sum_cdf(x);
    const double bound = bridge_polar_bound(x);
    ok = ok && p >= bound;
    std::ostringstream key;
    key << "x" << x;
    d(key.str() + "_P", p)(key.str() + "_bound", bound);
  }
  const double ratio = bridge_sqrt_sum_cdf(0.05) / (3.0 * 0.05 * 0.05 / 8.0);
  d("ratio_at_0.05", ratio);
  return {ok && ratio >= 0.8 && ratio <= 1.3, d.str()};
}

Outcome ac8() {
  Stream s(88, StreamStage::kGeneric, 0);
  int closed_ok = 0, numeric_ok = 0;
  for (int i = 0; i < 20; ++i) {
    const double beta = 0.1 + 5.0 * s.uniform();
    const double theta = 0.05 + 3.0 * s.uniform();
    const int family = static_cast<int>(s.below(3));
    GaugeSpec g = GaugeSpec::constant(0.5, 0.1 + 2.0 * s.uniform());
    IntegralOutcome expected = IntegralOutcome::kDiverges;
    if (family == 1) {
      g = GaugeSpec::loglog_power(0.5, theta);
    } else if (family == 2) {
      g = GaugeSpec::log_power(0.5, theta);
      expected = theta * (beta + 1.0) > 1.0 ? IntegralOutcome::kConverges : IntegralOutcome::kDiverges;
    }
    closed_ok += integral_test(g, beta).outcome == expected ? 1 : 0;
    numeric_ok += integral_test_numeric(g, beta).outcome == expected ? 1 : 0;
  }
  return {closed_ok == 20 && numeric_ok == 20, Detail()("closed_form_agree", closed_ok)("numeric_agree", numeric_ok).str()};
}

Outcome ac9() {
  Detail d;
  const auto rc = classify_decay(smallball_cdf(ensembles().rand_cantor, kFitGrid));
  const auto bb = classify_decay(smallball_cdf(ensembles().bb_zero, kFitGrid));
  bool ok = true;
  auto outcome_of = [&](const DecayProfile& p, double alpha) {
    try {
      return verdict(p, alpha).outcome;
    } catch (const std::exception&) {
      return VerdictOutcome::kUndetermined;
    }
  };
  const auto v_rc = outcome_of(rc, (std::sqrt(17.0) - 3.0) / 2.0);
  const auto v_bb = outcome_of(bb, 0.5);
  d("rand_cantor_regime", to_string(rc.regime))("rand_cantor", to_string(v_rc));
  d("bb_zero_regime", to_string(bb.regime))("bb_zero", to_string(v_bb));
  ok = ok && v_rc == VerdictOutcome::kNoExactDimension && v_bb == VerdictOutcome::kNoExactDimension;

  // P(X <= a) = exp(-0.5 / a): exponential decay with beta = 1.
  std::vector<double> xs(1'000'000);
  Stream s(99, StreamStage::kGeneric, 0);
  for (auto& x : xs) x = 0.5 / -std::log(s.uniform_open());
  const auto ex = classify_decay(smallball_cdf(xs, kFitGrid));
  bool gauge_ok = false;
  if (ex.regime == DecayRegime::kExponential) {
    const auto v = verdict(ex, 0.5);
    gauge_ok = v.outcome == VerdictOutcome::kExactDimensionWithGauge && v.gauge &&
               v.gauge->family() == GaugeFamily::kLogLogPower && std::abs(v.gauge->parameter() - 1.0) < 0.1;
    if (v.gauge) d("synthetic_gauge", v.gauge->formula());
  }
  d("synthetic_regime", to_string(ex.regime));
  ok = ok && gauge_ok;

  int golden_match = 0;
  const fs::path golden = fs::path(PACKDIM_SOURCE_DIR) / "tests/golden";
  const std::pair<const char*, double> cases[] = {
      {"rand-cantor", (std::sqrt(17.0) - 3.0) / 2.0}, {"bb-zero", 0.5}, {"synthetic-exponential", 0.5}};
  for (const auto& [name, alpha] : cases) {
    const auto p = parse_profile_json(read_file(golden / (std::string("profile-") + name + ".json")));
    golden_match += verdict_json(verdict(p, alpha)) == read_file(golden / (std::string("verdict-") + name + ".json"));
  }
  d("golden_matches", golden_match);
  return {ok && golden_match == 3, d.str()};
}

Outcome ac10() {
  const auto ex = random_cantor_law();
  const double alpha = *ex.oracles.alpha;
  SpineOptions o;
  o.depth = 40;
  auto spines = sample_spines(ex.law, alpha, o, 10'000, 20240601, 0);
  const auto rep = covariance_audit(spines, GaugeSpec::constant(alpha, 1.0), EventParams{});
  const bool a = rep.m1_ci.hi < 1.0;
  bool b = true;
  for (int k = 10; k < 40; ++k) b = b && rep.partial_sums[static_cast<std::size_t>(k)] > rep.partial_sums[static_cast<std::size_t>(k - 1)];
  const bool c = rep.limsup_hit_fraction >= 0.95;
  const bool dd = rep.bc_ratio_final <= 0.1;
  const bool e = rep.markov_all_hold;
  return {a && b && c && dd && e, Detail()("m1_hat", rep.m1_hat)("m1_ci_hi", rep.m1_ci.hi)("partial_sums_increase", b)(
                                      "limsup_fraction", rep.limsup_hit_fraction)("bc_ratio", rep.bc_ratio_final)(
                                      "markov_pairs", rep.markov.size())("markov_hold", e)
                                      .str()};
}

Outcome ac11() {
  const auto det = deterministic_cantor_law();
  Stream s(1, StreamStage::kGeometry, 0);
  const auto set = realize(det.law, Placement::kLeftRightEnds, 12, s);
  std::vector<double> eps;
  for (int k = 5; k <= 15; ++k) eps.push_back(std::ldexp(1.0, -k));
  const auto fit = box_count(set, eps).fit;
  const double det_slope = fit ? fit->slope : 0.0;

  auto cfg = validate_config(R"({"law": "rand-cantor", "seed": 20240601, "boxcount": {"enabled": true}})");
  const auto ens = run_boxcount(random_cantor_law().law, *cfg.config);
  const double alpha = (std::sqrt(17.0) - 3.0) / 2.0;
  const double target_det = std::log(2.0) / std::log(3.0);
  return {std::abs(det_slope - target_det) <= 0.02 && std::abs(ens.mean_slope - alpha) <= 0.05,
          Detail()("det_slope", det_slope)("rand_mean_slope", ens.mean_slope)("realizations", ens.fitted).str()};
}

Outcome ac12() {
#ifdef PACKDIM_CLI
  const fs::path dir = fs::path(PACKDIM_ACCEPTANCE_TMP) / "repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({"law": "rand-cantor", "seed": 7, "output_dir": ")" << (dir / "out").string()
        << R"(", "martingale": {"samples": 20000}, "spine": {"enabled": true, "spines": 200, "depth": 20},)"
        << R"( "boxcount": {"enabled": true, "realizations": 5, "depth": 12}})";
  }
  const std::string cmd = std::string(PACKDIM_CLI) + " report --config " + cfg.string() + " > /dev/null 2>&1";
  std::string reports[2];
  for (auto& r : reports) {
    if (std::system(cmd.c_str()) != 0) return {false, "packdim report failed"};
    r = read_file(dir / "out" / "report.json");
  }
  const bool same = !reports[0].empty() && strip_metadata(reports[0]) == strip_metadata(reports[1]);
  return {same, Detail()("bytes", reports[0].size())("identical_without_metadata", same).str()};
#else
  return {false, "packdim CLI not built"};
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC12", ac12}};
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %s (%.1fs) %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
