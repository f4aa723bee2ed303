#include "packdim/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json_io.hpp"
#include "packdim/error.hpp"
#include "packdim/gauge.hpp"
#include "packdim/io.hpp"
#include "packdim/verdict.hpp"

namespace packdim {

using detail::json;
using detail::to_json;

ExampleLaw law_from_config(const RunConfig& config) { return make_example_law(config.law.name, config.law.grid_n); }

SolveOptions solve_options(const RunConfig& config) {
  SolveOptions o;
  o.tol = config.alpha.tol;
  o.mc_samples = config.alpha.mc_samples;
  o.force_monte_carlo = config.alpha.force_monte_carlo;
  o.seed = config.seed;
  o.jobs = config.jobs;
  return o;
}

MartingaleOptions martingale_options(const RunConfig& config) {
  MartingaleOptions o;
  o.mode = config.martingale.mode;
  o.depth = config.martingale.depth;
  o.eps_rel = config.martingale.eps_rel;
  o.heavy_threshold = config.martingale.heavy_threshold;
  return o;
}

std::vector<double> smallball_grid(const RunConfig& config) {
  return log_grid(config.smallball.grid_lo, config.smallball.grid_hi, config.smallball.per_decade);
}

SmallBallOptions smallball_options(const RunConfig& config) {
  SmallBallOptions o;
  o.min_hits = config.smallball.min_hits;
  o.exclude_low_confidence = config.smallball.exclude_low_confidence;
  return o;
}

ClassifyOptions classify_options(const RunConfig& config) {
  ClassifyOptions o;
  o.r2_threshold = config.smallball.r2_threshold;
  o.min_points = config.smallball.min_points;
  return o;
}

SpineOptions spine_options(const RunConfig& config) {
  SpineOptions o;
  o.depth = config.spine.depth;
  o.child_mart_depth = config.spine.child_mart_depth;
  o.child_eps_rel = config.spine.child_eps_rel;
  o.window = config.events.s0;
  o.lookahead = config.events.s0;
  return o;
}

EventParams event_params(const RunConfig& config) {
  EventParams p;
  p.C = config.events.C;
  p.rho = config.events.rho;
  p.s0 = config.events.s0;
  p.R = make_ratio_predicate(config.events.R, config.events.R_parameter);
  p.p0_hat = config.events.p0_hat;
  return p;
}

BoxCountEnsemble run_boxcount(const ReductionLaw& law, const RunConfig& config) {
  BoxCountEnsemble ens;
  for (int k = config.boxcount.eps_min_exp; k <= config.boxcount.eps_max_exp; ++k) {
    ens.epsilons.push_back(std::ldexp(1.0, -k));
  }
  ens.realizations.resize(config.boxcount.realizations);
  for (std::size_t i = 0; i < ens.realizations.size(); ++i) {
    Stream stream(config.seed, StreamStage::kGeometry, i);
    const RealizedSet set = realize(law, Placement::kLeftRightEnds, config.boxcount.depth, stream);
    ens.realizations[i] = box_count(set, ens.epsilons);
  }
  RunningStats slopes;
  for (const auto& r : ens.realizations) {
    if (r.fit) slopes.add(r.fit->slope);
  }
  ens.fitted = slopes.count();
  ens.mean_slope = slopes.mean();
  ens.slope_sd = std::sqrt(slopes.variance());
  return ens;
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json provenance(const char* stage, std::uint64_t seed, StreamStage stream_stage, std::size_t samples) {
  return {{"stage", stage},
          {"seed", seed},
          {"stream_stage", static_cast<std::uint64_t>(stream_stage)},
          {"samples", samples}};
}

class Run {
 public:
  Run(const RunConfig& config, const PipelineOptions& options) : config_(config), options_(options) {}

  PipelineResult execute() {
    report_["metadata"] = {{"tool", "packdim"},
                           {"version", "0.1.0"},
                           {"timestamp", options_.timestamp.empty() ? utc_now() : options_.timestamp}};
    report_["config"] = json::parse(expand_config(config_));
    report_["stages"] = json::object();
    if (options_.write_files) std::filesystem::create_directories(config_.output_dir);
    try {
      stage("law", [&] { law_stage(); });
      stage("alpha", [&] { alpha_stage(); });
      stage("simulate-x", [&] { martingale_stage(); });
      stage("smallball", [&] { smallball_stage(); });
      stage("classify", [&] { classify_stage(); });
      stage("gauge-test", [&] { gauge_stage(); });
      stage("verdict", [&] { verdict_stage(); });
      if (config_.spine.enabled) {
        stage("spine", [&] { spine_stage(); });
        stage("audit", [&] { audit_stage(); });
      }
      if (config_.boxcount.enabled) stage("boxcount", [&] { boxcount_stage(); });
      report_["status"] = {{"ok", true}};
    } catch (const StageFailure&) {
      result_.exit_code = kExitStageFailure;
      report_["status"] = {{"ok", false}, {"failed_stage", result_.failed_stage}, {"error", result_.error}};
    }
    result_.report = report_.dump(2) + "\n";
    if (options_.write_files) {
      result_.report_path = (std::filesystem::path(config_.output_dir) / "report.json").string();
      write("report.json", result_.report);
    }
    return result_;
  }

 private:
  struct StageFailure {};

  void stage(const char* name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      result_.failed_stage = name;
      result_.error = e.what();
      throw StageFailure{};
    }
  }

  void write(const std::string& file, const std::string& content) {
    std::ofstream out(std::filesystem::path(config_.output_dir) / file, std::ios::binary);
    if (!out) throw ResourceError("cannot write " + file + " in " + config_.output_dir);
    out << content;
  }

  json& stage_block(const char* name) { return report_["stages"][name]; }

  void law_stage() {
    law_ = law_from_config(config_);
    stage_block("law") = {{"name", law_->name}, {"slots", law_->law.slots},
                          {"closed_form_moment", law_->law.has_moment()},
                          {"warnings", law_->warnings}};
  }

  void alpha_stage() {
    dimension_ = solve_alpha(law_->law, solve_options(config_));
    const bool mc = dimension_->method == SolveMethod::kBisectionOnMonteCarlo;
    stage_block("alpha") = {
        {"provenance", provenance("alpha", config_.seed, StreamStage::kMoment, mc ? dimension_->samples : 0)},
        {"result", to_json(*dimension_)}};
  }

  void martingale_stage() {
    const auto opts = martingale_options(config_);
    samples_ = simulate_X_ensemble(law_->law, dimension_->alpha, opts, config_.martingale.samples, config_.seed,
                                   config_.jobs);
    RunningStats stats, depth, frontier;
    std::size_t low = 0, extinct = 0;
    for (const auto& s : samples_) {
      stats.add(s.value);
      depth.add(s.depth_used);
      frontier.add(s.frontier_mass);
      low += s.low_confidence ? 1 : 0;
      extinct += s.value == 0.0 ? 1 : 0;
    }
    stage_block("simulate-x") = {
        {"provenance", provenance("simulate-x", config_.seed, StreamStage::kMartingale, samples_.size())},
        {"mode", to_string(opts.mode)},
        {"mean", stats.mean()},
        {"std_error", stats.std_error()},
        {"variance", stats.variance()},
        {"extinct", extinct},
        {"low_confidence", low},
        {"mean_depth_used", depth.mean()},
        {"mean_frontier_mass", frontier.mean()},
        {"artifact", "samples.csv"}};
    if (options_.write_files) {
      std::ostringstream os;
      write_samples_csv(os, samples_);
      write("samples.csv", os.str());
    }
  }

  void smallball_stage() {
    const auto grid = smallball_grid(config_);
    table_ = smallball_cdf(samples_, grid, smallball_options(config_));
    stage_block("smallball") = {
        {"provenance", provenance("smallball", config_.seed, StreamStage::kMartingale, samples_.size())},
        {"table", to_json(*table_)},
        {"artifact", "smallball.csv"}};
    if (options_.write_files) {
      std::ostringstream os;
      write_smallball_csv(os, *table_);
      write("smallball.csv", os.str());
    }
  }

  void classify_stage() {
    profile_ = classify_decay(*table_, classify_options(config_));
    json block = {{"provenance", provenance("classify", config_.seed, StreamStage::kMartingale, table_->positive)},
                  {"profile", to_json(*profile_)}};
    block["fit_range_polynomial"] = nullptr;
    if (profile_->regime != DecayRegime::kDegenerate) {
      try {
        const DecayFit window = fit_polynomial_decay(*table_, config_.smallball.fit_lo, config_.smallball.fit_hi);
        block["fit_range_polynomial"] = {{"range", {config_.smallball.fit_lo, config_.smallball.fit_hi}},
                                         {"beta", window.line.slope},
                                         {"fit", to_json(window.line)}};
      } catch (const ContractError&) {
      }
    }
    stage_block("classify") = block;
    if (options_.write_files) write("profile.json", profile_json(*profile_));
  }

  void gauge_stage() {
    json block;
    block["provenance"] = provenance("gauge-test", config_.seed, StreamStage::kGeneric, 0);
    if (!profile_->beta) {
      block["skipped"] = "no fitted beta for regime " + std::string(to_string(profile_->regime));
    } else {
      const GaugeSpec gauge = build_gauge(config_.gauge, dimension_->alpha, profile_->beta);
      const auto closed = integral_test(gauge, *profile_->beta);
      const auto numeric = integral_test_numeric(gauge, *profile_->beta);
      block["gauge"] = to_json(gauge);
      block["beta"] = *profile_->beta;
      block["result"] = to_json(closed);
      block["numeric"] = to_json(numeric);
    }
    stage_block("gauge-test") = block;
  }

  void verdict_stage() {
    VerdictContext ctx;
    if (dimension_->ci_halfwidth > 0.0) ctx.alpha_ci = dimension_->ci_halfwidth;
    verdict_ = verdict(*profile_, dimension_->alpha, ctx);
    stage_block("verdict") = {{"provenance", provenance("verdict", config_.seed, StreamStage::kGeneric, 0)},
                              {"verdict", to_json(*verdict_)}};
    if (options_.write_files) write("verdict.json", verdict_json(*verdict_));
  }

  void spine_stage() {
    spines_ = sample_spines(law_->law, dimension_->alpha, spine_options(config_), config_.spine.spines,
                            config_.seed, config_.jobs);
    stage_block("spine") = {
        {"provenance", provenance("spine", config_.seed, StreamStage::kSpine, spines_.size())},
        {"depth", config_.spine.depth},
        {"child_mart_depth", config_.spine.child_mart_depth}};
  }

  void audit_stage() {
    const GaugeSpec gauge = build_gauge(config_.events.gauge, dimension_->alpha, profile_->beta);
    const EventParams params = event_params(config_);
    const CovarianceReport rep = covariance_audit(spines_, gauge, params);
    json block = {{"provenance", provenance("audit", config_.seed, StreamStage::kSpine, spines_.size())},
                  {"gauge", to_json(gauge)},
                  {"report", to_json(rep)}};
    if (params.s0 > 0) {
      const P0Estimate p0 =
          estimate_p0(law_->law, dimension_->alpha, params, config_.events.p0_samples, config_.seed, config_.jobs);
      block["p0"] = {{"provenance", provenance("p0", config_.seed, StreamStage::kAssumption, p0.samples)},
                     {"value", p0.value},
                     {"std_error", p0.std_error},
                     {"ci", to_json(p0.ci)},
                     {"warning", p0.warning}};
    }
    stage_block("audit") = block;
    if (options_.write_files) write("audit.json", audit_json(rep));
  }

  void boxcount_stage() {
    const BoxCountEnsemble ens = run_boxcount(law_->law, config_);
    json reals = json::array();
    for (const auto& r : ens.realizations) reals.push_back(to_json(r));
    stage_block("boxcount") = {
        {"provenance", provenance("boxcount", config_.seed, StreamStage::kGeometry, ens.realizations.size())},
        {"depth", config_.boxcount.depth},
        {"mean_slope", ens.mean_slope},
        {"slope_sd", ens.slope_sd},
        {"fitted", ens.fitted},
        {"realizations", reals},
        {"note", "probe of a finite-depth approximant, not a measure"}};
    if (options_.write_files && !ens.realizations.empty()) {
      std::ostringstream os;
      write_boxcount_csv(os, ens.realizations.front());
      write("boxcount.csv", os.str());
    }
  }

  const RunConfig& config_;
  const PipelineOptions& options_;
  PipelineResult result_;
  json report_;
  std::optional<ExampleLaw> law_;
  std::optional<DimensionResult> dimension_;
  std::vector<MartingaleEstimate> samples_;
  std::optional<SmallBallTable> table_;
  std::optional<DecayProfile> profile_;
  std::optional<Verdict> verdict_;
  std::vector<SpinePath> spines_;
};

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options) {
  Run run(config, options);
  return run.execute();
}

std::string strip_metadata(const std::string& report) {
  json j = json::parse(report);
  j.erase("metadata");
  return j.dump(2);
}

}  // namespace packdim
