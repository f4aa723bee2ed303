#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "packdim/config.hpp"
#include "packdim/error.hpp"
#include "packdim/io.hpp"
#include "packdim/pipeline.hpp"

namespace fs = std::filesystem;
using namespace packdim;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
};

void add_common(CLI::App* sub, Common& c, bool config_required = true) {
  auto* opt = sub->add_option("--config", c.config_path, "JSON run configuration");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "Override the root seed");
  sub->add_option("--out", c.out, "Override the output directory");
  sub->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
}

RunConfig load(const Common& c) {
  RunConfig cfg = load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.output_dir = *c.out;
  if (c.jobs) cfg.jobs = *c.jobs;
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DimensionResult solve(const RunConfig& cfg, const ExampleLaw& law) { return solve_alpha(law.law, solve_options(cfg)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"packdim: random recursive fractals, small-ball decay and exact packing dimension checks"};
  app.require_subcommand(1);

  Common c_alpha, c_sim, c_sb, c_spine, c_audit, c_box, c_report;

  auto* alpha = app.add_subcommand("alpha", "Solve E[sum T_i^alpha] = 1");
  add_common(alpha, c_alpha);
  std::string alpha_format = "json";
  alpha->add_option("--format", alpha_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* sim = app.add_subcommand("simulate-x", "Simulate the martingale limit X; writes samples.csv");
  add_common(sim, c_sim);

  auto* sb = app.add_subcommand("smallball", "Small-ball CDF and decay profile from a sample file");
  add_common(sb, c_sb);
  std::string samples_path;
  sb->add_option("--samples", samples_path, "Sample CSV (default: <out>/samples.csv)");

  auto* spine = app.add_subcommand("spine", "Sample spines under Q; writes spines.csv");
  add_common(spine, c_spine);
  std::optional<double> spine_beta;
  spine->add_option("--beta", spine_beta, "Beta for an events gauge with unset theta");

  auto* audit = app.add_subcommand("audit", "Covariance and Borel-Cantelli audit; writes audit.json");
  add_common(audit, c_audit);
  std::optional<double> audit_beta;
  audit->add_option("--beta", audit_beta, "Beta for an events gauge with unset theta");

  auto* gauge_test = app.add_subcommand("gauge-test", "Integral test for a gauge family");
  std::string family = "loglog-power";
  double theta = 1.0, c_value = 1.0, beta = 1.0, gauge_alpha = 0.5;
  bool numeric = false;
  gauge_test->add_option("--family", family, "constant, loglog-power or log-power")
      ->check(CLI::IsMember({"constant", "loglog-power", "log-power"}));
  gauge_test->add_option("--theta", theta, "Exponent of the power families");
  gauge_test->add_option("--c", c_value, "Constant of the constant family");
  gauge_test->add_option("--beta", beta, "Small-ball exponent")->required();
  gauge_test->add_option("--alpha", gauge_alpha, "Dimension (only enters the gauge formula)");
  gauge_test->add_flag("--numeric", numeric, "Use the numeric heuristic instead of the closed form");

  auto* verdict_cmd = app.add_subcommand("verdict", "Verdict from a decay profile JSON");
  std::string profile_path;
  double verdict_alpha = 0.0;
  std::optional<std::string> verdict_out;
  verdict_cmd->add_option("--profile", profile_path, "DecayProfile JSON")->required()->check(CLI::ExistingFile);
  verdict_cmd->add_option("--alpha", verdict_alpha, "Dimension alpha")->required();
  verdict_cmd->add_option("--out", verdict_out, "Also write verdict.json into this directory");

  auto* box = app.add_subcommand("boxcount", "Box-counting slopes of realized sets; writes boxcount.csv");
  add_common(box, c_box);

  auto* report = app.add_subcommand("report", "Run the whole pipeline; writes report.json");
  add_common(report, c_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*alpha) {
      const RunConfig cfg = load(c_alpha);
      const ExampleLaw law = law_from_config(cfg);
      const DimensionResult r = solve(cfg, law);
      const std::string text = dimension_json(r);
      write_file(fs::path(cfg.output_dir) / "alpha.json", text);
      if (alpha_format == "json") {
        std::cout << text;
      } else {
        std::cout.precision(12);
        std::cout << "alpha    " << r.alpha << "\nmethod   " << to_string(r.method) << "\nresidual " << r.residual
                  << "\nci       " << r.ci_halfwidth << "\n";
      }
    } else if (*sim) {
      const RunConfig cfg = load(c_sim);
      const ExampleLaw law = law_from_config(cfg);
      const DimensionResult r = solve(cfg, law);
      const auto samples = simulate_X_ensemble(law.law, r.alpha, martingale_options(cfg), cfg.martingale.samples,
                                               cfg.seed, cfg.jobs);
      std::ostringstream os;
      write_samples_csv(os, samples);
      write_file(fs::path(cfg.output_dir) / "samples.csv", os.str());
      RunningStats stats;
      std::size_t low = 0;
      for (const auto& s : samples) {
        stats.add(s.value);
        low += s.low_confidence ? 1 : 0;
      }
      std::cout.precision(10);
      std::cout << "{\n  \"alpha\": " << r.alpha << ",\n  \"samples\": " << samples.size() << ",\n  \"mean\": "
                << stats.mean() << ",\n  \"std_error\": " << stats.std_error() << ",\n  \"low_confidence\": " << low
                << "\n}\n";
    } else if (*sb) {
      const RunConfig cfg = load(c_sb);
      const std::string path = samples_path.empty() ? (fs::path(cfg.output_dir) / "samples.csv").string() : samples_path;
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot read sample file '" + path + "'");
      const auto samples = read_samples_csv(in);
      const auto grid = smallball_grid(cfg);
      const SmallBallTable table = smallball_cdf(samples, grid, smallball_options(cfg));
      const DecayProfile profile = classify_decay(table, classify_options(cfg));
      std::ostringstream os;
      write_smallball_csv(os, table);
      write_file(fs::path(cfg.output_dir) / "smallball.csv", os.str());
      const std::string text = profile_json(profile);
      write_file(fs::path(cfg.output_dir) / "profile.json", text);
      std::cout << text;
    } else if (*spine || *audit) {
      const Common& common = *spine ? c_spine : c_audit;
      const std::optional<double> b = *spine ? spine_beta : audit_beta;
      const RunConfig cfg = load(common);
      const ExampleLaw law = law_from_config(cfg);
      const DimensionResult r = solve(cfg, law);
      auto spines = sample_spines(law.law, r.alpha, spine_options(cfg), cfg.spine.spines, cfg.seed, cfg.jobs);
      const GaugeSpec gauge = build_gauge(cfg.events.gauge, r.alpha, b);
      const EventParams params = event_params(cfg);
      if (*spine) {
        for (auto& sp : spines) evaluate_events(sp, gauge, params);
        std::ostringstream os;
        write_spines_csv(os, spines);
        write_file(fs::path(cfg.output_dir) / "spines.csv", os.str());
        std::cout << "wrote " << spines.size() << " spines to " << (fs::path(cfg.output_dir) / "spines.csv").string()
                  << "\n";
      } else {
        const CovarianceReport rep = covariance_audit(spines, gauge, params);
        const std::string text = audit_json(rep);
        write_file(fs::path(cfg.output_dir) / "audit.json", text);
        std::cout.precision(6);
        std::cout << "M1_hat " << rep.m1_hat << " [" << rep.m1_ci.lo << ", " << rep.m1_ci.hi << "]\n"
                  << "BC ratio " << rep.bc_ratio_final << "\nlimsup hit fraction " << rep.limsup_hit_fraction
                  << "\nMarkov bound holds " << (rep.markov_all_hold ? "yes" : "no") << "\nwrote "
                  << (fs::path(cfg.output_dir) / "audit.json").string() << "\n";
      }
    } else if (*gauge_test) {
      const auto fam = *parse_gauge_family(family);
      const GaugeSpec g = fam == GaugeFamily::kConstant   ? GaugeSpec::constant(gauge_alpha, c_value)
                          : fam == GaugeFamily::kLogPower ? GaugeSpec::log_power(gauge_alpha, theta)
                                                          : GaugeSpec::loglog_power(gauge_alpha, theta);
      const auto res = numeric ? integral_test_numeric(g, beta) : integral_test(g, beta);
      std::cout << integral_test_json(g, beta, res);
    } else if (*verdict_cmd) {
      const DecayProfile profile = parse_profile_json(read_file(profile_path));
      const std::string text = verdict_json(verdict(profile, verdict_alpha));
      if (verdict_out) write_file(fs::path(*verdict_out) / "verdict.json", text);
      std::cout << text;
    } else if (*box) {
      const RunConfig cfg = load(c_box);
      const ExampleLaw law = law_from_config(cfg);
      const BoxCountEnsemble ens = run_boxcount(law.law, cfg);
      std::ostringstream os;
      os << "realization,epsilon,boxes,excluded\n";
      os.precision(17);
      for (std::size_t i = 0; i < ens.realizations.size(); ++i) {
        for (const auto& p : ens.realizations[i].points) {
          os << i << ',' << p.epsilon << ',' << p.boxes << ',' << (p.excluded ? 1 : 0) << '\n';
        }
      }
      write_file(fs::path(cfg.output_dir) / "boxcount.csv", os.str());
      std::ostringstream js;
      js.precision(17);
      js << "{\n  \"realizations\": " << ens.realizations.size() << ",\n  \"fitted\": " << ens.fitted
         << ",\n  \"mean_slope\": " << ens.mean_slope << ",\n  \"slope_sd\": " << ens.slope_sd << "\n}\n";
      write_file(fs::path(cfg.output_dir) / "boxcount.json", js.str());
      std::cout << js.str();
    } else if (*report) {
      const RunConfig cfg = load(c_report);
      const PipelineResult res = run_pipeline(cfg);
      if (res.exit_code != kExitOk) {
        std::cerr << "stage '" << res.failed_stage << "' failed: " << res.error << "\n";
        return res.exit_code;
      }
      std::cout << "wrote " << res.report_path << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageFailure;
  }
  return kExitOk;
}
