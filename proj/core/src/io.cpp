#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json_io.hpp"
#include "packdim/error.hpp"

namespace packdim {

namespace detail {

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const ConfidenceInterval& ci) { return json::array({ci.lo, ci.hi}); }

json to_json(const DimensionResult& r) {
  json j;
  j["alpha"] = r.alpha;
  j["method"] = to_string(r.method);
  j["residual"] = r.residual;
  j["ci_halfwidth"] = r.ci_halfwidth;
  j["samples"] = r.samples;
  j["notes"] = r.notes;
  return j;
}

json to_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"slope_se", f.slope_se}, {"r2", f.r2}, {"points", f.points}};
}

json to_json(const DecayProfile& p) {
  json j;
  j["regime"] = to_string(p.regime);
  j["beta"] = optional_json(p.beta);
  j["beta_se"] = optional_json(p.beta_se);
  j["t0"] = optional_json(p.t0);
  auto fit = [](const std::optional<DecayFit>& f) {
    if (!f) return json(nullptr);
    json j = to_json(f->line);
    j["a"] = f->a;
    j["p"] = f->p;
    return j;
  };
  j["polynomial_fit"] = fit(p.polynomial_fit);
  j["exponential_fit"] = fit(p.exponential_fit);
  j["explanation"] = p.explanation;
  return j;
}

json to_json(const SmallBallTable& t) {
  json pts = json::array();
  for (const auto& p : t.points) {
    pts.push_back({{"a", p.a}, {"hits", p.hits}, {"p", p.p}, {"ci", to_json(p.ci)}, {"reliable", p.reliable}});
  }
  return {{"total", t.total},         {"positive", t.positive}, {"extinct", t.extinct},
          {"excluded_low_confidence", t.excluded_low_confidence},
          {"mean", t.mean},           {"variance", t.variance}, {"min", t.min},
          {"max", t.max},             {"points", pts}};
}

json to_json(const GaugeSpec& g) {
  json j;
  j["family"] = to_string(g.family());
  j["alpha"] = g.alpha();
  switch (g.family()) {
    case GaugeFamily::kConstant:
      j["c"] = g.parameter();
      break;
    case GaugeFamily::kLogLogPower:
    case GaugeFamily::kLogPower:
      j["theta"] = g.parameter();
      break;
    case GaugeFamily::kTabulated:
      j["table"] = {{"t", g.table_t()}, {"g", g.table_g()}};
      break;
  }
  j["formula"] = g.formula();
  return j;
}

json to_json(const IntegralTestResult& r) { return {{"outcome", to_string(r.outcome)}, {"method", r.method}}; }

json to_json(const Verdict& v) {
  json j;
  j["outcome"] = to_string(v.outcome);
  j["gauge"] = v.gauge ? to_json(*v.gauge) : json(nullptr);
  json list = json::array();
  for (const auto& item : v.justification) {
    json values = json::object();
    for (const auto& [k, x] : item.values) values[k] = finite_or_null(x);
    list.push_back({{"rule", item.rule}, {"statement", item.statement}, {"values", values}});
  }
  j["justification"] = list;
  return j;
}

json to_json(const CovarianceReport& r) {
  json j;
  j["spines"] = r.spines;
  j["depth"] = r.depth;
  j["s0"] = r.s0;
  json levels = json::array();
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    levels.push_back({{"k", r.levels[k]},
                      {"q_hat", r.q_hat[k]},
                      {"ci", to_json(r.q_ci[k])},
                      {"evaluated", r.evaluated[k]},
                      {"partial_sum", r.partial_sums[k]},
                      {"covariance_sum", r.covariance_sums[k]},
                      {"near_pair_term", r.near_pair_terms[k]},
                      {"bc_ratio", finite_or_null(r.bc_ratio[k])},
                      {"mean_l_alpha", k < r.mean_l_alpha.size() ? json(r.mean_l_alpha[k]) : json(nullptr)}});
  }
  j["levels"] = levels;
  json joint = json::array();
  for (const auto& row : r.joint) {
    json jr = json::array();
    for (double x : row) jr.push_back(x < 0.0 ? json(nullptr) : json(x));
    joint.push_back(jr);
  }
  j["joint"] = joint;
  j["bc_ratio_final"] = finite_or_null(r.bc_ratio_final);
  j["m1_hat"] = r.m1_hat;
  j["m1_se"] = r.m1_se;
  j["m1_ci"] = to_json(r.m1_ci);
  j["delta"] = r.delta;
  j["eq_x0"] = r.eq_x0;
  json markov = json::array();
  for (const auto& m : r.markov) {
    markov.push_back({{"i", m.i},
                      {"j", m.j},
                      {"m", m.m},
                      {"observed", m.observed},
                      {"ci", to_json(m.ci)},
                      {"bound", m.bound},
                      {"holds", m.holds}});
  }
  j["markov"] = markov;
  j["markov_all_hold"] = r.markov_all_hold;
  j["mean_t_q"] = r.mean_t_q;
  j["mean_abs_log_t_q"] = r.mean_abs_log_t_q;
  j["tail_bound"] = r.tail_bound;
  j["tail_empirical"] = r.tail_empirical;
  j["limsup_window"] = {r.limsup_window_lo, r.limsup_window_hi};
  j["limsup_hit_fraction"] = r.limsup_hit_fraction;
  j["resamples"] = r.resamples;
  j["rejections"] = r.rejections;
  j["biased"] = r.biased;
  j["m2_note"] = r.m2_note;
  j["notes"] = r.notes;
  return j;
}

json to_json(const BoxCountResult& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"epsilon", p.epsilon}, {"boxes", p.boxes}, {"excluded", p.excluded}});
  return {{"points", pts}, {"fit", r.fit ? to_json(*r.fit) : json(nullptr)}, {"warnings", r.warnings}};
}

}  // namespace detail

using detail::json;

std::string dimension_json(const DimensionResult& result) { return detail::to_json(result).dump(2) + "\n"; }

void write_samples_csv(std::ostream& os, std::span<const MartingaleEstimate> samples) {
  os << "value,depth,frontier_mass,low_confidence,mode\n";
  os.precision(17);
  for (const auto& s : samples) {
    os << s.value << ',' << s.depth_used << ',' << s.frontier_mass << ',' << (s.low_confidence ? 1 : 0) << ','
       << to_string(s.mode) << '\n';
  }
}

std::vector<MartingaleEstimate> read_samples_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("value,depth,frontier_mass", 0) != 0) {
    throw ConfigError("sample file: missing header value,depth,frontier_mass,...");
  }
  std::vector<MartingaleEstimate> out;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string value, depth, frontier, low, mode;
    std::getline(ss, value, ',');
    std::getline(ss, depth, ',');
    std::getline(ss, frontier, ',');
    std::getline(ss, low, ',');
    std::getline(ss, mode, ',');
    MartingaleEstimate e;
    try {
      e.value = std::stod(value);
      e.depth_used = std::stoi(depth);
      e.frontier_mass = std::stod(frontier);
      e.low_confidence = !low.empty() && low != "0";
    } catch (const std::exception&) {
      throw ConfigError("sample file: malformed row " + std::to_string(row));
    }
    e.mode = mode == "fixed-depth" ? TruncationMode::kFixedDepth : TruncationMode::kAdaptive;
    out.push_back(e);
  }
  return out;
}

void write_smallball_csv(std::ostream& os, const SmallBallTable& table) {
  os << "a,hits,p,ci_lo,ci_hi,reliable\n";
  os.precision(17);
  for (const auto& p : table.points) {
    os << p.a << ',' << p.hits << ',' << p.p << ',' << p.ci.lo << ',' << p.ci.hi << ',' << (p.reliable ? 1 : 0)
       << '\n';
  }
}

std::string profile_json(const DecayProfile& profile) { return detail::to_json(profile).dump(2) + "\n"; }

DecayProfile parse_profile_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("profile: not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("regime") || !j.at("regime").is_string()) {
    throw ConfigError("profile: missing string field 'regime'");
  }
  DecayProfile p;
  const auto regime = parse_regime(j.at("regime").get<std::string>());
  if (!regime) throw ConfigError("profile: unknown regime '" + j.at("regime").get<std::string>() + "'");
  p.regime = *regime;
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) throw ConfigError(std::string("profile: '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  p.beta = opt("beta");
  p.beta_se = opt("beta_se");
  p.t0 = opt("t0");
  if (j.contains("explanation") && j.at("explanation").is_string()) p.explanation = j.at("explanation").get<std::string>();
  return p;
}

std::string gauge_json(const GaugeSpec& gauge) { return detail::to_json(gauge).dump(2) + "\n"; }

std::string integral_test_json(const GaugeSpec& gauge, double beta, const IntegralTestResult& result) {
  json j;
  j["gauge"] = detail::to_json(gauge);
  j["beta"] = beta;
  j["result"] = detail::to_json(result);
  return j.dump(2) + "\n";
}

std::string verdict_json(const Verdict& verdict) { return detail::to_json(verdict).dump(2) + "\n"; }

namespace {

char flag_char(const std::vector<EventFlag>& flags, std::size_t i) {
  if (i >= flags.size()) return '-';
  switch (flags[i]) {
    case EventFlag::kTrue:
      return '1';
    case EventFlag::kFalse:
      return '0';
    case EventFlag::kUnevaluated:
      return '?';
  }
  return '-';
}

}  // namespace

void write_spines_csv(std::ostream& os, std::span<const SpinePath> spines) {
  os << "spine,k,child,T,l,x_hat,R,B\n";
  os.precision(17);
  for (std::size_t s = 0; s < spines.size(); ++s) {
    const auto& sp = spines[s];
    for (int k = 1; k <= sp.depth; ++k) {
      const auto& lv = sp.at(k);
      const auto idx = static_cast<std::size_t>(k - 1);
      os << s << ',' << k << ',' << lv.child << ',' << lv.T << ',' << lv.l << ',' << lv.x_hat << ','
         << flag_char(sp.R, idx) << ',' << flag_char(sp.B, idx) << '\n';
    }
  }
}

std::string audit_json(const CovarianceReport& report) { return detail::to_json(report).dump(2) + "\n"; }

void write_boxcount_csv(std::ostream& os, const BoxCountResult& result) {
  os << "epsilon,boxes,excluded\n";
  os.precision(17);
  for (const auto& p : result.points) os << p.epsilon << ',' << p.boxes << ',' << (p.excluded ? 1 : 0) << '\n';
}

}  // namespace packdim
