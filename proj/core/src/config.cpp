#include "packdim/config.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "packdim/error.hpp"
#include "packdim/gallery.hpp"
#include "packdim/spine.hpp"

namespace packdim {

using json = nlohmann::ordered_json;

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& message) { errors_.push_back(path + ": " + message); }

  // Flags keys of `obj` outside `allowed`.
  void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
      if (!names.count(key)) error(join(path, key), "unknown field");
    }
  }

  const json* section(const json& root, const std::string& key) {
    if (!root.contains(key)) return nullptr;
    const json& s = root.at(key);
    if (!s.is_object()) {
      error(key, "must be an object");
      return nullptr;
    }
    return &s;
  }

  void number(const json& obj, const std::string& path, const char* key, double& out,
              const std::function<bool(double)>& ok = nullptr, const char* range = nullptr) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string p = join(path, key);
    if (!v.is_number()) {
      error(p, "must be a number");
      return;
    }
    const double x = v.get<double>();
    if (ok && !ok(x)) {
      error(p, std::string("out of range, expected ") + range);
      return;
    }
    out = x;
  }

  template <class Int>
  void integer(const json& obj, const std::string& path, const char* key, Int& out, long long lo, long long hi) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string p = join(path, key);
    if (!v.is_number_integer()) {
      error(p, "must be an integer");
      return;
    }
    const long long x = v.get<long long>();
    if (x < lo || x > hi) {
      error(p, "out of range, expected [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return;
    }
    out = static_cast<Int>(x);
  }

  void boolean(const json& obj, const std::string& path, const char* key, bool& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      error(join(path, key), "must be true or false");
      return;
    }
    out = v.get<bool>();
  }

  void string(const json& obj, const std::string& path, const char* key, std::string& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      error(join(path, key), "must be a string");
      return;
    }
    out = v.get<std::string>();
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::vector<std::string>& errors_;
};

bool positive(double x) { return x > 0.0; }
bool unit_open(double x) { return x > 0.0 && x < 1.0; }

void read_gauge(Reader& rd, const json& obj, const std::string& path, GaugeConfig& g) {
  rd.known_keys(obj, path, {"family", "theta", "c", "table"});
  if (obj.contains("family")) {
    std::string name;
    rd.string(obj, path, "family", name);
    if (auto f = parse_gauge_family(name)) {
      g.family = *f;
    } else if (!name.empty()) {
      rd.error(Reader::join(path, "family"), "unknown gauge family '" + name +
                                                 "', expected constant, loglog-power, log-power or tabulated");
    }
  }
  if (obj.contains("theta")) {
    const json& t = obj.at("theta");
    if (t.is_null()) {
      g.theta.reset();
    } else if (!t.is_number() || !(t.get<double>() >= 0.0)) {
      rd.error(Reader::join(path, "theta"), "must be a number >= 0 or null");
    } else {
      g.theta = t.get<double>();
    }
  }
  rd.number(obj, path, "c", g.c, [](double x) { return x >= 0.0; }, ">= 0");
  if (obj.contains("table")) {
    const json& t = obj.at("table");
    const std::string tp = Reader::join(path, "table");
    if (!t.is_object() || !t.contains("t") || !t.contains("g") || !t.at("t").is_array() || !t.at("g").is_array()) {
      rd.error(tp, "must be an object with arrays t and g");
    } else {
      std::vector<double> tv, gv;
      bool fine = true;
      for (const auto& x : t.at("t")) {
        if (!x.is_number()) fine = false; else tv.push_back(x.get<double>());
      }
      for (const auto& x : t.at("g")) {
        if (!x.is_number()) fine = false; else gv.push_back(x.get<double>());
      }
      if (!fine) {
        rd.error(tp, "entries must be numbers");
      } else if (!tv.empty() || !gv.empty()) {
        try {
          (void)GaugeSpec::tabulated(1.0, tv, gv);
          g.table_t = tv;
          g.table_g = gv;
        } catch (const ConfigError& e) {
          rd.error(tp, e.what());
        }
      }
    }
  }
  if (g.family == GaugeFamily::kTabulated && g.table_t.empty()) rd.error(path, "tabulated family needs a table");
}

json gauge_json(const GaugeConfig& g) {
  json j;
  j["family"] = to_string(g.family);
  j["theta"] = g.theta ? json(*g.theta) : json(nullptr);
  j["c"] = g.c;
  j["table"] = {{"t", g.table_t}, {"g", g.table_g}};
  return j;
}

}  // namespace

ConfigResult validate_config(const std::string& text) {
  ConfigResult result;
  auto& errors = result.errors;
  Reader rd(errors);
  json root;
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      errors.push_back(std::string("config: not valid JSON: ") + e.what());
      return result;
    }
  }
  if (!root.is_object()) {
    errors.push_back("config: top level must be a JSON object");
    return result;
  }
  rd.known_keys(root, "", {"law", "seed", "jobs", "output_dir", "alpha", "martingale", "smallball", "gauge", "spine",
                           "events", "boxcount"});

  RunConfig cfg;
  if (!root.contains("law")) {
    rd.error("law", "required field missing");
  } else {
    const json& law = root.at("law");
    if (law.is_string()) {
      cfg.law.name = law.get<std::string>();
    } else if (law.is_object()) {
      rd.known_keys(law, "law", {"name", "grid_n"});
      if (!law.contains("name")) rd.error("law.name", "required field missing");
      rd.string(law, "law", "name", cfg.law.name);
      rd.integer(law, "law", "grid_n", cfg.law.grid_n, 2, 1LL << 24);
    } else {
      rd.error("law", "must be a law name or an object with name and grid_n");
    }
    if (!cfg.law.name.empty()) {
      try {
        (void)make_example_law(cfg.law.name, cfg.law.grid_n);
      } catch (const ConfigError& e) {
        rd.error("law", e.what());
      }
    }
  }
  if (!root.contains("seed")) {
    rd.error("seed", "required field missing");
  } else if (!root.at("seed").is_number_unsigned()) {
    rd.error("seed", "must be a nonnegative integer");
  } else {
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  rd.integer(root, "", "jobs", cfg.jobs, 0, 1024);
  rd.string(root, "", "output_dir", cfg.output_dir);

  if (const json* s = rd.section(root, "alpha")) {
    rd.known_keys(*s, "alpha", {"tol", "mc_samples", "force_monte_carlo"});
    rd.number(*s, "alpha", "tol", cfg.alpha.tol, [](double x) { return x >= 0.0; }, ">= 0 (0 picks the default)");
    rd.integer(*s, "alpha", "mc_samples", cfg.alpha.mc_samples, 100, 1LL << 32);
    rd.boolean(*s, "alpha", "force_monte_carlo", cfg.alpha.force_monte_carlo);
  }
  if (const json* s = rd.section(root, "martingale")) {
    rd.known_keys(*s, "martingale", {"samples", "mode", "depth", "eps_rel", "heavy_threshold"});
    rd.integer(*s, "martingale", "samples", cfg.martingale.samples, 1, 1LL << 32);
    std::string mode;
    rd.string(*s, "martingale", "mode", mode);
    if (mode == "fixed-depth") {
      cfg.martingale.mode = TruncationMode::kFixedDepth;
    } else if (mode == "adaptive") {
      cfg.martingale.mode = TruncationMode::kAdaptive;
    } else if (!mode.empty()) {
      rd.error("martingale.mode", "expected fixed-depth or adaptive");
    }
    rd.integer(*s, "martingale", "depth", cfg.martingale.depth, 1, 10'000);
    rd.number(*s, "martingale", "eps_rel", cfg.martingale.eps_rel, unit_open, "(0, 1)");
    rd.number(*s, "martingale", "heavy_threshold", cfg.martingale.heavy_threshold, positive, "> 0");
  }
  if (const json* s = rd.section(root, "smallball")) {
    auto& sb = cfg.smallball;
    rd.known_keys(*s, "smallball",
                  {"grid", "min_hits", "exclude_low_confidence", "fit_range", "r2_threshold", "min_points"});
    if (s->contains("grid")) {
      const json& g = s->at("grid");
      if (!g.is_object()) {
        rd.error("smallball.grid", "must be an object");
      } else {
        rd.known_keys(g, "smallball.grid", {"lo", "hi", "per_decade"});
        rd.number(g, "smallball.grid", "lo", sb.grid_lo, [](double x) { return x > 0.0 && x <= 1.0; }, "(0, 1]");
        rd.number(g, "smallball.grid", "hi", sb.grid_hi, [](double x) { return x > 0.0 && x <= 1.0; }, "(0, 1]");
        rd.integer(g, "smallball.grid", "per_decade", sb.per_decade, 1, 1000);
        if (!(sb.grid_lo < sb.grid_hi)) rd.error("smallball.grid", "lo must be smaller than hi");
      }
    }
    rd.integer(*s, "smallball", "min_hits", sb.min_hits, 1, 1LL << 32);
    rd.boolean(*s, "smallball", "exclude_low_confidence", sb.exclude_low_confidence);
    if (s->contains("fit_range")) {
      const json& f = s->at("fit_range");
      if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number()) {
        rd.error("smallball.fit_range", "must be [lo, hi]");
      } else if (!(f[0].get<double>() > 0.0 && f[0].get<double>() < f[1].get<double>() && f[1].get<double>() <= 1.0)) {
        rd.error("smallball.fit_range", "must satisfy 0 < lo < hi <= 1");
      } else {
        sb.fit_lo = f[0].get<double>();
        sb.fit_hi = f[1].get<double>();
      }
    }
    rd.number(*s, "smallball", "r2_threshold", sb.r2_threshold, [](double x) { return x > 0.0 && x <= 1.0; },
              "(0, 1]");
    rd.integer(*s, "smallball", "min_points", sb.min_points, 2, 10'000);
  }
  if (const json* s = rd.section(root, "gauge")) read_gauge(rd, *s, "gauge", cfg.gauge);
  if (const json* s = rd.section(root, "spine")) {
    rd.known_keys(*s, "spine", {"enabled", "spines", "depth", "child_mart_depth", "child_eps_rel"});
    rd.boolean(*s, "spine", "enabled", cfg.spine.enabled);
    rd.integer(*s, "spine", "spines", cfg.spine.spines, 2, 1LL << 30);
    rd.integer(*s, "spine", "depth", cfg.spine.depth, 2, 10'000);
    rd.integer(*s, "spine", "child_mart_depth", cfg.spine.child_mart_depth, 1, 1000);
    rd.number(*s, "spine", "child_eps_rel", cfg.spine.child_eps_rel, unit_open, "(0, 1)");
  }
  if (const json* s = rd.section(root, "events")) {
    auto& ev = cfg.events;
    rd.known_keys(*s, "events", {"C", "rho", "s0", "R", "p0_hat", "p0_samples", "gauge"});
    rd.number(*s, "events", "C", ev.C, [](double x) { return x >= 0.0; }, ">= 0");
    rd.number(*s, "events", "rho", ev.rho, unit_open, "(0, 1)");
    rd.integer(*s, "events", "s0", ev.s0, 0, 64);
    rd.number(*s, "events", "p0_hat", ev.p0_hat, [](double x) { return x > 0.0 && x <= 1.0; }, "(0, 1]");
    rd.integer(*s, "events", "p0_samples", ev.p0_samples, 1, 1LL << 32);
    if (s->contains("R")) {
      const json& r = s->at("R");
      if (r.is_string()) {
        ev.R = r.get<std::string>();
      } else if (r.is_object()) {
        rd.known_keys(r, "events.R", {"name", "parameter"});
        rd.string(r, "events.R", "name", ev.R);
        rd.number(r, "events.R", "parameter", ev.R_parameter);
      } else {
        rd.error("events.R", "must be a predicate name or {name, parameter}");
      }
      try {
        (void)make_ratio_predicate(ev.R, ev.R_parameter);
      } catch (const ConfigError& e) {
        rd.error("events.R", e.what());
      }
    }
    if (s->contains("gauge")) {
      if (!s->at("gauge").is_object()) {
        rd.error("events.gauge", "must be an object");
      } else {
        read_gauge(rd, s->at("gauge"), "events.gauge", ev.gauge);
      }
    }
  }
  if (const json* s = rd.section(root, "boxcount")) {
    auto& bc = cfg.boxcount;
    rd.known_keys(*s, "boxcount", {"enabled", "realizations", "depth", "eps_min_exp", "eps_max_exp"});
    rd.boolean(*s, "boxcount", "enabled", bc.enabled);
    rd.integer(*s, "boxcount", "realizations", bc.realizations, 1, 1'000'000);
    rd.integer(*s, "boxcount", "depth", bc.depth, 0, 40);
    rd.integer(*s, "boxcount", "eps_min_exp", bc.eps_min_exp, 0, 50);
    rd.integer(*s, "boxcount", "eps_max_exp", bc.eps_max_exp, 0, 50);
    if (bc.eps_min_exp > bc.eps_max_exp) rd.error("boxcount", "eps_min_exp must not exceed eps_max_exp");
  }
  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  ConfigResult res = validate_config(buf.str());
  if (!res.ok()) {
    std::string msg = "invalid config '" + path + "':";
    for (const auto& e : res.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return *res.config;
}

std::string expand_config(const RunConfig& c) {
  json j;
  j["law"] = {{"name", c.law.name}, {"grid_n", c.law.grid_n}};
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["output_dir"] = c.output_dir;
  j["alpha"] = {{"tol", c.alpha.tol},
                {"mc_samples", c.alpha.mc_samples},
                {"force_monte_carlo", c.alpha.force_monte_carlo}};
  j["martingale"] = {{"samples", c.martingale.samples},
                     {"mode", to_string(c.martingale.mode)},
                     {"depth", c.martingale.depth},
                     {"eps_rel", c.martingale.eps_rel},
                     {"heavy_threshold", c.martingale.heavy_threshold}};
  const auto& sb = c.smallball;
  j["smallball"] = {{"grid", {{"lo", sb.grid_lo}, {"hi", sb.grid_hi}, {"per_decade", sb.per_decade}}},
                    {"min_hits", sb.min_hits},
                    {"exclude_low_confidence", sb.exclude_low_confidence},
                    {"fit_range", {sb.fit_lo, sb.fit_hi}},
                    {"r2_threshold", sb.r2_threshold},
                    {"min_points", sb.min_points}};
  j["gauge"] = gauge_json(c.gauge);
  j["spine"] = {{"enabled", c.spine.enabled},
                {"spines", c.spine.spines},
                {"depth", c.spine.depth},
                {"child_mart_depth", c.spine.child_mart_depth},
                {"child_eps_rel", c.spine.child_eps_rel}};
  j["events"] = {{"C", c.events.C},
                 {"rho", c.events.rho},
                 {"s0", c.events.s0},
                 {"R", {{"name", c.events.R}, {"parameter", c.events.R_parameter}}},
                 {"p0_hat", c.events.p0_hat},
                 {"p0_samples", c.events.p0_samples},
                 {"gauge", gauge_json(c.events.gauge)}};
  j["boxcount"] = {{"enabled", c.boxcount.enabled},
                   {"realizations", c.boxcount.realizations},
                   {"depth", c.boxcount.depth},
                   {"eps_min_exp", c.boxcount.eps_min_exp},
                   {"eps_max_exp", c.boxcount.eps_max_exp}};
  return j.dump(2) + "\n";
}

GaugeSpec build_gauge(const GaugeConfig& config, double alpha, std::optional<double> fitted_beta) {
  auto theta = [&]() {
    if (config.theta) return *config.theta;
    if (fitted_beta) return *fitted_beta;
    throw ContractError("gauge theta is unset and no fitted beta is available");
  };
  switch (config.family) {
    case GaugeFamily::kConstant:
      return GaugeSpec::constant(alpha, config.c);
    case GaugeFamily::kLogLogPower:
      return GaugeSpec::loglog_power(alpha, theta());
    case GaugeFamily::kLogPower:
      return GaugeSpec::log_power(alpha, theta());
    case GaugeFamily::kTabulated:
      return GaugeSpec::tabulated(alpha, config.table_t, config.table_g);
  }
  return GaugeSpec::constant(alpha, 1.0);
}

}  // namespace packdim
