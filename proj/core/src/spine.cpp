#include "packdim/spine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "packdim/error.hpp"
#include "packdim/martingale.hpp"
#include "packdim/parallel.hpp"

namespace packdim {

RatioPredicate RatioPredicate::trivial() { return RatioPredicate{"trivial", 0.0, nullptr}; }

RatioPredicate RatioPredicate::min_ratio(double c) {
  return RatioPredicate{"min-ratio", c, [c](std::span<const std::vector<double>> window) {
                          for (const auto& v : window) {
                            for (double t : v) {
                              if (t < c) return false;
                            }
                          }
                          return true;
                        }};
}

RatioPredicate RatioPredicate::all_alive() {
  return RatioPredicate{"all-alive", 0.0, [](std::span<const std::vector<double>> window) {
                          for (const auto& v : window) {
                            for (double t : v) {
                              if (!(t > 0.0)) return false;
                            }
                          }
                          return true;
                        }};
}

RatioPredicate make_ratio_predicate(const std::string& name, double parameter) {
  if (name == "trivial") return RatioPredicate::trivial();
  if (name == "min-ratio") {
    if (!(parameter >= 0.0 && parameter < 1.0)) throw ConfigError("min-ratio threshold must lie in [0, 1)");
    return RatioPredicate::min_ratio(parameter);
  }
  if (name == "all-alive" || name == "both-children-alive") return RatioPredicate::all_alive();
  throw ConfigError("unknown R predicate '" + name + "'");
}

std::vector<std::string> ratio_predicate_names() { return {"trivial", "min-ratio", "all-alive"}; }

void EventParams::validate() const {
  std::string errors;
  if (!(C >= 0.0)) errors += " C must be >= 0;";
  if (!(rho > 0.0 && rho < 1.0)) errors += " rho must lie in (0, 1);";
  if (s0 < 0) errors += " s0 must be >= 0;";
  if (!(p0_hat > 0.0 && p0_hat <= 1.0)) errors += " p0_hat must lie in (0, 1];";
  if (!errors.empty()) throw ConfigError("event params:" + errors);
}

SpinePath sample_spine(const ReductionLaw& law, double alpha, const SpineOptions& options, Stream& stream) {
  law.validate();
  if (!(alpha > 0.0)) throw ContractError("sample_spine: alpha must be positive");
  if (options.depth < 1 || options.child_mart_depth < 1 || options.window < 0 || options.lookahead < 0) {
    throw ContractError("sample_spine: depth, child_mart_depth >= 1 and window, lookahead >= 0 required");
  }
  if (options.window > options.lookahead + options.child_mart_depth) {
    throw ContractError("sample_spine: window exceeds lookahead + child_mart_depth");
  }
  const int recorded = options.depth + options.lookahead;
  const int total = recorded + options.child_mart_depth;
  const std::size_t n = law.slots;
  const int capture_generations = std::max(options.window - 1, 0);
  const int capture_until = options.depth + options.window - 1;

  SpinePath path;
  path.depth = options.depth;
  path.lookahead = options.lookahead;
  path.window = options.window;

  std::vector<std::vector<double>> vectors(static_cast<std::size_t>(total), std::vector<double>(n));
  std::vector<std::uint32_t> choice(static_cast<std::size_t>(total));
  std::vector<double> off(static_cast<std::size_t>(total), 0.0);
  std::vector<std::vector<VectorCapture>> captures(static_cast<std::size_t>(total));

  MartingaleOptions child;
  child.mode = TruncationMode::kAdaptive;
  child.depth = options.child_mart_depth;
  child.eps_rel = options.child_eps_rel;
  child.min_expand_depth = capture_generations;

  for (int k = 0; k < total; ++k) {
    auto& v = vectors[static_cast<std::size_t>(k)];
    std::uint32_t i = 0;
    for (;;) {
      law.sample(stream, v);
      i = static_cast<std::uint32_t>(stream.below(n));
      const double t = v[i];
      if (t > 0.0 && stream.uniform() < std::pow(t, alpha)) break;
      ++path.rejections;
    }
    choice[static_cast<std::size_t>(k)] = i;
    const bool capture = capture_generations > 0 && k < capture_until;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !(v[j] > 0.0)) continue;
      VectorCapture cap;
      cap.generations = capture ? capture_generations : 0;
      const auto est = simulate_X(law, alpha, child, stream, capture ? &cap : nullptr);
      sum += std::pow(v[j], alpha) * est.value;
      if (capture) captures[static_cast<std::size_t>(k)].push_back(std::move(cap));
    }
    off[static_cast<std::size_t>(k)] = sum;
  }

  std::vector<double> x(static_cast<std::size_t>(total) + 1, 1.0);
  for (int k = total - 1; k >= 0; --k) {
    const auto kk = static_cast<std::size_t>(k);
    x[kk] = std::pow(vectors[kk][choice[kk]], alpha) * x[kk + 1] + off[kk];
  }
  path.root_x_hat = x[0];

  path.levels.resize(static_cast<std::size_t>(recorded));
  double l = 1.0;
  for (int k = 1; k <= recorded; ++k) {
    const auto parent = static_cast<std::size_t>(k - 1);
    SpineLevel& level = path.levels[parent];
    level.child = choice[parent] + 1;
    level.T = vectors[parent][choice[parent]];
    l *= level.T;
    level.l = l;
    level.x_hat = x[static_cast<std::size_t>(k)];
    if (k > options.depth) continue;
    // Generation g + 1 below node k: spine vector at k + g, plus off-spine
    // subtrees of spine nodes k .. k + g - 1 at their generation g - (node offset) - 1.
    for (int g = 0; g < options.window; ++g) {
      level.window.push_back(vectors[static_cast<std::size_t>(k + g)]);
      for (int h = 0; h < g; ++h) {
        for (const auto& cap : captures[static_cast<std::size_t>(k + h)]) {
          const int gen = g - h - 1;
          if (gen >= static_cast<int>(cap.generation_end.size())) continue;
          const std::size_t lo = gen == 0 ? 0 : cap.generation_end[static_cast<std::size_t>(gen - 1)];
          const std::size_t hi = cap.generation_end[static_cast<std::size_t>(gen)];
          for (std::size_t q = lo; q < hi; ++q) level.window.push_back(cap.vectors[q]);
        }
      }
      level.window_end.push_back(level.window.size());
    }
  }
  return path;
}

std::vector<SpinePath> sample_spines(const ReductionLaw& law, double alpha, const SpineOptions& options,
                                     std::size_t count, std::uint64_t seed, unsigned jobs) {
  std::vector<SpinePath> out(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    Stream stream(seed, StreamStage::kSpine, i);
    out[i] = sample_spine(law, alpha, options, stream);
  });
  return out;
}

std::vector<EventFlag> evaluate_events(SpinePath& spine, const GaugeSpec& gauge, const EventParams& params) {
  params.validate();
  if (params.s0 > spine.lookahead) throw ContractError("evaluate_events: s0 exceeds the spine lookahead");
  if (params.s0 > spine.window) throw ContractError("evaluate_events: s0 exceeds the retained window");
  const double alpha = gauge.alpha();
  const double log_c = params.C > 0.0 ? std::log(params.C) : -std::numeric_limits<double>::infinity();
  const double log_rho = std::log(params.rho);
  spine.B.assign(static_cast<std::size_t>(spine.depth), EventFlag::kFalse);
  spine.R.assign(static_cast<std::size_t>(spine.depth), EventFlag::kFalse);
  for (int k = 1; k <= spine.depth; ++k) {
    const SpineLevel& level = spine.at(k);
    const std::size_t used = params.s0 == 0 ? 0 : level.window_end[static_cast<std::size_t>(params.s0 - 1)];
    const bool r = params.R(std::span<const std::vector<double>>(level.window.data(), used));
    const auto idx = static_cast<std::size_t>(k - 1);
    spine.R[idx] = r ? EventFlag::kTrue : EventFlag::kFalse;
    const double log_l = std::log(level.l);
    double rhs = 0.0;
    try {
      rhs = log_c + gauge.log_phi(log_rho + log_l);
    } catch (const DomainError&) {
      spine.B[idx] = EventFlag::kUnevaluated;
      continue;
    }
    const double lhs = alpha * log_l + std::log(spine.at(k + params.s0).x_hat);
    spine.B[idx] = (r && lhs < rhs) ? EventFlag::kTrue : EventFlag::kFalse;
  }
  return spine.B;
}

CovarianceReport audit_events(std::span<const std::vector<EventFlag>> flags, int s0, double p0_hat) {
  if (flags.empty()) throw ContractError("audit_events: empty flag matrix");
  const std::size_t depth = flags.front().size();
  for (const auto& row : flags) {
    if (row.size() != depth) throw ContractError("audit_events: rows of different length");
  }
  CovarianceReport rep;
  rep.spines = flags.size();
  rep.depth = static_cast<int>(depth);
  rep.s0 = s0;
  rep.levels.resize(depth);
  rep.q_hat.assign(depth, 0.0);
  rep.q_ci.resize(depth);
  rep.evaluated.assign(depth, 0);
  rep.partial_sums.assign(depth, 0.0);
  for (std::size_t k = 0; k < depth; ++k) {
    rep.levels[k] = static_cast<int>(k + 1);
    std::size_t hits = 0, seen = 0;
    for (const auto& row : flags) {
      if (row[k] == EventFlag::kUnevaluated) continue;
      ++seen;
      if (row[k] == EventFlag::kTrue) ++hits;
    }
    rep.evaluated[k] = seen;
    rep.q_hat[k] = seen ? static_cast<double>(hits) / static_cast<double>(seen) : 0.0;
    rep.q_ci[k] = wilson_interval(hits, seen);
    rep.partial_sums[k] = rep.q_hat[k] + (k ? rep.partial_sums[k - 1] : 0.0);
  }

  rep.joint.assign(depth, std::vector<double>(depth, -1.0));
  rep.covariance_sums.assign(depth, 0.0);
  rep.near_pair_terms.assign(depth, 0.0);
  for (std::size_t j = 0; j < depth; ++j) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(s0) < j; ++i) {
      std::size_t both = 0, seen = 0;
      for (const auto& row : flags) {
        if (row[i] == EventFlag::kUnevaluated || row[j] == EventFlag::kUnevaluated) continue;
        ++seen;
        if (row[i] == EventFlag::kTrue && row[j] == EventFlag::kTrue) ++both;
      }
      const double joint = seen ? static_cast<double>(both) / static_cast<double>(seen) : 0.0;
      rep.joint[j][i] = joint;
      rep.covariance_sums[j] += joint - rep.q_hat[i] * rep.q_hat[j];
    }
    rep.near_pair_terms[j] = static_cast<double>(std::min<std::size_t>(static_cast<std::size_t>(s0), j)) * p0_hat *
                             rep.q_hat[j];
  }
  rep.bc_ratio.assign(depth, 0.0);
  double numerator = 0.0;
  for (std::size_t k = 0; k < depth; ++k) {
    numerator += rep.covariance_sums[k] + rep.near_pair_terms[k];
    const double denom = rep.partial_sums[k] * rep.partial_sums[k];
    rep.bc_ratio[k] = denom > 0.0 ? numerator / denom : std::numeric_limits<double>::infinity();
  }
  rep.bc_ratio_final = rep.bc_ratio.back();

  rep.limsup_window_lo = static_cast<int>((depth + 1) / 2);
  rep.limsup_window_hi = static_cast<int>(depth);
  std::size_t hit_rows = 0;
  for (const auto& row : flags) {
    for (int k = rep.limsup_window_lo; k <= rep.limsup_window_hi; ++k) {
      if (row[static_cast<std::size_t>(k - 1)] == EventFlag::kTrue) {
        ++hit_rows;
        break;
      }
    }
  }
  rep.limsup_hit_fraction = static_cast<double>(hit_rows) / static_cast<double>(flags.size());
  return rep;
}

CovarianceReport covariance_audit(std::vector<SpinePath>& spines, const GaugeSpec& gauge, const EventParams& params,
                                  const AuditOptions& options) {
  if (spines.size() < 2) throw ContractError("covariance_audit: at least 2 spines required");
  const int depth = spines.front().depth;
  for (const auto& sp : spines) {
    if (sp.depth != depth) throw ContractError("covariance_audit: spines of different depth");
  }
  const double alpha = gauge.alpha();

  RunningStats m1_per_spine, x0, t_all, abs_log_t;
  std::vector<RunningStats> l_alpha(static_cast<std::size_t>(depth)), l_mean(static_cast<std::size_t>(depth));
  for (const auto& sp : spines) {
    RunningStats own;
    for (int k = 1; k <= depth; ++k) {
      const auto& lv = sp.at(k);
      own.add(std::pow(lv.T, alpha));
      t_all.add(lv.T);
      abs_log_t.add(-std::log(lv.T));
      l_alpha[static_cast<std::size_t>(k - 1)].add(std::pow(lv.l, alpha));
      l_mean[static_cast<std::size_t>(k - 1)].add(lv.l);
    }
    m1_per_spine.add(own.mean());
    x0.add(sp.root_x_hat);
  }
  const double m1 = m1_per_spine.mean();
  const double m1_se = m1_per_spine.std_error();
  if (!(m1 < 1.0)) {
    throw PremiseError("covariance_audit: M1_hat = " + std::to_string(m1) +
                       " >= 1, the law violates the premise E_Q[T^alpha] < 1");
  }

  std::vector<std::vector<EventFlag>> flags;
  flags.reserve(spines.size());
  for (auto& sp : spines) flags.push_back(evaluate_events(sp, gauge, params));
  CovarianceReport rep = audit_events(flags, params.s0, params.p0_hat);

  rep.m1_hat = m1;
  rep.m1_se = m1_se;
  rep.m1_ci = {m1 - kZ95 * m1_se, m1 + kZ95 * m1_se};
  rep.delta = options.delta > 0.0 ? options.delta : 0.5 * (m1 + 1.0);
  if (!(rep.delta > m1 && rep.delta < 1.0)) throw ConfigError("covariance_audit: delta must lie in (M1_hat, 1)");
  rep.eq_x0 = x0.mean();

  for (int i : options.markov_i) {
    if (i < 1) continue;
    for (int j = i + params.s0 + 1; j <= depth; ++j) {
      MarkovCheck mc;
      mc.i = i;
      mc.j = j;
      mc.m = j - i - params.s0;
      mc.delta = rep.delta;
      const double level = std::pow(rep.delta, mc.m);
      std::size_t hits = 0;
      for (const auto& sp : spines) {
        const double l_ref = sp.at(i + params.s0).l;
        const double value = sp.at(j).x_hat * std::pow(sp.at(j).l / l_ref, alpha);
        if (value > level) ++hits;
      }
      mc.observed = static_cast<double>(hits) / static_cast<double>(spines.size());
      mc.ci = wilson_interval(hits, spines.size());
      mc.bound = rep.eq_x0 * std::pow(m1 / rep.delta, mc.m);
      mc.holds = mc.ci.lo <= mc.bound;
      rep.markov_all_hold = rep.markov_all_hold && mc.holds;
      rep.markov.push_back(mc);
    }
  }

  rep.mean_t_q = t_all.mean();
  rep.mean_abs_log_t_q = abs_log_t.mean();
  double power = 1.0;
  for (int k = 1; k <= depth; ++k) {
    power *= rep.mean_t_q;
    rep.tail_bound += power;
    rep.tail_empirical += l_mean[static_cast<std::size_t>(k - 1)].mean();
    rep.mean_l_alpha.push_back(l_alpha[static_cast<std::size_t>(k - 1)].mean());
  }

  for (const auto& sp : spines) {
    rep.resamples += sp.resamples;
    rep.rejections += sp.rejections;
  }
  rep.biased = static_cast<double>(rep.resamples) > 0.01 * static_cast<double>(spines.size());
  rep.m2_note = "the density bound M2 enters only through the constant M of the covariance bound and is not estimated";
  rep.notes.push_back("X_hat uses truncated off-spine estimates and a unit tail; the bias is reflected in eq_x0");
  if (rep.biased) rep.notes.push_back("more than 1% of spines needed a resample; treat the audit as biased");
  return rep;
}

P0Estimate estimate_p0(const ReductionLaw& law, double alpha, const EventParams& params, std::size_t samples,
                       std::uint64_t seed, unsigned jobs) {
  law.validate();
  params.validate();
  if (samples == 0) throw ContractError("estimate_p0: samples must be >= 1");
  std::vector<double> values(samples, 0.0);
  std::vector<char> satisfied(samples, 0);
  parallel_for(samples, jobs, [&](std::size_t s) {
    Stream stream(seed, StreamStage::kAssumption, s);
    std::vector<std::vector<double>> window;
    std::vector<double> weights{1.0}, next;
    for (int g = 0; g < params.s0; ++g) {
      next.clear();
      for (double w : weights) {
        auto v = sample_offspring(law, stream);
        for (double t : v) {
          if (t > 0.0) next.push_back(w * std::pow(t, alpha));
        }
        window.push_back(std::move(v));
      }
      weights.swap(next);
    }
    if (params.R(window)) {
      satisfied[s] = 1;
      double sum = 0.0;
      for (double w : weights) sum += w;
      values[s] = sum;
    }
  });
  RunningStats stats;
  P0Estimate est;
  for (std::size_t s = 0; s < samples; ++s) {
    stats.add(values[s]);
    est.satisfied += static_cast<std::size_t>(satisfied[s]);
  }
  est.samples = samples;
  est.value = stats.mean();
  est.std_error = stats.std_error();
  est.ci = {est.value - kZ95 * est.std_error, est.value + kZ95 * est.std_error};
  if (est.satisfied == 0) {
    est.warning = "R was never satisfied in " + std::to_string(samples) + " draws; the estimate is zero";
  }
  return est;
}

}  // namespace packdim
