#ifndef OLCACHE_HARNESS_HPP
#define OLCACHE_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "olcache/bounds.hpp"
#include "olcache/core_model.hpp"
#include "olcache/error.hpp"
#include "olcache/generators.hpp"
#include "olcache/policies.hpp"
#include "olcache/regret.hpp"
#include "olcache/trace.hpp"

namespace olcache {

// Environment variable holding the default number of trial workers.
inline constexpr const char* kWorkersEnv = "OLCACHE_WORKERS";

enum class Metric { adversarial, stochastic_sample, stochastic_pseudo };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::adversarial: return "adversarial";
    case Metric::stochastic_sample: return "stochastic-sample";
    case Metric::stochastic_pseudo: return "stochastic-pseudo";
  }
  return "unknown";
}

inline Metric parse_metric(std::string_view s) {
  if (s == "adversarial") return Metric::adversarial;
  if (s == "stochastic-sample") return Metric::stochastic_sample;
  if (s == "stochastic-pseudo") return Metric::stochastic_pseudo;
  throw Error(ErrorCode::unknown_kind, "unknown metric '" + std::string(s) + "'");
}

struct PolicySpec {
  PolicyKind kind = PolicyKind::lfu;
  LearningRateSchedule rate;
  double u = 1.0;     // W-FTPL wait scale
  double beta = 1.0;  // W-FTPL wait exponent
  std::optional<double> wait_threshold;     // overrides u (ln D)^(1+beta)
  std::vector<FileId> static_files;         // static comparator

  PolicyParams params_for(const ProblemConfig& problem) const {
    PolicyParams p;
    p.rate = rate;
    if (kind == PolicyKind::wftpl) {
      p.wait = wait_threshold ? WaitConfig{u, beta, *wait_threshold}
                              : WaitConfig::from_cost(u, beta, problem.fetch_cost);
    }
    if (kind == PolicyKind::fixed) p.static_set = CacheSet(static_files, problem.library_size);
    return p;
  }
};

enum class GeneratorKind { iid, round_robin, phase_adversary, trace };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::iid;
  std::optional<PopularityDistribution> distribution;  // iid
  FileId start = 0;                                    // round robin
  std::shared_ptr<const Trace> trace;                  // trace replay
};

enum class ScheduleKind { unrestricted, periods, homogeneous };

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::unrestricted;
  std::vector<std::size_t> periods;
  std::size_t r = 1;

  UpdateSchedule build(std::size_t horizon) const {
    switch (kind) {
      case ScheduleKind::unrestricted: return unrestricted_schedule(horizon);
      case ScheduleKind::periods: return build_schedule(periods, horizon);
      case ScheduleKind::homogeneous: return homogeneous_schedule(r, horizon);
    }
    return unrestricted_schedule(horizon);
  }
};

struct ExperimentConfig {
  ProblemConfig problem;
  PolicySpec policy;
  GeneratorSpec generator;
  ScheduleSpec schedule;
  Metric metric = Metric::stochastic_pseudo;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  std::vector<Slot> checkpoints;  // empty means {T}
  std::size_t workers = 0;        // 0: environment, then hardware concurrency
  bool fetch_profile = false;     // keep the mean per-slot fetch cost

  std::vector<Slot> effective_checkpoints() const {
    if (checkpoints.empty()) return {problem.horizon};
    return checkpoints;
  }

  void validate() const {
    problem.validate();
    if (trials < 1) throw Error(ErrorCode::invalid_config, "trials must be >= 1");
    Slot prev = 0;
    for (Slot t : effective_checkpoints()) {
      if (t < 1 || t > problem.horizon || t <= prev) {
        throw Error(ErrorCode::invalid_config,
                    "checkpoints must be strictly increasing within [1, T]");
      }
      prev = t;
    }
    if (metric != Metric::adversarial &&
        (generator.kind != GeneratorKind::iid || !generator.distribution)) {
      throw Error(ErrorCode::invalid_config, "stochastic metrics need an iid generator");
    }
    if (generator.kind == GeneratorKind::iid) {
      if (!generator.distribution) throw Error(ErrorCode::invalid_config, "iid generator needs a distribution");
      if (generator.distribution->size() != problem.library_size) {
        throw Error(ErrorCode::invalid_config, "distribution length differs from L");
      }
    }
    if (generator.kind == GeneratorKind::trace) {
      if (!generator.trace) throw Error(ErrorCode::invalid_config, "trace generator needs a trace");
      if (generator.trace->library_size > problem.library_size) {
        throw Error(ErrorCode::invalid_config, "trace library exceeds L");
      }
    }
  }

  // Under a restricted update schedule, regret leaves the switch cost out.
  bool switch_cost_in_regret() const { return schedule.build(problem.horizon).unrestricted(); }
};

// Independent per-purpose seeds from one trial seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline RequestSource make_source(const ExperimentConfig& config, const UpdateSchedule& schedule,
                                 std::uint64_t trial_seed) {
  const auto& g = config.generator;
  switch (g.kind) {
    case GeneratorKind::iid:
      return IidSource(*g.distribution, derive_seed(trial_seed, 1));
    case GeneratorKind::round_robin:
      return RoundRobinSource(config.problem.library_size, g.start);
    case GeneratorKind::phase_adversary:
      return PhaseAdversarySource(config.problem.library_size, config.problem.cache_size, schedule,
                                  derive_seed(trial_seed, 2));
    case GeneratorKind::trace:
      return TraceSource(g.trace->requests);
  }
  throw Error(ErrorCode::unknown_kind, "unknown generator kind");
}

struct EpisodeOutcome {
  EpisodeRecord record;
  RegretSeries series;
};

// Per slot: the policy may update, then the request arrives and is scored.
inline EpisodeOutcome run_episode(const ExperimentConfig& config, std::uint64_t trial_seed) {
  config.validate();
  const ProblemConfig& problem = config.problem;
  const std::size_t horizon = problem.horizon;
  const std::size_t c = problem.cache_size;
  const double d = problem.fetch_cost;
  const UpdateSchedule schedule = config.schedule.build(horizon);
  const bool setting1 = schedule.unrestricted();

  CachePolicy policy =
      CachePolicy::create(config.policy.kind, problem, config.policy.params_for(problem), trial_seed);
  RequestSource source = make_source(config, schedule, trial_seed);

  const PopularityDistribution* dist =
      config.generator.distribution ? &*config.generator.distribution : nullptr;
  std::optional<CacheSet> best;
  if (config.metric != Metric::adversarial) best = dist->top_c(c);
  const bool keep_snapshots = config.metric == Metric::stochastic_pseudo;

  EpisodeOutcome out;
  EpisodeRecord& rec = out.record;
  rec.requests.reserve(horizon);
  rec.hits.reserve(horizon);
  rec.fetches.reserve(horizon);
  if (keep_snapshots) rec.cache_history.reserve(horizon);

  const std::vector<Slot> checkpoints = config.effective_checkpoints();
  auto next_checkpoint = checkpoints.begin();
  double optimal_hits = 0.0;
  double pseudo = 0.0;

  for (Slot t = 1; t <= horizon; ++t) {
    const auto step = policy.step(t, schedule);
    const FileId x = next_request(source, t);
    if (x >= problem.library_size) {
      throw Error(ErrorCode::out_of_library, "request " + std::to_string(x) + " outside library");
    }
    const bool hit = step.cache.contains(x);
    rec.requests.push_back(x);
    rec.hits.push_back(hit ? 1 : 0);
    rec.fetches.push_back(static_cast<std::uint32_t>(step.fetches));
    rec.reward += hit ? 1 : 0;
    rec.total_fetches += step.fetches;
    if (keep_snapshots) {
      rec.cache_history.push_back(step.cache);
      pseudo += pseudo_regret_increment(step.cache, *dist, c);
    }
    if (best && best->contains(x)) optimal_hits += 1.0;
    policy.record_request(x);

    if (next_checkpoint != checkpoints.end() && *next_checkpoint == t) {
      const double switch_cost = d * static_cast<double>(rec.total_fetches);
      double reward_gap = 0.0;
      switch (config.metric) {
        case Metric::adversarial:
          reward_gap = static_cast<double>(hindsight_best_reward(policy.counts(), c)) -
                       static_cast<double>(rec.reward);
          break;
        case Metric::stochastic_sample:
          reward_gap = optimal_hits - static_cast<double>(rec.reward);
          break;
        case Metric::stochastic_pseudo:
          reward_gap = pseudo;
          break;
      }
      out.series.push_back({t, reward_gap + (setting1 ? switch_cost : 0.0), switch_cost});
      ++next_checkpoint;
    }
  }
  rec.final_counts = policy.counts();
  rec.switch_cost = d * static_cast<double>(rec.total_fetches);
  return out;
}

struct AggregatePoint {
  Slot t = 0;
  double mean_regret = 0.0;
  double regret_ci = 0.0;  // 95% normal-approximation half-width
  double mean_switch_cost = 0.0;
  double switch_cost_ci = 0.0;
};

struct AggregateSeries {
  std::vector<AggregatePoint> points;
  std::vector<double> mean_fetch_cost_profile;  // per slot, D * mean fetches; optional
  std::vector<RegretSeries> trial_series;       // only when requested
};

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
  double std_error = 0.0;
};

inline MeanCi mean_ci(const std::vector<double>& xs) {
  MeanCi r;
  if (xs.empty()) return r;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / n;
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  r.half_width = 1.96 * r.std_error;
  return r;
}

inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the
// exception of the lowest failing index.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::min(workers, n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Trial i runs with seed base_seed + i; results are reduced in trial order.
inline AggregateSeries run_trials(const ExperimentConfig& config, bool keep_trial_series = false) {
  config.validate();
  const std::size_t n = config.trials;
  std::vector<RegretSeries> series(n);
  std::vector<std::vector<std::uint32_t>> fetches(config.fetch_profile ? n : 0);

  parallel_for(n, resolve_workers(config.workers), [&](std::size_t i) {
    EpisodeOutcome o = run_episode(config, config.base_seed + i);
    series[i] = std::move(o.series);
    if (config.fetch_profile) fetches[i] = std::move(o.record.fetches);
  });

  AggregateSeries agg;
  const std::size_t points = series.front().size();
  std::vector<double> regrets(n);
  std::vector<double> costs(n);
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      regrets[i] = series[i][k].regret;
      costs[i] = series[i][k].switch_cost;
    }
    const MeanCi r = mean_ci(regrets);
    const MeanCi s = mean_ci(costs);
    agg.points.push_back({series.front()[k].t, r.mean, r.half_width, s.mean, s.half_width});
  }
  if (config.fetch_profile) {
    const std::size_t horizon = config.problem.horizon;
    agg.mean_fetch_cost_profile.assign(horizon, 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += fetches[i][t];
      agg.mean_fetch_cost_profile[t] = config.problem.fetch_cost * sum / static_cast<double>(n);
    }
  }
  if (keep_trial_series) agg.trial_series = std::move(series);
  return agg;
}

// Learning-rate scale as it enters the alpha * sqrt(t) bounds.
inline std::optional<double> effective_alpha(const ExperimentConfig& config) {
  const auto& rate = config.policy.rate;
  if (rate.kind == RateKind::adaptive_sqrt_t) return rate.alpha;
  if (rate.kind == RateKind::adaptive_sqrt_t_over_c) {
    return rate.alpha / std::sqrt(static_cast<double>(config.problem.cache_size));
  }
  return std::nullopt;
}

struct NamedBound {
  std::string name;
  double value = 0.0;
};

// Theoretical reference lines matching the configured policy, arrival model
// and schedule. `horizon` is the x position for bounds that grow with T.
inline std::vector<NamedBound> overlay_bounds(const ExperimentConfig& config, std::size_t horizon) {
  std::vector<NamedBound> out;
  const ProblemConfig& p = config.problem;
  const std::size_t l = p.library_size;
  const std::size_t c = p.cache_size;
  const double d = p.fetch_cost;
  const auto kind = config.policy.kind;
  const bool ftpl_like = kind == PolicyKind::ftpl || kind == PolicyKind::wftpl;
  const auto alpha = effective_alpha(config);
  const UpdateSchedule schedule = config.schedule.build(p.horizon);

  if (config.metric == Metric::adversarial) {
    if (schedule.unrestricted()) {
      out.push_back({"lb_adversarial", bounds::lb_adversarial_unrestricted(static_cast<double>(c),
                                                                           static_cast<double>(horizon))});
      if (kind == PolicyKind::wftpl && alpha) {
        const double t_prime = config.policy.params_for(p).wait->threshold;
        out.push_back({"ub_wftpl_adversarial",
                       bounds::ub_wftpl_adversarial(l, c, *alpha, horizon, std::min(t_prime, static_cast<double>(horizon))) +
                           d * bounds::ub_ftpl_adversarial_switches(l, *alpha, static_cast<double>(horizon))});
      }
    } else {
      if (config.schedule.kind == ScheduleKind::homogeneous && horizon % config.schedule.r == 0) {
        out.push_back({"lb_periodic_adversarial",
                       bounds::lb_periodic_adversarial(config.schedule.r, c, horizon).value});
      }
      out.push_back({"lb_restricted_adversarial",
                     bounds::lb_restricted_adversarial(schedule.periods(), c).value});
      if (kind == PolicyKind::ftpl && alpha) {
        out.push_back({"ub_ftpl_restricted_adversarial",
                       bounds::ub_ftpl_restricted_adversarial(schedule.periods(), l, c, *alpha,
                                                              static_cast<double>(p.horizon))});
      }
    }
    return out;
  }

  const PopularityDistribution& dist = *config.generator.distribution;
  const double dmin = dist.delta_min(c);
  if (schedule.unrestricted()) {
    if (kind == PolicyKind::lfu && d == 0.0) {
      out.push_back({"ub_lfu_stochastic", bounds::ub_lfu_stochastic(l, c, dmin)});
    }
    if (kind == PolicyKind::ftpl && alpha) {
      out.push_back({"ub_ftpl_adaptive_stochastic",
                     bounds::ub_ftpl_adaptive_stochastic(l, c, d, *alpha, dmin)});
    }
    if (kind == PolicyKind::ftpl && !alpha && l == 2 && c == 1 && d == 0.0) {
      const double eta = learning_rate(config.policy.rate, 1, p.horizon, c);
      out.push_back({"lb_ftpl_constant_stochastic", bounds::lb_ftpl_constant_stochastic(eta)});
    }
    if (kind == PolicyKind::wftpl && alpha) {
      out.push_back({"ub_wftpl_stochastic",
                     bounds::ub_wftpl_stochastic(l, c, d, *alpha, dmin, config.policy.u,
                                                 config.policy.beta)});
    }
  } else if (ftpl_like && alpha) {
    if (config.schedule.kind == ScheduleKind::homogeneous) {
      out.push_back({"ub_ftpl_periodic_stochastic",
                     bounds::ub_ftpl_periodic_stochastic(config.schedule.r, l, c, *alpha, dmin)});
    }
    out.push_back({"ub_ftpl_restricted_stochastic",
                   bounds::ub_ftpl_restricted_stochastic(schedule.periods(), dist, c, *alpha)});
  }
  return out;
}

enum class SweepAxis { horizon, fetch_cost, period };

inline SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "T") return SweepAxis::horizon;
  if (s == "D") return SweepAxis::fetch_cost;
  if (s == "r") return SweepAxis::period;
  throw Error(ErrorCode::unknown_kind, "unknown sweep axis '" + std::string(s) + "' (T, D or r)");
}

struct SweepRow {
  double x = 0.0;
  std::optional<AggregatePoint> endpoint;
  std::vector<NamedBound> bounds;
  std::string error;  // set when the value was invalid for the template
};

inline ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value) {
  ExperimentConfig c = base;
  switch (axis) {
    case SweepAxis::horizon:
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw Error(ErrorCode::invalid_config, "T must be a positive integer");
      }
      c.problem.horizon = static_cast<std::size_t>(value);
      c.checkpoints = {c.problem.horizon};
      if (c.schedule.kind == ScheduleKind::periods) {
        throw Error(ErrorCode::invalid_config, "cannot sweep T with explicit periods");
      }
      break;
    case SweepAxis::fetch_cost:
      c.problem.fetch_cost = value;
      break;
    case SweepAxis::period:
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw Error(ErrorCode::invalid_period, "r must be a positive integer");
      }
      c.schedule.kind = ScheduleKind::homogeneous;
      c.schedule.r = static_cast<std::size_t>(value);
      break;
  }
  c.checkpoints = {c.problem.horizon};
  (void)c.schedule.build(c.problem.horizon);
  if (c.generator.kind == GeneratorKind::trace && c.generator.trace &&
      c.problem.horizon > c.generator.trace->requests.size()) {
    throw Error(ErrorCode::exhausted_trace, "T exceeds trace length");
  }
  c.validate();
  return c;
}

// One aggregated endpoint per axis value; invalid values become error rows.
inline std::vector<SweepRow> sweep(SweepAxis axis, const std::vector<double>& values,
                                   const ExperimentConfig& base, bool overlay = false) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    SweepRow row;
    row.x = v;
    try {
      const ExperimentConfig c = apply_axis(base, axis, v);
      row.endpoint = run_trials(c).points.back();
      if (overlay) row.bounds = overlay_bounds(c, c.problem.horizon);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CsvRow {
  double x = 0.0;
  std::optional<AggregatePoint> point;  // empty for an error row
  std::vector<double> bounds;
};

struct CsvTable {
  std::vector<std::string> bound_names;
  std::vector<CsvRow> rows;
};

inline CsvTable to_csv_table(const AggregateSeries& series,
                             const ExperimentConfig* overlay_config = nullptr) {
  CsvTable table;
  for (const AggregatePoint& p : series.points) {
    CsvRow row{static_cast<double>(p.t), p, {}};
    if (overlay_config) {
      const auto b = overlay_bounds(*overlay_config, p.t);
      if (table.bound_names.empty()) {
        for (const auto& nb : b) table.bound_names.push_back(nb.name);
      }
      for (const auto& nb : b) row.bounds.push_back(nb.value);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline CsvTable to_csv_table(const std::vector<SweepRow>& rows) {
  CsvTable table;
  for (const SweepRow& r : rows) {
    if (table.bound_names.empty()) {
      for (const auto& nb : r.bounds) table.bound_names.push_back(nb.name);
    }
  }
  for (const SweepRow& r : rows) {
    CsvRow row{r.x, r.endpoint, {}};
    for (const std::string& name : table.bound_names) {
      double v = std::nan("");
      for (const auto& nb : r.bounds) {
        if (nb.name == name) v = nb.value;
      }
      row.bounds.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline std::string format_sig6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void write_csv(const CsvTable& table, std::ostream& out) {
  out << "x,mean_regret,ci_lo,ci_hi,mean_switch_cost,sc_ci_lo,sc_ci_hi";
  for (const std::string& name : table.bound_names) out << ",bound_" << name;
  out << '\n';
  for (const CsvRow& row : table.rows) {
    out << format_sig6(row.x);
    if (row.point) {
      const AggregatePoint& p = *row.point;
      for (double v : {p.mean_regret, p.mean_regret - p.regret_ci, p.mean_regret + p.regret_ci,
                       p.mean_switch_cost, p.mean_switch_cost - p.switch_cost_ci,
                       p.mean_switch_cost + p.switch_cost_ci}) {
        out << ',' << format_sig6(v);
      }
    } else {
      for (int i = 0; i < 6; ++i) out << ",nan";
    }
    for (std::size_t i = 0; i < table.bound_names.size(); ++i) {
      out << ',' << format_sig6(i < row.bounds.size() ? row.bounds[i] : std::nan(""));
    }
    out << '\n';
  }
}

// slot,mean_fetch_cost with 1-based slots.
inline void write_fetch_profile_csv(const AggregateSeries& series, std::ostream& out) {
  out << "slot,mean_fetch_cost\n";
  for (std::size_t t = 0; t < series.mean_fetch_cost_profile.size(); ++t) {
    out << t + 1 << ',' << format_sig6(series.mean_fetch_cost_profile[t]) << '\n';
  }
}

inline void emit_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  write_csv(table, out);
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write failure on '" + path + "'");
}

}  // namespace olcache

#endif  // OLCACHE_HARNESS_HPP
