#ifndef OLCACHE_CLI_HPP
#define OLCACHE_CLI_HPP

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "olcache/bounds.hpp"
#include "olcache/config.hpp"
#include "olcache/error.hpp"
#include "olcache/harness.hpp"
#include "olcache/trace.hpp"

// Command-line front end: simulate, sweep, bounds, ingest.
// Exit codes: 0 success, 1 configuration / input / I/O failure, 2 usage error.
namespace olcache {

namespace cli_detail {

inline std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct BoundArgs {
  double l = 0, c = 1, t = 0, d = 0, alpha = 1, u = 1, beta = 1;
  double delta_min = 0, eta = 0, delta = 0, a = 1, r = 0, t_prime = 0;
  std::vector<std::size_t> periods;
  std::vector<double> mu;
  bool dyadic = false;
};

inline std::size_t as_count(double v, const char* flag) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw Error(ErrorCode::invalid_params, std::string("--") + flag + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

// Periods from --periods, else r_i = r over T.
inline std::vector<std::size_t> resolve_periods(const BoundArgs& a) {
  if (!a.periods.empty()) return a.periods;
  const std::size_t r = as_count(a.r, "r");
  const std::size_t t = as_count(a.t, "T");
  const UpdateSchedule s = homogeneous_schedule(r, t);
  return {s.periods().begin(), s.periods().end()};
}

inline PopularityDistribution resolve_distribution(const BoundArgs& a) {
  if (!a.mu.empty()) return PopularityDistribution(a.mu);
  if (a.dyadic) return dyadic_pmf(as_count(a.l, "L"));
  throw Error(ErrorCode::invalid_params, "need --mu or --dyadic");
}

using Rows = std::vector<std::pair<std::string, double>>;

inline const std::vector<std::string>& formula_names() {
  static const std::vector<std::string> names = {
      "lb-adversarial",           "ub-lfu-stochastic",
      "lb-ftpl-constant",         "ub-ftpl-adaptive",
      "ub-wftpl-stochastic",      "lb-restricted-stochastic",
      "ub-ftpl-restricted-stochastic", "ub-ftpl-periodic",
      "lb-restricted-adversarial", "ub-ftpl-restricted-adversarial",
      "lb-periodic-adversarial",  "ub-ftpl-switches",
      "ub-wftpl-adversarial",     "wait-threshold"};
  return names;
}

inline bool uses_stochastic_domain(const std::string& name) {
  return name == "ub-ftpl-adaptive" || name == "ub-wftpl-stochastic";
}

inline Rows evaluate_formula(const std::string& name, const BoundArgs& a) {
  namespace b = bounds;
  auto l = [&] { return as_count(a.l, "L"); };
  auto c = [&] { return as_count(a.c, "C"); };
  if (name == "lb-adversarial") return {{name, b::lb_adversarial_unrestricted(a.c, a.t)}};
  if (name == "ub-lfu-stochastic") return {{name, b::ub_lfu_stochastic(l(), c(), a.delta_min)}};
  if (name == "lb-ftpl-constant") return {{name, b::lb_ftpl_constant_stochastic(a.eta)}};
  if (name == "ub-ftpl-adaptive") {
    return {{name, b::ub_ftpl_adaptive_stochastic(l(), c(), a.d, a.alpha, a.delta_min)}};
  }
  if (name == "ub-wftpl-stochastic") {
    return {{name, b::ub_wftpl_stochastic(l(), c(), a.d, a.alpha, a.delta_min, a.u, a.beta)}};
  }
  if (name == "lb-restricted-stochastic") {
    return {{name, b::lb_restricted_stochastic(resolve_periods(a), a.delta, a.a)}};
  }
  if (name == "ub-ftpl-restricted-stochastic") {
    const auto dist = resolve_distribution(a);
    return {{name, b::ub_ftpl_restricted_stochastic(resolve_periods(a), dist, c(), a.alpha)}};
  }
  if (name == "ub-ftpl-periodic") {
    return {{name, b::ub_ftpl_periodic_stochastic(as_count(a.r, "r"), l(), c(), a.alpha, a.delta_min)}};
  }
  if (name == "lb-restricted-adversarial") {
    const auto r = b::lb_restricted_adversarial(resolve_periods(a), c());
    return {{name, r.value}, {name + ".meaningful", r.meaningful ? 1.0 : 0.0}};
  }
  if (name == "ub-ftpl-restricted-adversarial") {
    const auto periods = resolve_periods(a);
    double t = 0;
    for (std::size_t r : periods) t += static_cast<double>(r);
    return {{name, b::ub_ftpl_restricted_adversarial(periods, l(), c(), a.alpha, t)}};
  }
  if (name == "lb-periodic-adversarial") {
    const auto r = b::lb_periodic_adversarial(as_count(a.r, "r"), c(), as_count(a.t, "T"));
    return {{name, r.value}, {name + ".linear", r.regime == bounds::Regime::linear ? 1.0 : 0.0}};
  }
  if (name == "ub-ftpl-switches") return {{name, b::ub_ftpl_adversarial_switches(l(), a.alpha, a.t)}};
  if (name == "ub-wftpl-adversarial") {
    return {{name, b::ub_wftpl_adversarial(l(), c(), a.alpha, as_count(a.t, "T"), a.t_prime)}};
  }
  if (name == "wait-threshold") return {{name, wftpl_wait_threshold(a.u, a.beta, a.d)}};
  throw Error(ErrorCode::unknown_kind, "unknown formula '" + name + "'");
}

inline std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<double> parse_values(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_csv_list(s)) {
    double v = 0;
    if (!detail::parse_number(std::string_view(item), v)) {
      throw Error(ErrorCode::invalid_config, "bad sweep value '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::invalid_config, "--values is empty");
  return out;
}

template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  fn(f);
  f.flush();
  if (!f) throw Error(ErrorCode::io, "write failure on '" + path + "'");
}

// Flag-built simulate configs go through the same JSON schema as files.
struct SimulateFlags {
  std::string policy = "ftpl";
  std::size_t l = 0, c = 0, t = 0;
  double d = 0;
  std::string rate = "adaptive-sqrt-t";
  double alpha = 1, eta = 0, u = 1, beta = 1;
  std::optional<double> threshold;
  std::string generator = "iid";
  std::string distribution = "dyadic";
  double zipf_exponent = 1;
  std::size_t start = 0;
  std::string trace;
  std::string schedule_periods;
  std::size_t r = 0;
  std::string metric;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string checkpoints;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["problem"] = {{"cache_size", c}, {"fetch_cost", d}};
    if (l) j["problem"]["library_size"] = l;
    if (t) j["problem"]["horizon"] = t;
    j["policy"] = {{"kind", policy}, {"rate", {{"kind", rate}, {"alpha", alpha}, {"eta", eta}}}};
    if (policy == "wftpl" || policy == "w-ftpl") {
      j["policy"]["wait"] = {{"u", u}, {"beta", beta}};
      if (threshold) j["policy"]["wait"]["threshold"] = *threshold;
    }
    j["generator"] = {{"kind", generator}};
    if (generator == "iid") {
      if (distribution == "zipf") {
        j["generator"]["distribution"] = {{"kind", "zipf"}, {"exponent", zipf_exponent}};
      } else {
        j["generator"]["distribution"] = {{"kind", distribution}};
      }
    } else if (generator == "round-robin") {
      j["generator"]["start"] = start;
    } else if (generator == "trace") {
      j["generator"]["path"] = trace;
    }
    if (!schedule_periods.empty()) {
      std::vector<std::size_t> periods;
      for (double v : parse_values(schedule_periods)) periods.push_back(as_count(v, "periods"));
      j["schedule"] = {{"kind", "periods"}, {"periods", periods}};
    } else if (r > 0) {
      j["schedule"] = {{"kind", "homogeneous"}, {"r", r}};
    }
    if (!metric.empty()) j["metric"] = metric;
    j["trials"] = trials;
    j["base_seed"] = seed;
    if (!checkpoints.empty()) {
      std::vector<std::size_t> cps;
      for (double v : parse_values(checkpoints)) cps.push_back(as_count(v, "checkpoints"));
      j["checkpoints"] = cps;
    }
    return j;
  }
};

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Online caching simulator and regret bound calculator", "olcache"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one experiment and write CSV");
  std::string sim_config, sim_out, sim_profile;
  bool sim_overlay = false;
  std::size_t sim_workers = 0;
  SimulateFlags flags;
  sim->add_option("--config", sim_config, "JSON experiment file");
  sim->add_option("--out", sim_out, "CSV path (default stdout)");
  sim->add_option("--profile", sim_profile, "Also write the per-slot mean fetch cost here");
  sim->add_flag("--overlay", sim_overlay, "Append matching bound columns");
  sim->add_option("--workers", sim_workers, "Trial workers (0: environment or hardware)");
  sim->add_option("--policy", flags.policy, "lfu | ftpl | wftpl | static");
  sim->add_option("--L", flags.l, "Library size");
  sim->add_option("--C", flags.c, "Cache size");
  sim->add_option("--T", flags.t, "Horizon");
  sim->add_option("--D", flags.d, "Fetch cost");
  sim->add_option("--rate", flags.rate, "Learning-rate kind");
  sim->add_option("--alpha", flags.alpha, "Learning-rate scale");
  sim->add_option("--eta", flags.eta, "Fixed learning rate");
  sim->add_option("--u", flags.u, "W-FTPL wait scale");
  sim->add_option("--beta", flags.beta, "W-FTPL wait exponent");
  sim->add_option("--t-prime", flags.threshold, "Explicit W-FTPL wait threshold");
  sim->add_option("--generator", flags.generator, "iid | round-robin | phase-adversary | trace");
  sim->add_option("--distribution", flags.distribution, "dyadic | zipf");
  sim->add_option("--zipf-exponent", flags.zipf_exponent, "Zipf exponent");
  sim->add_option("--start", flags.start, "Round-robin start file");
  sim->add_option("--trace", flags.trace, "Trace file for the trace generator");
  sim->add_option("--periods", flags.schedule_periods, "Comma-separated inter-switching periods");
  sim->add_option("--r", flags.r, "Homogeneous period");
  sim->add_option("--metric", flags.metric, "adversarial | stochastic-sample | stochastic-pseudo");
  sim->add_option("--trials", flags.trials, "Number of trials");
  sim->add_option("--seed", flags.seed, "Base seed");
  sim->add_option("--checkpoints", flags.checkpoints, "Comma-separated checkpoint slots");

  // sweep
  auto* swp = app.add_subcommand("sweep", "Sweep T, D or r over a template config");
  std::string swp_config, swp_axis, swp_values, swp_out;
  bool swp_overlay = false;
  std::size_t swp_workers = 0;
  swp->add_option("--config", swp_config, "JSON template")->required();
  swp->add_option("--axis", swp_axis, "T | D | r")->required();
  swp->add_option("--values", swp_values, "Comma-separated axis values")->required();
  swp->add_option("--out", swp_out, "CSV path (default stdout)");
  swp->add_flag("--overlay", swp_overlay, "Append matching bound columns");
  swp->add_option("--workers", swp_workers, "Trial workers (0: environment or hardware)");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Evaluate closed-form bounds");
  std::string formula = "all", bnd_csv;
  BoundArgs ba;
  bnd->add_option("--formula", formula, "Formula name or 'all'");
  bnd->add_option("--L", ba.l, "Library size");
  bnd->add_option("--C", ba.c, "Cache size");
  bnd->add_option("--T", ba.t, "Horizon");
  bnd->add_option("--D", ba.d, "Fetch cost");
  bnd->add_option("--alpha", ba.alpha, "Learning-rate scale");
  bnd->add_option("--u", ba.u, "W-FTPL wait scale");
  bnd->add_option("--beta", ba.beta, "W-FTPL wait exponent");
  bnd->add_option("--delta-min", ba.delta_min, "Smallest popularity gap");
  bnd->add_option("--eta", ba.eta, "Constant learning rate");
  bnd->add_option("--delta", ba.delta, "Two-file popularity gap");
  bnd->add_option("--a", ba.a, "Two-file popularity level");
  bnd->add_option("--r", ba.r, "Homogeneous period");
  bnd->add_option("--t-prime", ba.t_prime, "W-FTPL wait threshold");
  bnd->add_option("--periods", ba.periods, "Comma-separated inter-switching periods")->delimiter(',');
  bnd->add_option("--mu", ba.mu, "Comma-separated popularities")->delimiter(',');
  bnd->add_flag("--dyadic", ba.dyadic, "Use the dyadic distribution of size L");
  bnd->add_option("--csv", bnd_csv, "Also write name,value CSV here");
  bnd->add_flag_callback("--list", [&] {
    for (const auto& n : formula_names()) out << n << '\n';
    throw CLI::Success();
  }, "List formula names");

  // ingest
  auto* ing = app.add_subcommand("ingest", "Parse a ratings trace and print statistics");
  std::string ing_path, ing_order = "file", ing_dump, ing_delim = "::";
  std::optional<std::size_t> ing_max_rows;
  std::size_t ing_top = 10;
  ing->add_option("path", ing_path, "Ratings file")->required();
  ing->add_option("--max-rows", ing_max_rows, "Read at most this many rows");
  ing->add_option("--order", ing_order, "file | timestamp");
  ing->add_option("--top", ing_top, "Most requested files to list");
  ing->add_option("--dump", ing_dump, "Write the remapped trace as slot,file_id CSV");
  ing->add_option("--delimiter", ing_delim, "Field delimiter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::Success&) {
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (sim->parsed()) {
      ExperimentConfig cfg = sim_config.empty() ? config_from_json(flags.to_json())
                                                : load_config(sim_config);
      if (sim_workers) cfg.workers = sim_workers;
      if (!sim_profile.empty()) cfg.fetch_profile = true;
      const AggregateSeries series = run_trials(cfg);
      const CsvTable table = to_csv_table(series, sim_overlay ? &cfg : nullptr);
      with_output(sim_out, out, [&](std::ostream& o) { write_csv(table, o); });
      if (!sim_profile.empty()) {
        with_output(sim_profile, out, [&](std::ostream& o) { write_fetch_profile_csv(series, o); });
      }
    } else if (swp->parsed()) {
      ExperimentConfig cfg = load_config(swp_config);
      if (swp_workers) cfg.workers = swp_workers;
      const auto rows = sweep(parse_sweep_axis(swp_axis), parse_values(swp_values), cfg, swp_overlay);
      for (const SweepRow& r : rows) {
        if (!r.error.empty()) err << "warning: x=" << format_sig6(r.x) << ": " << r.error << '\n';
      }
      with_output(swp_out, out, [&](std::ostream& o) { write_csv(to_csv_table(rows), o); });
    } else if (bnd->parsed()) {
      Rows rows;
      std::vector<std::string> names;
      if (formula == "all") {
        names = formula_names();
      } else {
        names = {formula};
      }
      for (const std::string& n : names) {
        try {
          for (auto& row : evaluate_formula(n, ba)) rows.push_back(row);
        } catch (const Error& e) {
          if (formula != "all") throw;
          err << "skip " << n << ": " << e.what() << '\n';
        }
        if (uses_stochastic_domain(n) && !bounds::stochastic_bound_domain_ok(as_count(ba.l, "L"))) {
          err << "warning: " << n << " assumes L >= 3\n";
        }
      }
      for (const auto& [k, v] : rows) out << k << " = " << format_value(v) << '\n';
      if (!bnd_csv.empty()) {
        with_output(bnd_csv, out, [&](std::ostream& o) {
          o << "name,value\n";
          for (const auto& [k, v] : rows) o << k << ',' << format_value(v) << '\n';
        });
      }
    } else if (ing->parsed()) {
      const Trace trace =
          remap_ids(parse_movielens(ing_path, ing_max_rows, ing_delim), parse_trace_order(ing_order));
      const TraceStats stats = trace_stats(trace, ing_top);
      out << "length = " << stats.length << '\n';
      out << "library_size = " << stats.library_size << '\n';
      for (std::size_t i = 0; i < stats.top.size(); ++i) {
        const auto& [id, count] = stats.top[i];
        out << "top[" << i << "] = " << trace.raw_ids[id] << " (id " << id << ", " << count
            << " requests)\n";
      }
      if (!ing_dump.empty()) write_trace_csv(trace, ing_dump);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace olcache

#endif  // OLCACHE_CLI_HPP
