#ifndef OLCACHE_CONFIG_HPP
#define OLCACHE_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <string>

#include "json.hpp"
#include "olcache/error.hpp"
#include "olcache/harness.hpp"
#include "olcache/trace.hpp"

// JSON experiment documents. The layout mirrors ExperimentConfig:
//
//   {
//     "problem":   {"library_size": 10, "cache_size": 4, "horizon": 2000, "fetch_cost": 20},
//     "policy":    {"kind": "wftpl", "rate": {"kind": "adaptive-sqrt-t-over-C", "alpha": 1},
//                   "wait": {"u": 20, "beta": 0.2}},
//     "generator": {"kind": "iid", "distribution": {"kind": "dyadic"}},
//     "schedule":  {"kind": "unrestricted"},
//     "metric": "stochastic-pseudo", "trials": 200, "base_seed": 1,
//     "checkpoints": [2000]
//   }
//
// Unknown keys are rejected so typos surface as schema errors.
namespace olcache {

namespace detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::invalid_config, where + ": " + what);
}

inline void allow_keys(const json& obj, const std::string& where,
                       std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) schema_error(where, "unknown key '" + it.key() + "'");
  }
}

template <class T>
T get_or(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    schema_error(where + "." + key, e.what());
  }
}

template <class T>
T get_required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema_error(where, std::string("missing '") + key + "'");
  return get_or<T>(obj, key, where, T{});
}

inline std::size_t get_count(const json& obj, const char* key, const std::string& where,
                             std::optional<std::size_t> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    schema_error(where, std::string("missing '") + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    schema_error(where + "." + key, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

inline PopularityDistribution parse_distribution(const json& j, std::size_t library_size) {
  const std::string where = "generator.distribution";
  allow_keys(j, where, {"kind", "exponent", "mu"});
  const auto kind = get_required<std::string>(j, "kind", where);
  if (kind == "dyadic") return dyadic_pmf(library_size);
  if (kind == "zipf") return zipf_pmf(library_size, get_required<double>(j, "exponent", where));
  if (kind == "explicit") {
    return PopularityDistribution(get_required<std::vector<double>>(j, "mu", where));
  }
  schema_error(where, "unknown distribution kind '" + kind + "'");
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir = {}) {
  using detail::allow_keys;
  using detail::get_count;
  using detail::get_or;
  using detail::get_required;
  using detail::schema_error;

  try {
    allow_keys(doc, "config",
               {"problem", "policy", "generator", "schedule", "metric", "trials", "base_seed",
                "checkpoints", "workers", "fetch_profile"});
    ExperimentConfig cfg;

    if (!doc.contains("generator")) schema_error("config", "missing 'generator'");
    const auto& gen = doc.at("generator");
    allow_keys(gen, "generator",
               {"kind", "distribution", "start", "path", "max_rows", "order", "delimiter"});
    const auto gen_kind = get_required<std::string>(gen, "kind", "generator");

    // A trace fixes L and the default horizon, so load it first.
    if (gen_kind == "trace") {
      std::filesystem::path path = get_required<std::string>(gen, "path", "generator");
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      std::optional<std::size_t> max_rows;
      if (gen.contains("max_rows")) max_rows = get_count(gen, "max_rows", "generator");
      const auto order = parse_trace_order(get_or<std::string>(gen, "order", "generator", "file"));
      const auto delim = get_or<std::string>(gen, "delimiter", "generator", "::");
      cfg.generator.kind = GeneratorKind::trace;
      cfg.generator.trace = std::make_shared<const Trace>(
          remap_ids(parse_movielens(path.string(), max_rows, delim), order));
    }

    if (!doc.contains("problem")) schema_error("config", "missing 'problem'");
    const auto& prob = doc.at("problem");
    allow_keys(prob, "problem", {"library_size", "cache_size", "horizon", "fetch_cost"});
    const Trace* trace = cfg.generator.trace.get();
    cfg.problem.library_size = get_count(
        prob, "library_size", "problem",
        trace ? std::optional<std::size_t>(trace->library_size) : std::nullopt);
    cfg.problem.cache_size = get_count(prob, "cache_size", "problem");
    cfg.problem.horizon = get_count(
        prob, "horizon", "problem",
        trace ? std::optional<std::size_t>(trace->requests.size()) : std::nullopt);
    cfg.problem.fetch_cost = get_or<double>(prob, "fetch_cost", "problem", 0.0);

    if (gen_kind == "iid") {
      cfg.generator.kind = GeneratorKind::iid;
      if (!gen.contains("distribution")) schema_error("generator", "missing 'distribution'");
      cfg.generator.distribution =
          detail::parse_distribution(gen.at("distribution"), cfg.problem.library_size);
    } else if (gen_kind == "round-robin") {
      cfg.generator.kind = GeneratorKind::round_robin;
      cfg.generator.start = get_count(gen, "start", "generator", std::size_t{0});
    } else if (gen_kind == "phase-adversary") {
      cfg.generator.kind = GeneratorKind::phase_adversary;
    } else if (gen_kind != "trace") {
      schema_error("generator", "unknown kind '" + gen_kind + "'");
    }

    if (!doc.contains("policy")) schema_error("config", "missing 'policy'");
    const auto& pol = doc.at("policy");
    allow_keys(pol, "policy", {"kind", "rate", "wait", "static_files"});
    cfg.policy.kind = parse_policy_kind(get_required<std::string>(pol, "kind", "policy"));
    if (pol.contains("rate")) {
      const auto& rate = pol.at("rate");
      allow_keys(rate, "policy.rate", {"kind", "alpha", "eta"});
      cfg.policy.rate.kind =
          parse_rate_kind(get_or<std::string>(rate, "kind", "policy.rate", "adaptive-sqrt-t"));
      cfg.policy.rate.alpha = get_or<double>(rate, "alpha", "policy.rate", 1.0);
      cfg.policy.rate.eta = get_or<double>(rate, "eta", "policy.rate", 0.0);
    }
    if (pol.contains("wait")) {
      const auto& wait = pol.at("wait");
      allow_keys(wait, "policy.wait", {"u", "beta", "threshold"});
      cfg.policy.u = get_or<double>(wait, "u", "policy.wait", 1.0);
      cfg.policy.beta = get_or<double>(wait, "beta", "policy.wait", 1.0);
      if (wait.contains("threshold")) {
        cfg.policy.wait_threshold = get_or<double>(wait, "threshold", "policy.wait", 0.0);
      }
    } else if (cfg.policy.kind == PolicyKind::wftpl) {
      schema_error("policy", "W-FTPL needs 'wait'");
    }
    cfg.policy.static_files =
        get_or<std::vector<std::size_t>>(pol, "static_files", "policy", {});

    if (doc.contains("schedule")) {
      const auto& sch = doc.at("schedule");
      allow_keys(sch, "schedule", {"kind", "periods", "r"});
      const auto kind = get_or<std::string>(sch, "kind", "schedule", "unrestricted");
      if (kind == "unrestricted") {
        cfg.schedule.kind = ScheduleKind::unrestricted;
      } else if (kind == "periods") {
        cfg.schedule.kind = ScheduleKind::periods;
        cfg.schedule.periods = get_required<std::vector<std::size_t>>(sch, "periods", "schedule");
      } else if (kind == "homogeneous") {
        cfg.schedule.kind = ScheduleKind::homogeneous;
        cfg.schedule.r = get_count(sch, "r", "schedule");
      } else {
        schema_error("schedule", "unknown kind '" + kind + "'");
      }
    }

    cfg.metric = parse_metric(get_or<std::string>(
        doc, "metric", "config",
        cfg.generator.kind == GeneratorKind::iid ? "stochastic-pseudo" : "adversarial"));
    cfg.trials = get_count(doc, "trials", "config", std::size_t{1});
    cfg.base_seed = get_or<std::uint64_t>(doc, "base_seed", "config", 0);
    cfg.checkpoints = get_or<std::vector<std::size_t>>(doc, "checkpoints", "config", {});
    cfg.workers = get_count(doc, "workers", "config", std::size_t{0});
    cfg.fetch_profile = get_or<bool>(doc, "fetch_profile", "config", false);

    cfg.validate();
    (void)cfg.schedule.build(cfg.problem.horizon);
    if (cfg.policy.kind == PolicyKind::wftpl || cfg.policy.kind == PolicyKind::fixed) {
      (void)cfg.policy.params_for(cfg.problem);
    }
    return cfg;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io || e.code() == ErrorCode::parse) throw;
    if (e.code() == ErrorCode::invalid_config) throw;
    throw Error(ErrorCode::invalid_config, e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, "'" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc, std::filesystem::path(path).parent_path());
}

}  // namespace olcache

#endif  // OLCACHE_CONFIG_HPP
