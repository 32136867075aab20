#ifndef OLCACHE_POLICIES_HPP
#define OLCACHE_POLICIES_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "olcache/core_model.hpp"
#include "olcache/error.hpp"

namespace olcache {

enum class PolicyKind { lfu, ftpl, wftpl, fixed };

inline std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::lfu: return "lfu";
    case PolicyKind::ftpl: return "ftpl";
    case PolicyKind::wftpl: return "wftpl";
    case PolicyKind::fixed: return "static";
  }
  return "unknown";
}

inline PolicyKind parse_policy_kind(std::string_view s) {
  if (s == "lfu") return PolicyKind::lfu;
  if (s == "ftpl") return PolicyKind::ftpl;
  if (s == "wftpl" || s == "w-ftpl") return PolicyKind::wftpl;
  if (s == "static") return PolicyKind::fixed;
  throw Error(ErrorCode::unknown_kind, "unknown policy kind '" + std::string(s) + "'");
}

enum class RateKind {
  constant_sqrt_horizon,   // alpha * sqrt(T)
  adaptive_sqrt_t,         // alpha * sqrt(t)
  adaptive_sqrt_t_over_c,  // alpha * sqrt(t / C)
  fixed,                   // eta, independent of t and T
};

inline std::string_view to_string(RateKind k) {
  switch (k) {
    case RateKind::constant_sqrt_horizon: return "constant-sqrtT";
    case RateKind::adaptive_sqrt_t: return "adaptive-sqrt-t";
    case RateKind::adaptive_sqrt_t_over_c: return "adaptive-sqrt-t-over-C";
    case RateKind::fixed: return "fixed";
  }
  return "unknown";
}

inline RateKind parse_rate_kind(std::string_view s) {
  if (s == "constant-sqrtT") return RateKind::constant_sqrt_horizon;
  if (s == "adaptive-sqrt-t") return RateKind::adaptive_sqrt_t;
  if (s == "adaptive-sqrt-t-over-C") return RateKind::adaptive_sqrt_t_over_c;
  if (s == "fixed") return RateKind::fixed;
  throw Error(ErrorCode::unknown_kind, "unknown learning-rate kind '" + std::string(s) + "'");
}

struct LearningRateSchedule {
  RateKind kind = RateKind::adaptive_sqrt_t;
  double alpha = 1.0;
  double eta = 0.0;  // only read by RateKind::fixed

  void validate() const {
    if (kind == RateKind::fixed) {
      if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw Error(ErrorCode::invalid_params, "fixed learning rate must be finite and >= 0");
      }
    } else if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw Error(ErrorCode::invalid_params, "learning-rate scale alpha must be > 0");
    }
  }
};

inline double learning_rate(const LearningRateSchedule& s, Slot t, std::size_t horizon,
                            std::size_t cache_size) {
  switch (s.kind) {
    case RateKind::constant_sqrt_horizon:
      return s.alpha * std::sqrt(static_cast<double>(horizon));
    case RateKind::adaptive_sqrt_t:
      return s.alpha * std::sqrt(static_cast<double>(t));
    case RateKind::adaptive_sqrt_t_over_c:
      return s.alpha * std::sqrt(static_cast<double>(t) / static_cast<double>(cache_size));
    case RateKind::fixed:
      return s.eta;
  }
  return 0.0;
}

// u * (ln D)^(1+beta) for D > 1, zero otherwise.
inline double wftpl_wait_threshold(double u, double beta, double d) {
  if (!(d > 1.0)) return 0.0;
  return u * std::pow(std::log(d), 1.0 + beta);
}

struct WaitConfig {
  double u = 1.0;
  double beta = 1.0;
  double threshold = 0.0;  // t'; updates are suppressed while t <= t'

  static WaitConfig from_cost(double u, double beta, double d) {
    if (!(u > 0.0) || !(beta > 0.0)) {
      throw Error(ErrorCode::invalid_params, "W-FTPL needs u > 0 and beta > 0");
    }
    return WaitConfig{u, beta, wftpl_wait_threshold(u, beta, d)};
  }

  static WaitConfig with_threshold(double t_prime) {
    if (!(t_prime >= 0.0)) {
      throw Error(ErrorCode::invalid_params, "wait threshold must be >= 0");
    }
    return WaitConfig{1.0, 1.0, t_prime};
  }
};

struct PolicyParams {
  LearningRateSchedule rate;
  std::optional<WaitConfig> wait;       // required by W-FTPL
  std::optional<CacheSet> static_set;   // static comparator
};

inline CacheSet lfu_select(const CountState& counts, std::size_t c) {
  return top_c_indices(counts.counts(), c);
}

inline CacheSet ftpl_select(const CountState& counts, std::span<const double> gamma, double eta,
                            std::size_t c) {
  auto raw = counts.counts();
  if (gamma.size() != raw.size()) {
    throw Error(ErrorCode::invalid_state, "perturbation length differs from library size");
  }
  std::vector<double> perturbed(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    perturbed[i] = static_cast<double>(raw[i]) + eta * gamma[i];
  }
  return top_c_indices(std::span<const double>(perturbed), c);
}

struct StepResult {
  const CacheSet& cache;
  std::size_t fetches;
};

// One caching policy instance for one episode. Drive it with step(t) at the
// start of slot t, then record_request(x_t) once the request is known.
class CachePolicy {
 public:
  static CachePolicy create(PolicyKind kind, const ProblemConfig& config,
                            const PolicyParams& params, std::uint64_t seed) {
    config.validate();
    CachePolicy p;
    p.kind_ = kind;
    p.config_ = config;
    p.seed_ = seed;
    p.counts_ = CountState(config.library_size);
    switch (kind) {
      case PolicyKind::lfu:
        break;
      case PolicyKind::wftpl:
        if (!params.wait) throw Error(ErrorCode::invalid_params, "W-FTPL needs a wait config");
        p.wait_ = *params.wait;
        if (!(p.wait_.u > 0.0) || !(p.wait_.beta > 0.0) || !(p.wait_.threshold >= 0.0)) {
          throw Error(ErrorCode::invalid_params, "W-FTPL needs u > 0, beta > 0, t' >= 0");
        }
        [[fallthrough]];
      case PolicyKind::ftpl: {
        params.rate.validate();
        p.rate_ = params.rate;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          0x706f6c69u};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        p.gamma_.resize(config.library_size);
        for (double& g : p.gamma_) g = normal(rng);
        break;
      }
      case PolicyKind::fixed:
        if (!params.static_set || params.static_set->size() != config.cache_size) {
          throw Error(ErrorCode::invalid_params, "static policy needs a set of exactly C files");
        }
        p.cache_ = *params.static_set;
        if (!p.cache_.files().empty() && p.cache_.files().back() >= config.library_size) {
          throw Error(ErrorCode::out_of_library, "static set outside library");
        }
        break;
    }
    // Slot-1 fill: the select rule over zero counts. For the perturbed
    // policies this is argmax_C(eta_1 * gamma), a uniformly random C-subset.
    if (kind != PolicyKind::fixed) p.cache_ = p.select(1);
    return p;
  }

  PolicyKind kind() const noexcept { return kind_; }
  const ProblemConfig& config() const noexcept { return config_; }
  const CacheSet& cache() const noexcept { return cache_; }
  const CountState& counts() const noexcept { return counts_; }
  std::span<const double> perturbation() const noexcept { return gamma_; }
  const LearningRateSchedule& rate() const noexcept { return rate_; }
  double wait_threshold() const noexcept { return kind_ == PolicyKind::wftpl ? wait_.threshold : 0.0; }
  std::uint64_t seed() const noexcept { return seed_; }

  StepResult step(Slot t, const UpdateSchedule& schedule) {
    if (t != counts_.slot()) {
      throw Error(ErrorCode::out_of_range, "step(" + std::to_string(t) +
                                               ") but policy is at slot " +
                                               std::to_string(counts_.slot()));
    }
    if (t == 1 || !schedule.is_update_slot(t)) return {cache_, 0};
    if (kind_ == PolicyKind::fixed) return {cache_, 0};
    if (kind_ == PolicyKind::wftpl && !(static_cast<double>(t) > wait_.threshold)) {
      return {cache_, 0};
    }
    CacheSet next = select(t);
    const std::size_t fetched = fetch_count(cache_, next);
    cache_ = std::move(next);
    return {cache_, fetched};
  }

  void record_request(FileId x) { counts_.record(x); }

 private:
  CacheSet select(Slot t) const {
    if (kind_ == PolicyKind::lfu) return lfu_select(counts_, config_.cache_size);
    const double eta = learning_rate(rate_, t, config_.horizon, config_.cache_size);
    return ftpl_select(counts_, gamma_, eta, config_.cache_size);
  }

  PolicyKind kind_ = PolicyKind::lfu;
  ProblemConfig config_;
  CountState counts_;
  CacheSet cache_;
  std::vector<double> gamma_;
  LearningRateSchedule rate_;
  WaitConfig wait_;
  std::uint64_t seed_ = 0;
};

}  // namespace olcache

#endif  // OLCACHE_POLICIES_HPP
