#ifndef OLCACHE_REGRET_HPP
#define OLCACHE_REGRET_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "olcache/core_model.hpp"
#include "olcache/error.hpp"
#include "olcache/generators.hpp"

namespace olcache {

// One simulated path. Per-slot vectors are indexed by t-1.
struct EpisodeRecord {
  std::vector<FileId> requests;
  std::vector<std::uint8_t> hits;
  std::vector<std::uint32_t> fetches;       // fetches[0] == 0: the slot-1 fill is free
  std::vector<CacheSet> cache_history;      // empty unless snapshots were requested
  CountState final_counts;

  std::uint64_t reward = 0;
  std::uint64_t total_fetches = 0;
  double switch_cost = 0.0;  // D * total_fetches

  std::size_t length() const noexcept { return requests.size(); }
};

struct RegretPoint {
  Slot t = 0;
  double regret = 0.0;
  double switch_cost = 0.0;
};

using RegretSeries = std::vector<RegretPoint>;

inline std::uint64_t hindsight_best_reward(std::span<const std::uint64_t> counts, std::size_t c) {
  if (c >= counts.size()) return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  std::vector<std::uint64_t> v(counts.begin(), counts.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(c), v.end(),
                   std::greater<>());
  return std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(c), std::uint64_t{0});
}

inline std::uint64_t hindsight_best_reward(const CountState& counts, std::size_t c) {
  return hindsight_best_reward(counts.counts(), c);
}

// Exhaustive maximum over every C-subset; guards against more than 1e6 subsets.
inline std::uint64_t hindsight_best_reward_bruteforce(std::span<const std::uint64_t> counts,
                                                      std::size_t c) {
  const std::size_t n = counts.size();
  if (c > n) throw Error(ErrorCode::invalid_config, "C exceeds library size");
  double subsets = 1.0;
  for (std::size_t i = 0; i < c; ++i) {
    subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (subsets > 1e6) {
    throw Error(ErrorCode::combinatorial_blowup, "binomial(L, C) exceeds 1e6");
  }
  std::vector<char> pick(n, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(c), 1);
  std::uint64_t best = 0;
  // prev_permutation over a 1..10..0 mask visits every C-subset once.
  do {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) s += counts[i];
    }
    best = std::max(best, s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

inline double total_switch_cost(const EpisodeRecord& episode, double d) {
  return d * static_cast<double>(episode.total_fetches);
}

// Single-path estimate; may be negative.
inline double adversarial_regret(const EpisodeRecord& episode, const CountState& final_counts,
                                 std::size_t c, double d) {
  return static_cast<double>(hindsight_best_reward(final_counts, c)) -
         static_cast<double>(episode.reward) + total_switch_cost(episode, d);
}

inline void check_distribution(const PopularityDistribution& dist, const EpisodeRecord& episode) {
  if (dist.size() != episode.final_counts.library_size() && episode.final_counts.library_size() != 0) {
    throw Error(ErrorCode::invalid_distribution, "distribution length differs from library size");
  }
}

// sum_t [x_t in topC(mu)] - [x_t in cache(t)] + D * fetches.
inline double stochastic_sample_regret(const EpisodeRecord& episode,
                                       const PopularityDistribution& dist, std::size_t c, double d) {
  check_distribution(dist, episode);
  const CacheSet best = dist.top_c(c);
  double optimal_hits = 0.0;
  for (FileId x : episode.requests) {
    if (x >= dist.size()) throw Error(ErrorCode::out_of_library, "request outside distribution");
    if (best.contains(x)) optimal_hits += 1.0;
  }
  return optimal_hits - static_cast<double>(episode.reward) + total_switch_cost(episode, d);
}

// Per-slot expected reward gap of a cache against the top-C comparator; >= 0.
inline double pseudo_regret_increment(const CacheSet& cache, const PopularityDistribution& dist,
                                      std::size_t c) {
  double held = 0.0;
  for (FileId f : cache.files()) held += dist.probability(f);
  return std::max(0.0, dist.top_c_mass(c) - held);
}

inline double stochastic_pseudo_regret(std::span<const CacheSet> cache_history,
                                       const PopularityDistribution& dist, std::size_t c, double d,
                                       std::uint64_t total_fetches) {
  if (cache_history.empty()) {
    throw Error(ErrorCode::invalid_state, "pseudo regret needs cache snapshots");
  }
  double sum = 0.0;
  for (const CacheSet& cache : cache_history) sum += pseudo_regret_increment(cache, dist, c);
  return sum + d * static_cast<double>(total_fetches);
}

}  // namespace olcache

#endif  // OLCACHE_REGRET_HPP
