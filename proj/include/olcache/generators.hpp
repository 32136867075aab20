#ifndef OLCACHE_GENERATORS_HPP
#define OLCACHE_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "olcache/core_model.hpp"
#include "olcache/error.hpp"

namespace olcache {

// A popularity distribution over files, stored both in original file order
// and sorted by decreasing probability (stable, so equal masses keep their
// original relative order).
class PopularityDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  PopularityDistribution() = default;

  explicit PopularityDistribution(std::vector<double> mu) : mu_(std::move(mu)) {
    if (mu_.size() < 2) {
      throw Error(ErrorCode::invalid_distribution, "need at least two files");
    }
    double total = 0.0;
    for (double p : mu_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(ErrorCode::invalid_distribution, "probabilities must be finite and >= 0");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
      throw Error(ErrorCode::invalid_distribution,
                  "probabilities sum to " + std::to_string(total) + ", not 1");
    }
    order_.resize(mu_.size());
    std::iota(order_.begin(), order_.end(), FileId{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](FileId a, FileId b) { return mu_[a] > mu_[b]; });
    sorted_.resize(mu_.size());
    cumulative_.resize(mu_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      sorted_[i] = mu_[order_[i]];
      acc += sorted_[i];
      cumulative_[i] = acc;
    }
  }

  std::size_t size() const noexcept { return mu_.size(); }
  // Probabilities in original file order.
  std::span<const double> probabilities() const noexcept { return mu_; }
  double probability(FileId f) const { return mu_.at(f); }
  // mu_(1) >= mu_(2) >= ... and the file behind each rank.
  std::span<const double> sorted() const noexcept { return sorted_; }
  std::span<const FileId> order() const noexcept { return order_; }

  // Delta_{j,k} = mu_(j) - mu_(k) over sorted ranks (0-based j < C <= k).
  double gap(std::size_t j, std::size_t k) const { return sorted_.at(j) - sorted_.at(k); }

  double delta_min(std::size_t c) const {
    check_c(c);
    return sorted_[c - 1] - sorted_[c];
  }

  // The optimal static cache: the C most popular files, lowest index on ties.
  CacheSet top_c(std::size_t c) const {
    check_c(c);
    return CacheSet(std::vector<FileId>(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(c)),
                    mu_.size());
  }

  double top_c_mass(std::size_t c) const {
    check_c(c);
    return std::accumulate(sorted_.begin(), sorted_.begin() + static_cast<std::ptrdiff_t>(c), 0.0);
  }

  // Inverse CDF over the sorted order, mapped back to the original file ID.
  template <class Rng>
  FileId sample(Rng& rng) const {
    const double u = std::generate_canonical<double, 53>(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t rank = static_cast<std::size_t>(it - cumulative_.begin());
    if (rank >= order_.size()) rank = order_.size() - 1;
    // Skip zero-mass ranks that an exact boundary hit could land on.
    while (rank > 0 && sorted_[rank] == 0.0) --rank;
    return order_[rank];
  }

 private:
  void check_c(std::size_t c) const {
    if (c < 1 || c >= mu_.size()) {
      throw Error(ErrorCode::invalid_config, "need 1 <= C < L for distribution gaps");
    }
  }

  std::vector<double> mu_;
  std::vector<double> sorted_;
  std::vector<FileId> order_;
  std::vector<double> cumulative_;
};

// mu_i = 2^-i for i < L and mu_L = 2^-(L-1), 1-based.
inline PopularityDistribution dyadic_pmf(std::size_t library_size) {
  if (library_size < 2) {
    throw Error(ErrorCode::invalid_distribution, "dyadic distribution needs L >= 2");
  }
  std::vector<double> mu(library_size);
  for (std::size_t i = 0; i + 1 < library_size; ++i) mu[i] = std::ldexp(1.0, -static_cast<int>(i + 1));
  mu[library_size - 1] = std::ldexp(1.0, -static_cast<int>(library_size - 1));
  return PopularityDistribution(std::move(mu));
}

inline PopularityDistribution zipf_pmf(std::size_t library_size, double exponent) {
  if (library_size < 2) throw Error(ErrorCode::invalid_distribution, "zipf needs L >= 2");
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::invalid_distribution, "zipf exponent must be finite and >= 0");
  }
  std::vector<double> w(library_size);
  for (std::size_t i = 0; i < library_size; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), -exponent);
  }
  // Sum smallest first for accuracy.
  double total = 0.0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) total += *it;
  for (double& x : w) x /= total;
  return PopularityDistribution(std::move(w));
}

// Independent and identically distributed requests.
class IidSource {
 public:
  IidSource(PopularityDistribution dist, std::uint64_t seed) : dist_(std::move(dist)), rng_(seed) {}

  FileId next(Slot) { return dist_.sample(rng_); }
  const PopularityDistribution& distribution() const noexcept { return dist_; }

 private:
  PopularityDistribution dist_;
  std::mt19937_64 rng_;
};

// start, start+1, ... mod L, one request per slot.
class RoundRobinSource {
 public:
  RoundRobinSource(std::size_t library_size, FileId start)
      : library_size_(library_size), next_(start % std::max<std::size_t>(library_size, 1)) {
    if (library_size < 2) throw Error(ErrorCode::invalid_config, "round robin needs L >= 2");
  }

  FileId next(Slot) {
    const FileId out = next_;
    next_ = (next_ + 1) % library_size_;
    return out;
  }

 private:
  std::size_t library_size_;
  FileId next_;
};

// Phase i of the schedule repeats one file drawn uniformly from the first 2C
// files; draws are independent across phases.
class PhaseAdversarySource {
 public:
  PhaseAdversarySource(std::size_t library_size, std::size_t cache_size, UpdateSchedule phases,
                       std::uint64_t seed)
      : span_(2 * cache_size), phases_(std::move(phases)), rng_(seed) {
    if (cache_size < 1 || library_size < 2 * cache_size) {
      throw Error(ErrorCode::invalid_config, "phase adversary needs L >= 2C");
    }
  }

  FileId next(Slot t) {
    if (phases_.is_update_slot(t) || !started_) {
      std::uniform_int_distribution<FileId> pick(0, span_ - 1);
      current_ = pick(rng_);
      started_ = true;
    }
    return current_;
  }

 private:
  std::size_t span_;
  UpdateSchedule phases_;
  std::mt19937_64 rng_;
  FileId current_ = 0;
  bool started_ = false;
};

inline FileId trace_next(std::span<const FileId> trace, Slot t) {
  if (t < 1 || t > trace.size()) {
    throw Error(ErrorCode::exhausted_trace, "slot " + std::to_string(t) + " beyond trace of length " +
                                                std::to_string(trace.size()));
  }
  return trace[t - 1];
}

class TraceSource {
 public:
  explicit TraceSource(std::vector<FileId> requests) : requests_(std::move(requests)) {}

  FileId next(Slot t) { return trace_next(requests_, t); }
  std::size_t length() const noexcept { return requests_.size(); }

 private:
  std::vector<FileId> requests_;
};

using RequestSource = std::variant<IidSource, RoundRobinSource, PhaseAdversarySource, TraceSource>;

inline FileId next_request(RequestSource& source, Slot t) {
  return std::visit([t](auto& s) { return s.next(t); }, source);
}

}  // namespace olcache

#endif  // OLCACHE_GENERATORS_HPP
