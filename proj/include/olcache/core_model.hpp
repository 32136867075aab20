#ifndef OLCACHE_CORE_MODEL_HPP
#define OLCACHE_CORE_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "olcache/error.hpp"

namespace olcache {

using FileId = std::size_t;
// Slots are 1-based throughout, matching the request timeline t = 1..T.
using Slot = std::size_t;

struct ProblemConfig {
  std::size_t library_size = 0;  // L
  std::size_t cache_size = 0;    // C
  std::size_t horizon = 0;       // T
  double fetch_cost = 0.0;       // D, cost units per fetched file

  void validate() const {
    if (cache_size < 1 || cache_size >= library_size) {
      throw Error(ErrorCode::invalid_config,
                  "need 1 <= C < L, got C=" + std::to_string(cache_size) +
                      " L=" + std::to_string(library_size));
    }
    if (horizon < 1) {
      throw Error(ErrorCode::invalid_config, "horizon T must be >= 1");
    }
    if (!(fetch_cost >= 0.0) || !std::isfinite(fetch_cost)) {
      throw Error(ErrorCode::invalid_config, "fetch cost D must be finite and >= 0");
    }
  }
};

// A set of distinct cached files, kept sorted ascending.
class CacheSet {
 public:
  CacheSet() = default;

  CacheSet(std::vector<FileId> files, std::size_t library_size)
      : files_(std::move(files)) {
    std::sort(files_.begin(), files_.end());
    if (std::adjacent_find(files_.begin(), files_.end()) != files_.end()) {
      throw Error(ErrorCode::invalid_state, "cache set has duplicate files");
    }
    if (!files_.empty() && files_.back() >= library_size) {
      throw Error(ErrorCode::out_of_library,
                  "file " + std::to_string(files_.back()) + " outside library of size " +
                      std::to_string(library_size));
    }
  }

  std::size_t size() const noexcept { return files_.size(); }
  std::span<const FileId> files() const noexcept { return files_; }

  bool contains(FileId f) const {
    return std::binary_search(files_.begin(), files_.end(), f);
  }

  friend bool operator==(const CacheSet&, const CacheSet&) = default;

 private:
  std::vector<FileId> files_;
};

// The C indices with the largest values; ties go to the lowest index.
inline CacheSet top_c_indices(std::span<const double> values, std::size_t c) {
  const std::size_t n = values.size();
  if (c < 1 || c > n) {
    throw Error(ErrorCode::invalid_config,
                "top-C selection needs 1 <= C <= L, got C=" + std::to_string(c) +
                    " L=" + std::to_string(n));
  }
  std::vector<FileId> idx(n);
  std::iota(idx.begin(), idx.end(), FileId{0});
  auto better = [&](FileId a, FileId b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  };
  if (c < n) {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(c - 1),
                     idx.end(), better);
  }
  idx.resize(c);
  return CacheSet(std::move(idx), n);
}

inline CacheSet top_c_indices(std::span<const std::uint64_t> counts, std::size_t c) {
  std::vector<double> v(counts.begin(), counts.end());
  return top_c_indices(std::span<const double>(v), c);
}

// Cumulative request counts X_t. At the start of slot t the counts sum to t-1.
class CountState {
 public:
  CountState() = default;
  explicit CountState(std::size_t library_size) : counts_(library_size, 0) {}

  std::size_t library_size() const noexcept { return counts_.size(); }
  Slot slot() const noexcept { return slot_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t operator[](FileId f) const { return counts_.at(f); }

  void record(FileId f) {
    if (f >= counts_.size()) {
      throw Error(ErrorCode::out_of_library,
                  "file " + std::to_string(f) + " outside library of size " +
                      std::to_string(counts_.size()));
    }
    ++counts_[f];
    ++slot_;
  }

 private:
  std::vector<std::uint64_t> counts_;
  Slot slot_ = 1;
};

// |next \ prev|, i.e. half the l1 distance between the indicator vectors.
inline std::size_t fetch_count(const CacheSet& prev, const CacheSet& next) {
  if (prev.size() != next.size()) {
    throw Error(ErrorCode::invalid_state,
                "cache cardinalities differ: " + std::to_string(prev.size()) + " vs " +
                    std::to_string(next.size()));
  }
  auto p = prev.files();
  std::size_t fetched = 0;
  for (FileId f : next.files()) {
    if (!std::binary_search(p.begin(), p.end(), f)) ++fetched;
  }
  return fetched;
}

inline double switch_cost_increment(const CacheSet& prev, const CacheSet& next, double d) {
  return d * static_cast<double>(fetch_count(prev, next));
}

// Inter-switching periods r_1..r_s with the slots at which the cache may
// change: 1, r_1+1, r_1+r_2+1, ... (the trailing T+1 is beyond the horizon).
class UpdateSchedule {
 public:
  UpdateSchedule() = default;

  std::size_t horizon() const noexcept { return horizon_; }
  std::span<const std::size_t> periods() const noexcept { return periods_; }
  // t_i = sum_{j<i} r_j, one per period (t_1 = 0).
  std::span<const std::size_t> boundaries() const noexcept { return boundaries_; }
  const std::vector<Slot>& allowed_slots() const noexcept { return allowed_; }

  bool unrestricted() const noexcept { return allowed_.size() == horizon_; }

  bool is_update_slot(Slot t) const {
    if (t < 1 || t > horizon_) {
      throw Error(ErrorCode::out_of_range,
                  "slot " + std::to_string(t) + " outside [1, " + std::to_string(horizon_) +
                      "]");
    }
    return allowed_flag_[t] != 0;
  }

  std::size_t max_period() const {
    return periods_.empty() ? 0 : *std::max_element(periods_.begin(), periods_.end());
  }

 private:
  friend UpdateSchedule build_schedule(std::vector<std::size_t> periods, std::size_t horizon);

  std::size_t horizon_ = 0;
  std::vector<std::size_t> periods_;
  std::vector<std::size_t> boundaries_;
  std::vector<Slot> allowed_;
  std::vector<char> allowed_flag_;
};

inline UpdateSchedule build_schedule(std::vector<std::size_t> periods, std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_config, "horizon T must be >= 1");
  if (periods.empty()) throw Error(ErrorCode::invalid_period, "no periods given");
  std::size_t total = 0;
  for (std::size_t r : periods) {
    if (r < 1) throw Error(ErrorCode::invalid_period, "period must be >= 1");
    total += r;
  }
  if (total != horizon) {
    throw Error(ErrorCode::schedule_mismatch,
                "periods sum to " + std::to_string(total) + " but T=" + std::to_string(horizon));
  }
  UpdateSchedule s;
  s.horizon_ = horizon;
  s.allowed_flag_.assign(horizon + 1, 0);
  std::size_t t_i = 0;
  for (std::size_t r : periods) {
    s.boundaries_.push_back(t_i);
    s.allowed_.push_back(t_i + 1);
    s.allowed_flag_[t_i + 1] = 1;
    t_i += r;
  }
  s.periods_ = std::move(periods);
  return s;
}

inline UpdateSchedule unrestricted_schedule(std::size_t horizon) {
  return build_schedule(std::vector<std::size_t>(horizon, 1), horizon);
}

inline UpdateSchedule homogeneous_schedule(std::size_t r, std::size_t horizon) {
  if (r < 1) throw Error(ErrorCode::invalid_period, "period must be >= 1");
  if (horizon % r != 0) {
    throw Error(ErrorCode::divisibility,
                "r=" + std::to_string(r) + " does not divide T=" + std::to_string(horizon));
  }
  return build_schedule(std::vector<std::size_t>(horizon / r, r), horizon);
}

}  // namespace olcache

#endif  // OLCACHE_CORE_MODEL_HPP
