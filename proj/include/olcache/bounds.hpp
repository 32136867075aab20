#ifndef OLCACHE_BOUNDS_HPP
#define OLCACHE_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "olcache/error.hpp"
#include "olcache/generators.hpp"

// Closed-form regret and switch-count bounds. All logarithms are natural.
// A zero popularity gap makes the stochastic upper bounds infinite; that is
// returned as +inf rather than raised.
namespace olcache::bounds {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace detail {

inline double sq(double x) { return x * x; }

// t_0 = max{8/dmin^2, 32 alpha^2/dmin^2} * ln(arg)
inline double gap_threshold(double alpha, double delta_min, double log_arg) {
  const double base = std::max(8.0, 32.0 * sq(alpha)) / sq(delta_min);
  return base * std::log(log_arg);
}

}  // namespace detail

// Any-policy adversarial lower bound with the Theta(1/sqrt T) correction dropped.
inline double lb_adversarial_unrestricted(double c, double t) {
  return std::sqrt(c * t / (2.0 * std::numbers::pi));
}

inline double ub_lfu_stochastic(std::size_t l, std::size_t c, double delta_min) {
  if (!(delta_min > 0.0)) return kInfinity;
  const double cc = static_cast<double>(c);
  const double ll = static_cast<double>(l);
  return std::min(16.0 / detail::sq(delta_min), 4.0 * cc * (ll - cc) / delta_min);
}

// Lower bound for FTPL with a constant learning rate eta, L=2, C=1.
inline double lb_ftpl_constant_stochastic(double eta) {
  if (!(eta > 0.0)) return 0.0;
  return eta * std::exp(-detail::sq((1.0 + eta) / eta)) / 4.0;
}

// The adaptive and waiting bounds are derived assuming L >= 3.
inline bool stochastic_bound_domain_ok(std::size_t l) { return l >= 3; }

inline double stochastic_t0(std::size_t l, double alpha, double delta_min) {
  if (!(delta_min > 0.0)) return kInfinity;
  const double ll = static_cast<double>(l);
  return detail::gap_threshold(alpha, delta_min, ll * ll * ll);
}

inline double ub_ftpl_adaptive_stochastic(std::size_t l, std::size_t c, double d, double alpha,
                                          double delta_min) {
  if (!(delta_min > 0.0)) return kInfinity;
  const double t0 = stochastic_t0(l, alpha, delta_min);
  const double cc = static_cast<double>(c);
  return (1.0 + d * cc) * t0 +
         (1.0 + d / delta_min) * (8.0 / delta_min + 32.0 * detail::sq(alpha) / delta_min);
}

inline double ub_wftpl_stochastic(std::size_t l, std::size_t c, double d, double alpha,
                                  double delta_min, double u, double beta) {
  (void)c;
  if (!(delta_min > 0.0)) return kInfinity;
  const double ll = static_cast<double>(l);
  const double wait = d > 1.0 ? u * std::pow(std::log(d), 1.0 + beta) : 0.0;
  const double dm2 = detail::sq(delta_min);
  const double a2 = detail::sq(alpha);
  const double t_prime =
      std::max(detail::gap_threshold(alpha, delta_min, ll * ll * ll / 2.0), wait);
  const double tail = std::exp(-wait * dm2 / 8.0) * 8.0 / dm2 +
                      std::exp(-wait * dm2 / (32.0 * a2)) * 32.0 * a2 / dm2;
  return t_prime + 16.0 / delta_min + 64.0 * a2 / delta_min + 2.0 * ll * ll * ll * d * tail;
}

// Two-file lower bound for any policy under restricted switching; t_i is the
// sum of the periods before phase i.
inline double lb_restricted_stochastic(std::span<const std::size_t> periods, double delta,
                                       double a) {
  if (periods.empty() || !(delta > 0.0)) return 0.0;
  double value = static_cast<double>(periods[0]) * delta / 2.0;
  double t_i = static_cast<double>(periods[0]);
  for (std::size_t i = 1; i < periods.size(); ++i) {
    value += static_cast<double>(periods[i]) * delta / 4.0 *
             std::exp(-t_i * detail::sq(delta) / detail::sq(a));
    t_i += static_cast<double>(periods[i]);
  }
  return value;
}

inline double ub_ftpl_restricted_stochastic(std::span<const std::size_t> periods,
                                            const PopularityDistribution& dist, std::size_t c,
                                            double alpha) {
  if (periods.empty()) return 0.0;
  const auto mu = dist.sorted();
  const double a2 = detail::sq(alpha);
  double sum = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t k = c; k < mu.size(); ++k) {
      const double gap = mu[j] - mu[k];
      if (gap == 0.0) continue;
      const double g2 = detail::sq(gap);
      double t_i = static_cast<double>(periods[0]);
      for (std::size_t i = 1; i < periods.size(); ++i) {
        sum += static_cast<double>(periods[i]) * gap *
               (std::exp(-t_i * g2 / 8.0) + std::exp(-t_i * g2 / (32.0 * a2)));
        t_i += static_cast<double>(periods[i]);
      }
    }
  }
  return static_cast<double>(periods[0]) + 2.0 * sum;
}

inline double ub_ftpl_periodic_stochastic(std::size_t r, std::size_t l, std::size_t c,
                                          double alpha, double delta_min) {
  (void)c;
  if (!(delta_min > 0.0)) return kInfinity;
  const double ll = static_cast<double>(l);
  const double t0 =
      std::max(static_cast<double>(r), detail::gap_threshold(alpha, delta_min, ll * ll));
  return 1.0 + t0 + 2.0 * (8.0 / delta_min + 32.0 * detail::sq(alpha) / delta_min);
}

struct AdversarialLowerBound {
  double value = 0.0;
  bool meaningful = false;  // 4 max r_i <= sqrt(sum r_i^2)
};

inline AdversarialLowerBound lb_restricted_adversarial(std::span<const std::size_t> periods,
                                                       std::size_t c) {
  if (periods.empty()) return {};
  double s2 = 0.0;
  double s4 = 0.0;
  double rmax = 0.0;
  for (std::size_t r : periods) {
    const double rr = static_cast<double>(r);
    s2 += rr * rr;
    s4 += rr * rr * rr * rr;
    rmax = std::max(rmax, rr);
  }
  const double cc = static_cast<double>(c);
  const double value =
      0.5 * (0.15 * std::sqrt(cc * s2) * (1.0 - (cc - 1.0) * s4 / (2.0 * s2 * s2)) -
             0.6 * cc * rmax);
  return {value, 4.0 * rmax <= std::sqrt(s2)};
}

// r_0 = 1, so the first phase divides by sqrt(1).
inline double ub_ftpl_restricted_adversarial(std::span<const std::size_t> periods, std::size_t l,
                                             std::size_t c, double alpha, double t) {
  const double cc = static_cast<double>(c);
  const double root_log = std::sqrt(2.0 * std::log(static_cast<double>(l) / cc));
  double tail = 0.0;
  double before = 1.0;
  for (std::size_t r : periods) {
    const double rr = static_cast<double>(r);
    tail += rr * rr / (alpha * std::sqrt(before));
    before += rr;
  }
  return alpha * cc * root_log + alpha * cc * std::sqrt(t) * root_log +
         std::sqrt(2.0 / std::numbers::pi) * tail;
}

enum class Regime { sublinear, linear };

struct PeriodicLowerBound {
  double value = 0.0;
  Regime regime = Regime::sublinear;
};

// sqrt(CrT/2pi) for r < T (correction dropped); the linear regime r = T
// reports T/2 as its reference value.
inline PeriodicLowerBound lb_periodic_adversarial(std::size_t r, std::size_t c, std::size_t t) {
  if (r < 1 || t % r != 0) {
    throw Error(ErrorCode::divisibility, "r must divide T");
  }
  if (r == t) return {static_cast<double>(t) / 2.0, Regime::linear};
  return {std::sqrt(static_cast<double>(c) * static_cast<double>(r) * static_cast<double>(t) /
                    (2.0 * std::numbers::pi)),
          Regime::sublinear};
}

// Expected number of l1 cache changes for FTPL(alpha sqrt t) over T slots
// with N = L; multiply by D for a cost.
inline double ub_ftpl_adversarial_switches(std::size_t l, double alpha, double t) {
  const double n = static_cast<double>(l);
  const double e = std::numbers::e;
  const double pi = std::numbers::pi;
  const double k = 2.0 + std::sqrt(2.0 * e * std::log(2.0 * n));
  return 3.0 * std::sqrt(2.0) / (alpha * std::sqrt(pi)) * (std::sqrt(t) - 1.0) +
         (n - 1.0) * k / std::sqrt(e) * std::log(t) +
         3.0 * (n - 1.0) * k / (std::sqrt(2.0 * pi * e) * alpha) * (1.0 - 1.0 / std::sqrt(t));
}

// Reward-regret part of the W-FTPL adversarial bound with eta_t = alpha sqrt t.
// eta_{t'+1} is taken at the real-valued t'.
inline double ub_wftpl_adversarial(std::size_t l, std::size_t c, double alpha, std::size_t t,
                                   double t_prime) {
  const double n = static_cast<double>(l);
  const double cc = static_cast<double>(c);
  double inverse_rates = 0.0;
  for (std::size_t s = 1; s <= t; ++s) inverse_rates += 1.0 / (alpha * std::sqrt(static_cast<double>(s)));
  return 2.0 * t_prime + alpha * std::sqrt(t_prime + 1.0) * cc * std::sqrt(2.0 * std::log(n / cc)) +
         alpha * std::sqrt(static_cast<double>(t)) * cc *
             std::sqrt(2.0 * std::log(n * std::numbers::e / cc)) +
         std::sqrt(2.0 / std::numbers::pi) * inverse_rates;
}

}  // namespace olcache::bounds

#endif  // OLCACHE_BOUNDS_HPP
