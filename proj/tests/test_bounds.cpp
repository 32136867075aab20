#include <gtest/gtest.h>

#include "olcache/bounds.hpp"
#include "oracle.hpp"

using namespace olcache;
namespace b = olcache::bounds;
using oracle::hp;
using oracle::rel_err;

// Each worked value is checked twice: the 50-digit oracle against a frozen
// literal, and the library against the oracle.
TEST(Bounds, Adversarial) {
  EXPECT_NEAR(b::lb_adversarial_unrestricted(1, 2 * std::numbers::pi), 1.0, 1e-15);
  const hp a = oracle::lb_adversarial(4, 8000);
  EXPECT_LT(rel_err(71.3649646461108445816, a), 1e-15);
  EXPECT_LT(rel_err(b::lb_adversarial_unrestricted(4, 8000), a), 1e-9);
  const hp c = oracle::lb_adversarial(25, 20000);
  EXPECT_LT(rel_err(282.094791773878143474, c), 1e-15);
  EXPECT_LT(rel_err(b::lb_adversarial_unrestricted(25, 20000), c), 1e-9);
}

TEST(Bounds, Lfu) {
  EXPECT_EQ(b::ub_lfu_stochastic(2, 1, 0.5), 8.0);
  EXPECT_NEAR(b::ub_lfu_stochastic(3, 1, 0.1), 80.0, 1e-12);
  EXPECT_TRUE(std::isinf(b::ub_lfu_stochastic(3, 1, 0.0)));
  EXPECT_LT(rel_err(b::ub_lfu_stochastic(10, 4, 1.0 / 32), oracle::ub_lfu(10, 4, hp(1) / 32)), 1e-12);
}

TEST(Bounds, FtplConstant) {
  const hp one = oracle::lb_ftpl_constant(1);
  EXPECT_LT(rel_err(0.00457890972218354507, one), 1e-15);
  EXPECT_LT(rel_err(b::lb_ftpl_constant_stochastic(1), one), 1e-9);
  const hp hundred = oracle::lb_ftpl_constant(100);
  EXPECT_LT(rel_err(9.01397206204938978, hundred), 1e-15);
  EXPECT_LT(rel_err(b::lb_ftpl_constant_stochastic(100), hundred), 1e-9);
  EXPECT_EQ(b::lb_ftpl_constant_stochastic(0), 0.0);
}

TEST(Bounds, FtplAdaptive) {
  const hp x = oracle::ub_ftpl_adaptive(3, 1, 0, 1, hp("0.1"));
  EXPECT_LT(rel_err(10946.6779712138530374, x), 1e-15);
  EXPECT_LT(rel_err(b::ub_ftpl_adaptive_stochastic(3, 1, 0, 1, 0.1), x), 1e-9);
  const hp y = oracle::ub_ftpl_adaptive(3, 1, 2, 1, hp("0.5"));
  EXPECT_LT(rel_err(1665.60135654566236449, y), 1e-15);
  EXPECT_LT(rel_err(b::ub_ftpl_adaptive_stochastic(3, 1, 2, 1, 0.5), y), 1e-9);
  EXPECT_TRUE(std::isinf(b::ub_ftpl_adaptive_stochastic(3, 1, 2, 1, 0.0)));
  EXPECT_FALSE(b::stochastic_bound_domain_ok(2));
  EXPECT_TRUE(b::stochastic_bound_domain_ok(3));
}

TEST(Bounds, Wftpl) {
  const double e = std::numbers::e;
  const hp x = oracle::ub_wftpl(3, oracle::e(), 1, hp("0.5"), 1, 1);
  EXPECT_LT(rel_err(23688.3665820706583652, x), 1e-15);
  EXPECT_LT(rel_err(b::ub_wftpl_stochastic(3, 1, e, 1, 0.5, 1, 1), x), 1e-9);
  // With D <= 1 the wait term drops out of the max.
  EXPECT_LT(rel_err(b::ub_wftpl_stochastic(4, 2, 0.5, 1.5, 0.2, 5, 0.6),
                    oracle::ub_wftpl(4, hp("0.5"), hp("1.5"), hp("0.2"), 5, hp("0.6"))),
            1e-9);
  EXPECT_TRUE(std::isinf(b::ub_wftpl_stochastic(3, 1, e, 1, 0.0, 1, 1)));
}

TEST(Bounds, RestrictedStochastic) {
  const std::vector<std::size_t> one{10};
  EXPECT_NEAR(b::lb_restricted_stochastic(one, 0.2, 0.4), 1.0, 1e-15);
  const std::vector<std::size_t> two{2, 2};
  const hp x = oracle::lb_restricted_stochastic({2, 2}, hp("0.2"), hp("0.4"));
  EXPECT_LT(rel_err(0.260653065971263357, x), 1e-15);
  EXPECT_LT(rel_err(b::lb_restricted_stochastic(two, 0.2, 0.4), x), 1e-9);
  EXPECT_EQ(b::lb_restricted_stochastic(two, 0.0, 0.4), 0.0);

  const PopularityDistribution mu({0.6, 0.4});
  const hp y = oracle::ub_ftpl_restricted_stochastic({2, 2}, {hp("0.6"), hp("0.4")}, 1, 1);
  EXPECT_LT(rel_err(3.59004236491730263, y), 1e-15);
  EXPECT_LT(rel_err(b::ub_ftpl_restricted_stochastic(two, mu, 1, 1), y), 1e-9);
  EXPECT_EQ(b::ub_ftpl_restricted_stochastic(one, mu, 1, 1), 10.0);
  EXPECT_EQ(b::ub_ftpl_restricted_stochastic(two, PopularityDistribution({0.5, 0.5}), 1, 1), 2.0);

  // Unsorted input is sorted before the gaps are formed.
  const PopularityDistribution shuffled({0.1, 0.3, 0.2, 0.4});
  const std::vector<std::size_t> p{3, 5, 2, 10};
  EXPECT_LT(rel_err(b::ub_ftpl_restricted_stochastic(p, shuffled, 2, 0.7),
                    oracle::ub_ftpl_restricted_stochastic({3, 5, 2, 10},
                                                          {hp("0.4"), hp("0.3"), hp("0.2"), hp("0.1")}, 2,
                                                          hp("0.7"))),
            1e-9);
}

TEST(Bounds, Periodic) {
  const hp x = oracle::ub_ftpl_periodic(10, 3, 1, hp("0.5"));
  EXPECT_LT(rel_err(442.244745899036081, x), 1e-15);
  EXPECT_LT(rel_err(b::ub_ftpl_periodic_stochastic(10, 3, 1, 1, 0.5), x), 1e-9);
  EXPECT_EQ(b::ub_ftpl_periodic_stochastic(100000, 3, 1, 1, 0.5), 1.0 + 100000 + 2 * (16.0 + 64.0));
  EXPECT_TRUE(std::isinf(b::ub_ftpl_periodic_stochastic(10, 3, 1, 1, 0.0)));
}

TEST(Bounds, RestrictedAdversarial) {
  const std::vector<std::size_t> ones(100, 1);
  const auto r = b::lb_restricted_adversarial(ones, 1);
  EXPECT_NEAR(r.value, 0.45, 1e-12);
  EXPECT_TRUE(r.meaningful);
  EXPECT_LT(rel_err(r.value, oracle::lb_restricted_adversarial(std::vector<int>(100, 1), 1)), 1e-9);
  const std::vector<std::size_t> uneven{500, 250, 250};
  EXPECT_FALSE(b::lb_restricted_adversarial(uneven, 1).meaningful);
  const std::vector<std::size_t> single{1000};
  const auto s = b::lb_restricted_adversarial(single, 1);
  EXPECT_LT(s.value, 0.0);
  EXPECT_FALSE(s.meaningful);
  const std::vector<std::size_t> mixed{5, 9, 2, 14, 3};
  EXPECT_LT(rel_err(b::lb_restricted_adversarial(mixed, 3).value,
                    oracle::lb_restricted_adversarial({5, 9, 2, 14, 3}, 3)),
            1e-9);
}

// 4 max r <= sqrt(sum r^2) reads r <= T/16 for r_i = r.
TEST(Bounds, MeaningfulnessMatchesPeriodRule) {
  for (std::size_t t : {3200u, 6400u, 32000u}) {
    for (std::size_t r : {t / 32, t / 16, t / 8}) {
      const std::vector<std::size_t> periods(t / r, r);
      EXPECT_EQ(b::lb_restricted_adversarial(periods, 2).meaningful, r <= t / 16) << t << " " << r;
    }
  }
}

TEST(Bounds, FtplRestrictedAdversarial) {
  const std::vector<std::size_t> two{1, 1};
  const hp x = oracle::ub_ftpl_restricted_adversarial({1, 1}, 2, 1, 1, 2);
  EXPECT_NEAR(static_cast<double>(x), 4.2046, 1e-4);
  EXPECT_LT(rel_err(b::ub_ftpl_restricted_adversarial(two, 2, 1, 1, 2), x), 1e-9);
  const std::vector<std::size_t> single{50};
  const double root = std::sqrt(2 * std::log(2.0));
  EXPECT_NEAR(b::ub_ftpl_restricted_adversarial(single, 2, 1, 2.0, 50),
              2 * root + 2 * std::sqrt(50.0) * root + std::sqrt(2 / std::numbers::pi) * 2500 / 2.0, 1e-9);
  const std::vector<std::size_t> p{4, 6, 10};
  EXPECT_LT(rel_err(b::ub_ftpl_restricted_adversarial(p, 10, 3, 0.5, 20),
                    oracle::ub_ftpl_restricted_adversarial({4, 6, 10}, 10, 3, hp("0.5"), 20)),
            1e-9);
}

TEST(Bounds, PeriodicAdversarial) {
  const auto r = b::lb_periodic_adversarial(4, 1, 100);
  EXPECT_LT(rel_err(7.97884560802865356, oracle::lb_periodic(1, 4, 100)), 1e-15);
  EXPECT_LT(rel_err(r.value, oracle::lb_periodic(1, 4, 100)), 1e-9);
  EXPECT_EQ(r.regime, b::Regime::sublinear);
  EXPECT_EQ(b::lb_periodic_adversarial(100, 1, 100).regime, b::Regime::linear);
  for (std::size_t t : {10u, 1000u, 123457u}) {
    EXPECT_NEAR(b::lb_periodic_adversarial(1, 3, t).value,
                b::lb_adversarial_unrestricted(3, static_cast<double>(t)),
                1e-12 * b::lb_adversarial_unrestricted(3, static_cast<double>(t)));
  }
  EXPECT_THROW(b::lb_periodic_adversarial(7, 1, 100), Error);
}

TEST(Bounds, Switches) {
  EXPECT_EQ(b::ub_ftpl_adversarial_switches(5, 1, 1), 0.0);
  const hp x = oracle::ub_switches(2, 1, 4);
  EXPECT_LT(rel_err(8.10598115372442715, x), 1e-15);
  EXPECT_LT(rel_err(b::ub_ftpl_adversarial_switches(2, 1, 4), x), 1e-9);
  // Doubling alpha halves the first and third terms only.
  const double t = 400, n = 6;
  const double a1 = b::ub_ftpl_adversarial_switches(6, 1, t), a2 = b::ub_ftpl_adversarial_switches(6, 2, t);
  const double k = 2 + std::sqrt(2 * std::numbers::e * std::log(2 * n));
  const double middle = (n - 1) * k / std::sqrt(std::numbers::e) * std::log(t);
  EXPECT_NEAR(a2 - middle, (a1 - middle) / 2, 1e-9);
}

TEST(Bounds, WftplAdversarial) {
  const double l2 = std::log(2.0);
  const double want = std::sqrt(2 * l2) + std::sqrt(2 * (l2 + 1)) + std::sqrt(2 / std::numbers::pi);
  EXPECT_NEAR(want, 3.815483258731785, 1e-12);
  EXPECT_NEAR(b::ub_wftpl_adversarial(2, 1, 1, 1, 0), want, 1e-12);
  EXPECT_LT(rel_err(b::ub_wftpl_adversarial(2, 1, 1, 1, 0), oracle::ub_wftpl_adversarial(2, 1, 1, 1, 0)), 1e-9);
  EXPECT_LT(rel_err(b::ub_wftpl_adversarial(10, 4, 0.5, 2000, 35.447),
                    oracle::ub_wftpl_adversarial(10, 4, hp("0.5"), 2000, hp("35.447"))),
            1e-9);
  EXPECT_GT(b::ub_wftpl_adversarial(2, 1, 1, 1000, 1000), 2000.0);
}

TEST(Bounds, MonotoneInGap) {
  double prev[4] = {b::kInfinity, b::kInfinity, b::kInfinity, b::kInfinity};
  for (int i = 1; i <= 10; ++i) {
    const double dm = 0.05 * i;
    const double now[4] = {b::ub_ftpl_adaptive_stochastic(10, 4, 5, 1, dm),
                           b::ub_wftpl_stochastic(10, 4, 30, 1, dm, 5, 0.6),
                           b::ub_lfu_stochastic(10, 4, dm), b::ub_ftpl_periodic_stochastic(50, 10, 4, 1, dm)};
    for (int k = 0; k < 4; ++k) {
      EXPECT_LE(now[k], prev[k]) << k << " at " << dm;
      prev[k] = now[k];
    }
  }
}

TEST(Bounds, Deterministic) {
  EXPECT_EQ(b::ub_wftpl_stochastic(10, 4, 30, 1, 0.03, 5, 0.6), b::ub_wftpl_stochastic(10, 4, 30, 1, 0.03, 5, 0.6));
}
