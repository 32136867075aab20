#include <gtest/gtest.h>

#include <map>
#include <random>

#include "olcache/policies.hpp"
#include "oracle.hpp"

using namespace olcache;

namespace {

PolicyParams ftpl_params(RateKind kind = RateKind::adaptive_sqrt_t, double alpha = 1.0) {
  PolicyParams p;
  p.rate.kind = kind;
  p.rate.alpha = alpha;
  return p;
}

PolicyParams fixed_rate(double eta) {
  PolicyParams p;
  p.rate.kind = RateKind::fixed;
  p.rate.eta = eta;
  return p;
}

// Runs a policy over a request sequence and returns the cache at every slot.
std::vector<CacheSet> trajectory(CachePolicy policy, const std::vector<FileId>& requests,
                                 const UpdateSchedule& schedule, std::uint64_t* fetches = nullptr) {
  std::vector<CacheSet> out;
  for (Slot t = 1; t <= requests.size(); ++t) {
    const auto r = policy.step(t, schedule);
    if (fetches) *fetches += r.fetches;
    out.push_back(r.cache);
    policy.record_request(requests[t - 1]);
  }
  return out;
}

std::vector<FileId> random_requests(std::mt19937_64& rng, std::size_t l, std::size_t t) {
  std::vector<FileId> r(t);
  // Skewed draws so counts separate and ties still happen.
  for (auto& x : r) x = std::min<FileId>(l - 1, rng() % l * (rng() % 2));
  return r;
}

}  // namespace

TEST(LearningRate, Kinds) {
  EXPECT_DOUBLE_EQ(learning_rate({RateKind::adaptive_sqrt_t, 1.0}, 4, 100, 1), 2.0);
  EXPECT_DOUBLE_EQ(learning_rate({RateKind::constant_sqrt_horizon, 2.0}, 7, 100, 1), 20.0);
  EXPECT_DOUBLE_EQ(learning_rate({RateKind::adaptive_sqrt_t_over_c, 1.0}, 16, 100, 4), 2.0);
  EXPECT_DOUBLE_EQ(learning_rate({RateKind::fixed, 1.0, 0.25}, 16, 100, 4), 0.25);
  EXPECT_THROW((LearningRateSchedule{RateKind::adaptive_sqrt_t, 0.0}.validate()), Error);
  EXPECT_THROW((LearningRateSchedule{RateKind::fixed, 1.0, -1.0}.validate()), Error);
  EXPECT_EQ(parse_rate_kind("adaptive-sqrt-t-over-C"), RateKind::adaptive_sqrt_t_over_c);
  EXPECT_THROW(parse_rate_kind("sqrt"), Error);
}

TEST(WaitThreshold, Values) {
  EXPECT_LT(oracle::rel_err(wftpl_wait_threshold(5, 0.6, 30), oracle::hp("35.4471189033881355875")), 1e-12);
  EXPECT_LT(oracle::rel_err(wftpl_wait_threshold(5, 0.6, 30),
                            oracle::wait_threshold(5, oracle::hp("0.6"), 30)),
            1e-9);
  EXPECT_NEAR(wftpl_wait_threshold(1, 1, std::exp(1.0)), 1.0, 1e-15);
  EXPECT_EQ(wftpl_wait_threshold(5, 0.6, 0.5), 0.0);
  EXPECT_EQ(wftpl_wait_threshold(5, 0.6, 1.0), 0.0);
  EXPECT_THROW(WaitConfig::from_cost(0.0, 1.0, 10.0), Error);
}

TEST(Select, Lfu) {
  auto counts_of = [](std::vector<FileId> reqs, std::size_t l) {
    CountState s(l);
    for (FileId x : reqs) s.record(x);
    return s;
  };
  EXPECT_EQ(lfu_select(counts_of({0, 0, 0, 0, 0, 1, 1, 1, 2, 2}, 3), 2), CacheSet({0, 1}, 3));
  EXPECT_EQ(lfu_select(CountState(3), 1), CacheSet({0}, 3));
  EXPECT_EQ(lfu_select(counts_of({0, 1, 1, 1, 1, 2, 2, 2, 2}, 4), 2), CacheSet({1, 2}, 4));
}

TEST(Select, Ftpl) {
  CountState s(2);
  s.record(0);
  s.record(0);
  const std::vector<double> g1{0.5, -0.5};
  EXPECT_EQ(ftpl_select(s, g1, 2.0, 1), CacheSet({0}, 2));
  const std::vector<double> g2{-1.0, 3.0};
  EXPECT_EQ(ftpl_select(CountState(2), g2, 1.0, 1), CacheSet({1}, 2));
  EXPECT_EQ(ftpl_select(s, g2, 0.0, 1), lfu_select(s, 1));
  EXPECT_THROW(ftpl_select(s, std::vector<double>{1.0}, 1.0, 1), Error);
}

TEST(Select, ShiftInvariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t l = 3 + rng() % 6;
    CountState a(l), b(l);
    for (int i = 0; i < 30; ++i) {
      const FileId x = rng() % l;
      a.record(x);
      b.record(x);
    }
    for (int k = 0; k < 7; ++k) {
      for (FileId f = 0; f < l; ++f) b.record(f);  // +7 on every count
    }
    std::vector<double> g(l);
    for (double& x : g) x = normal(rng);
    EXPECT_EQ(lfu_select(a, 2), lfu_select(b, 2));
    EXPECT_EQ(ftpl_select(a, g, 1.7, 2), ftpl_select(b, g, 1.7, 2));
  }
}

TEST(CachePolicy, CreateShapes) {
  const ProblemConfig cfg{4, 2, 10, 0.0};
  const auto lfu = CachePolicy::create(PolicyKind::lfu, cfg, {}, 7);
  EXPECT_EQ(lfu.cache().size(), 2u);
  EXPECT_EQ(lfu.counts().counts().size(), 4u);
  const auto ftpl = CachePolicy::create(PolicyKind::ftpl, ProblemConfig{3, 1, 10, 0.0}, ftpl_params(), 1);
  EXPECT_EQ(ftpl.perturbation().size(), 3u);
  PolicyParams w = ftpl_params();
  w.wait = WaitConfig::from_cost(5, 0.6, 1.0);
  EXPECT_EQ(CachePolicy::create(PolicyKind::wftpl, ProblemConfig{3, 1, 10, 1.0}, w, 1).wait_threshold(), 0.0);
  EXPECT_THROW(CachePolicy::create(PolicyKind::wftpl, cfg, ftpl_params(), 1), Error);
  EXPECT_THROW(CachePolicy::create(PolicyKind::fixed, cfg, {}, 1), Error);
}

TEST(CachePolicy, SameSeedSamePerturbation) {
  const ProblemConfig cfg{10, 3, 10, 0.0};
  const auto a = CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), 42);
  const auto b = CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), 42);
  const auto c = CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), 43);
  EXPECT_TRUE(std::equal(a.perturbation().begin(), a.perturbation().end(), b.perturbation().begin()));
  EXPECT_FALSE(std::equal(a.perturbation().begin(), a.perturbation().end(), c.perturbation().begin()));
}

TEST(CachePolicy, InitialFillIsUniform) {
  // Each of the C(4,2)=6 subsets should come up roughly 1/6 of the time.
  std::map<std::vector<FileId>, int> seen;
  const ProblemConfig cfg{4, 2, 10, 0.0};
  const int n = 6000;
  for (int s = 0; s < n; ++s) {
    const auto p = CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), static_cast<std::uint64_t>(s));
    seen[std::vector<FileId>(p.cache().files().begin(), p.cache().files().end())]++;
  }
  EXPECT_EQ(seen.size(), 6u);
  for (const auto& [k, v] : seen) EXPECT_NEAR(v, n / 6.0, 6 * std::sqrt(n * (1.0 / 6) * (5.0 / 6)));
}

TEST(CachePolicy, StepGates) {
  const ProblemConfig cfg{2, 1, 4, 0.0};
  // LFU with counts (0,1) at t=3.
  auto lfu = CachePolicy::create(PolicyKind::lfu, ProblemConfig{2, 1, 5, 0.0}, {}, 0);
  const auto sched = unrestricted_schedule(5);
  lfu.step(1, sched);
  lfu.record_request(1);
  lfu.step(2, sched);
  lfu.record_request(1);
  EXPECT_EQ(lfu.step(3, sched).cache, CacheSet({1}, 2));

  // FTPL under schedule (2,2) never changes at t=2.
  auto ftpl = CachePolicy::create(PolicyKind::ftpl, cfg, fixed_rate(0.0), 0);
  const auto restricted = build_schedule({2, 2}, 4);
  const CacheSet first = ftpl.step(1, restricted).cache;
  ftpl.record_request(1);
  const auto r2 = ftpl.step(2, restricted);
  EXPECT_EQ(r2.cache, first);
  EXPECT_EQ(r2.fetches, 0u);
  EXPECT_THROW(ftpl.step(4, restricted), Error);
}

TEST(CachePolicy, WftplIdlesThroughWait) {
  const ProblemConfig cfg{10, 4, 200, 30.0};
  PolicyParams p;
  p.rate = {RateKind::adaptive_sqrt_t_over_c, 1.0};
  p.wait = WaitConfig::from_cost(5, 0.6, 30.0);
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto policy = CachePolicy::create(PolicyKind::wftpl, cfg, p, seed);
    const auto sched = unrestricted_schedule(cfg.horizon);
    const CacheSet initial = policy.cache();
    for (Slot t = 1; t <= 35; ++t) {
      const auto r = policy.step(t, sched);
      EXPECT_EQ(r.fetches, 0u);
      EXPECT_EQ(r.cache, initial);
      policy.record_request(rng() % 3);
    }
    EXPECT_EQ(policy.counts().slot(), 36u);  // counts kept moving during the wait
  }
}

TEST(Equivalence, ZeroRateFtplIsLfu) {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t l = 2 + rng() % 8, c = 1 + rng() % (l - 1), t = 1 + rng() % 200;
    const ProblemConfig cfg{l, c, t, 0.0};
    const auto reqs = random_requests(rng, l, t);
    const auto sched = unrestricted_schedule(t);
    const auto a = trajectory(CachePolicy::create(PolicyKind::lfu, cfg, {}, rng()), reqs, sched);
    const auto b = trajectory(CachePolicy::create(PolicyKind::ftpl, cfg, fixed_rate(0.0), rng()), reqs, sched);
    EXPECT_EQ(a, b);
  }
}

TEST(Equivalence, LfuMatchesFullSortReference) {
  std::mt19937_64 rng(22);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t l = 2 + rng() % 8, c = 1 + rng() % (l - 1), t = 1 + rng() % 200;
    const auto reqs = random_requests(rng, l, t);
    const auto got = trajectory(CachePolicy::create(PolicyKind::lfu, ProblemConfig{l, c, t, 0.0}, {}, 0),
                                reqs, unrestricted_schedule(t));
    const auto want = oracle::lfu_trajectory(reqs, l, c);
    for (std::size_t s = 0; s < t; ++s) {
      for (FileId f = 0; f < l; ++f) ASSERT_EQ(got[s].contains(f) ? 1 : 0, want[s][f]);
    }
  }
}

TEST(Equivalence, ZeroWaitWftplIsFtpl) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t l = 2 + rng() % 8, c = 1 + rng() % (l - 1), t = 1 + rng() % 200;
    const ProblemConfig cfg{l, c, t, 5.0};
    const auto reqs = random_requests(rng, l, t);
    const auto sched = unrestricted_schedule(t);
    const std::uint64_t seed = rng();
    PolicyParams w = ftpl_params();
    w.wait = WaitConfig::with_threshold(0.0);
    std::uint64_t fa = 0, fb = 0;
    const auto a = trajectory(CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), seed), reqs, sched, &fa);
    const auto b = trajectory(CachePolicy::create(PolicyKind::wftpl, cfg, w, seed), reqs, sched, &fb);
    EXPECT_EQ(a, b);
    EXPECT_EQ(fa, fb);
  }
}

TEST(Equivalence, UnitPeriodsMatchUnrestricted) {
  std::mt19937_64 rng(24);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t l = 2 + rng() % 8, c = 1 + rng() % (l - 1), t = 1 + rng() % 200;
    const ProblemConfig cfg{l, c, t, 1.0};
    const auto reqs = random_requests(rng, l, t);
    const std::uint64_t seed = rng();
    const auto a = trajectory(CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), seed), reqs,
                              unrestricted_schedule(t));
    const auto b = trajectory(CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), seed), reqs,
                              build_schedule(std::vector<std::size_t>(t, 1), t));
    EXPECT_EQ(a, b);
  }
}

TEST(CachePolicy, RestrictedScheduleOnlyChangesAtBoundaries) {
  std::mt19937_64 rng(25);
  const ProblemConfig cfg{6, 2, 60, 0.0};
  const auto sched = homogeneous_schedule(10, 60);
  for (int iter = 0; iter < 20; ++iter) {
    const auto reqs = random_requests(rng, 6, 60);
    const auto traj = trajectory(CachePolicy::create(PolicyKind::ftpl, cfg, ftpl_params(), rng()), reqs, sched);
    for (Slot t = 2; t <= 60; ++t) {
      if (!sched.is_update_slot(t)) EXPECT_EQ(traj[t - 1], traj[t - 2]);
    }
  }
}
