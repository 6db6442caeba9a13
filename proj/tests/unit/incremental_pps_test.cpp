#include <gtest/gtest.h>

#include <random>

#include "stablex/incremental_pps.hpp"
#include "stablex/pps.hpp"
#include "support.hpp"

namespace stablex {
namespace {

void expect_same(const PpsDistribution& got, const PpsDistribution& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got.key(i), want.key(i));
    EXPECT_NEAR(got.prob(i), want.prob(i), tol) << "key " << got.key(i);
  }
}

void expect_rest_invariant(const StableState& s) {
  double lo = s.tau_lo(), hi = s.tau_hi();
  if (std::isinf(lo)) return;
  EXPECT_LE(lo * lo - hi * hi, s.price() + 1e-9 * std::max(1.0, lo * lo));
}

// Weights for n keys with at least ceil(k) + 1 positive entries.
std::vector<double> random_weights(std::mt19937_64& g, std::size_t n) {
  std::vector<double> w(n);
  for (double& x : w) x = testing::pick(g, 0, 5) == 0 ? 0.0 : testing::uniform(g, 0.1, 20.0);
  w[0] = std::max(w[0], 1.0);
  w[1] = std::max(w[1], 1.0);
  return w;
}

TEST(StableStateBuild, SixEntry) {
  StableState s = StableState::build(WeightVector::from_values({2, 4, 1, 5, 6, 0}), 2.0, 0.0);
  WeightVector w = WeightVector::from_values({2, 4, 1, 5, 6, 0});
  expect_same(s.current_distribution().aligned_to(w),
              PpsDistribution::from_values({2.0 / 9, 4.0 / 9, 1.0 / 9, 5.0 / 9, 2.0 / 3, 0.0}), 1e-12);
  EXPECT_NEAR(s.tau_lo(), 9.0, 1e-9);
  EXPECT_NEAR(s.tau_hi(), 9.0, 1e-9);
}

TEST(StableStateBuild, SingleSaturatedEntry) {
  StableState s = StableState::build(WeightVector::from_values({3.0}), 1.0, 0.5);
  EXPECT_DOUBLE_EQ(s.probability(0), 1.0);
  EXPECT_EQ(s.current_sample(), SampleSet{0});
}

TEST(StableStateBuild, MatchesBatchPps) {
  std::mt19937_64 g(31);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = testing::pick(g, 2, 40);
    std::vector<double> w = random_weights(g, n);
    std::size_t positive = 0;
    for (double x : w) positive += x > 0;
    double k = testing::uniform(g, 0.5, static_cast<double>(positive));
    WeightVector wv = WeightVector::from_values(w);
    StableState s = StableState::build(wv, k, testing::uniform(g, 0, 10));
    expect_same(s.current_distribution().aligned_to(wv), pps_probabilities(wv, k).dist, 1e-9);
    PrnTable table(0x5eed);
    EXPECT_EQ(s.current_sample(), prn_sample(s.current_distribution(), table));
  }
}

TEST(StableStateUpdate, ZeroPriceTracksPps) {
  std::mt19937_64 g(32);
  std::size_t n = 30;
  std::vector<double> w = random_weights(g, n);
  double k = 4.5;
  StableState s = StableState::build(WeightVector::from_values(w), k, 0.0);
  for (int t = 0; t < 1000; ++t) {
    std::size_t i = testing::pick(g, 0, n - 1);
    double nw = testing::pick(g, 0, 6) == 0 ? 0.0 : testing::uniform(g, 0.1, 30.0);
    std::size_t positive = 0;
    for (std::size_t j = 0; j < n; ++j) positive += (j == i ? nw : w[j]) > 0;
    if (positive < 6) continue;
    w[i] = nw;
    s.update_weight(i, nw);
    WeightVector wv = WeightVector::from_values(w);
    expect_same(s.current_distribution().aligned_to(wv), pps_probabilities(wv, k).dist, 1e-7);
    expect_rest_invariant(s);
  }
}

TEST(StableStateUpdate, MatchesBatchAlphaOpt) {
  std::mt19937_64 g(33);
  for (int stream = 0; stream < 100; ++stream) {
    std::size_t n = testing::pick(g, 3, 64);
    std::vector<double> w = random_weights(g, n);
    double k = testing::uniform(g, 0.5, 2.0);
    double a = std::exp(testing::uniform(g, -3.0, 6.0));
    StableState s = StableState::build(WeightVector::from_values(w), k, a);
    for (int t = 0; t < 20; ++t) {
      PpsDistribution before = s.current_distribution();
      std::size_t i = testing::pick(g, 0, n - 1);
      double nw = testing::pick(g, 0, 5) == 0 ? 0.0 : testing::uniform(g, 0.1, 20.0);
      if (i < 2) nw = std::max(nw, 0.5);
      w[i] = nw;
      ChangeReport r = s.update_weight(i, nw);
      WeightVector wv = WeightVector::from_values(w);
      PpsDistribution want = alpha_opt(wv, before.aligned_to(wv), a).dist;
      PpsDistribution got = s.current_distribution().aligned_to(wv);
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_NEAR(got.prob(j), want.prob(j), 1e-7) << "stream " << stream << " step " << t;
      }
      double l1 = 0.0;
      for (const ProbabilityChange& c : r.changes) l1 += std::abs(c.after - c.before);
      EXPECT_NEAR(l1, r.l1, 1e-9);
      EXPECT_NEAR(r.l1, l1_distance(before.aligned_to(wv), got), 1e-7);
      expect_rest_invariant(s);
    }
  }
}

TEST(StableStateUpdate, HighPriceKeepsOtherEntries) {
  WeightVector w = WeightVector::from_values({2, 4, 1, 5, 6, 3});
  StableState s = StableState::build(w, 2.0, 1e9);
  PpsDistribution before = s.current_distribution();
  ChangeReport r = s.update_weight(2, 1.5);
  EXPECT_FALSE(r.repaired);
  EXPECT_EQ(r.l1, 0.0);
  expect_same(s.current_distribution(), before, 0.0);
}

TEST(StableStateUpdate, SampleFollowsPrnRule) {
  std::mt19937_64 g(34);
  std::vector<double> w = random_weights(g, 40);
  StableState s = StableState::build(WeightVector::from_values(w), 5.0, 2.0, 99);
  for (int t = 0; t < 300; ++t) {
    SampleSet before = s.current_sample();
    std::size_t i = testing::pick(g, 2, 39);
    ChangeReport r = s.update_weight(i, testing::uniform(g, 0.1, 25.0));
    SampleSet after = s.current_sample();
    PrnTable table(99);
    EXPECT_EQ(after, prn_sample(s.current_distribution(), table));
    for (Key k : r.inserted) {
      EXPECT_FALSE(contains(before, k));
      EXPECT_TRUE(contains(after, k));
    }
    for (Key k : r.removed) {
      EXPECT_TRUE(contains(before, k));
      EXPECT_FALSE(contains(after, k));
    }
    EXPECT_EQ(r.inserted.size() + r.removed.size(),
              set_difference_size(after, before) + set_difference_size(before, after));
  }
}

TEST(StableStateUpdate, NewKeysAndErrors) {
  StableState s = StableState::build(WeightVector::from_values({2, 4, 1}), 1.0, 0.0);
  s.update_weight(10, 8.0);
  EXPECT_GT(s.probability(10), 0.0);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_THROW(s.update_weight(1, -1.0), DomainError);
  StableState tight = StableState::build(WeightVector::from_values({2, 4}), 2.0, 0.0);
  EXPECT_THROW(tight.update_weight(0, 0.0), InfeasibleError);
}

TEST(StableStateUpdate, WorkIsLogged) {
  std::mt19937_64 g(35);
  std::vector<double> w = random_weights(g, 200);
  StableState s = StableState::build(WeightVector::from_values(w), 10.0, 1.0);
  std::uint64_t before = s.total_work();
  for (int t = 0; t < 100; ++t) s.update_weight(testing::pick(g, 2, 199), testing::uniform(g, 0.1, 20));
  EXPECT_GT(s.total_work(), before);
}

}  // namespace
}  // namespace stablex
