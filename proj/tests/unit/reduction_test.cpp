#include <gtest/gtest.h>

#include <random>

#include "stablex/assignment.hpp"
#include "stablex/oracle/oracle.hpp"
#include "stablex/reduction.hpp"
#include "stablex/topk.hpp"
#include "support.hpp"

namespace stablex {
namespace {

const KeyedValues kX{{1, 1}, {2, 4}, {3, 7}, {4, 5}};
const OutputSet kS{1, 2};

std::vector<Key> keys_of(const KeyedValues& x) {
  std::vector<Key> out;
  for (const Entry& e : x) out.push_back(e.key);
  return out;
}

TEST(AdjustedInput, AdditiveForm) {
  KeyedValues y = adjusted_input(topk_problem(2), kX, kS, 2.0);
  std::vector<double> want{3, 6, 7, 5};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(y[i].value, want[i]);
  KeyedValues same = adjusted_input(topk_problem(2), kX, kS, 0.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(same[i].value, kX[i].value);
}

TEST(AdjustedInput, SubtractiveWithCosts) {
  AdditiveProblem problem = topk_problem(1);
  problem.costs = {{1, 1.0}, {2, 2.0}, {3, 1.0}, {4, 1.0}};
  EXPECT_FALSE(problem.uniform());
  KeyedValues y = adjusted_input(problem, kX, {1}, 1.0, AdjustForm::kSubtractive);
  std::vector<double> want{1, 2, 6, 4};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(y[i].value, want[i]);
  // Non-uniform costs pick the subtractive form automatically.
  KeyedValues y2 = adjusted_input(problem, kX, {1}, 1.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(y2[i].value, want[i]);
}

TEST(AlphaStable, TopKExample) {
  AdditiveProblem p = topk_problem(2);
  EXPECT_EQ(alpha_stable(p, kX, kS, 7.0), (OutputSet{1, 2}));
  EXPECT_EQ(alpha_stable(p, kX, kS, 6.0), (OutputSet{2, 3}));
  EXPECT_EQ(alpha_stable(p, kX, kS, 3.0), (OutputSet{2, 3}));
  EXPECT_EQ(alpha_stable(p, kX, kS, 1.0), (OutputSet{3, 4}));
  EXPECT_EQ(alpha_stable(p, kX, kS, 0.5), (OutputSet{3, 4}));
  EXPECT_EQ(alpha_stable(p, kX, kS, 0.0), (OutputSet{3, 4}));
}

TEST(AlphaStable, ZeroPriceNeverMakesZeroGainChange) {
  KeyedValues x{{1, 2}, {2, 5}, {3, 5}};
  EXPECT_EQ(alpha_stable(topk_problem(1), x, {3}, 0.0), OutputSet{3});
}

TEST(AlphaStable, MatchesExhaustiveSearch) {
  std::mt19937_64 g(41);
  for (int rep = 0; rep < 300; ++rep) {
    std::size_t n = testing::pick(g, 2, 10);
    std::size_t k = testing::pick(g, 1, std::min<std::size_t>(4, n));
    KeyedValues x = testing::random_values(g, n);
    OutputSet s = testing::random_subset(g, n, k);
    double a = testing::uniform(g, 0.0, 8.0);
    AdditiveProblem p = topk_problem(k);
    OutputSet got = alpha_stable(p, x, s, a);
    oracle::SetChoice ref = oracle::exhaustive_set_oracle(oracle::k_subsets(keys_of(x), k), x, s, a);
    EXPECT_EQ(got, ref.set) << "rep " << rep;
    EXPECT_NEAR(stable_objective(p, x, got, s, a), ref.objective, 1e-9);
  }
}

TEST(AlphaStable, GeneralCostsMatchBruteForce) {
  std::mt19937_64 g(42);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = testing::pick(g, 2, 8);
    std::size_t k = testing::pick(g, 1, std::min<std::size_t>(3, n));
    KeyedValues x = testing::random_values(g, n);
    OutputSet s = testing::random_subset(g, n, k);
    AdditiveProblem p = topk_problem(k);
    for (Key i = 0; i < n; ++i) p.costs[i] = testing::uniform(g, 0.2, 3.0);
    double a = testing::uniform(g, 0.0, 5.0);
    OutputSet got = alpha_stable(p, x, s, a);
    double best = -kInfinity;
    for (const OutputSet& c : oracle::k_subsets(keys_of(x), k)) {
      double v = 0.0;
      for (Key i : c) v += x[i].value - (contains(s, i) ? 0.0 : a * p.costs[i]);
      best = std::max(best, v);
    }
    EXPECT_NEAR(stable_objective(p, x, got, s, a), best, 1e-9);
  }
}

double envelope_brute(const KeyedValues& x, const OutputSet& s, std::size_t k, double a) {
  double best = -kInfinity;
  for (const OutputSet& c : oracle::k_subsets(keys_of(x), k)) {
    best = std::max(best, set_value(x, c) + a * static_cast<double>(intersection_size(c, s)));
  }
  return best;
}

TEST(ParametricEnvelope, TopKExample) {
  LinearEnvelope env = parametric_envelope(topk_problem(2), kX, kS);
  ASSERT_EQ(env.size(), 3u);
  EXPECT_EQ(env.pieces()[0].slope, 0u);
  EXPECT_DOUBLE_EQ(env.pieces()[0].intercept, 12.0);
  EXPECT_EQ(env.pieces()[1].slope, 1u);
  EXPECT_DOUBLE_EQ(env.pieces()[1].intercept, 11.0);
  EXPECT_EQ(env.pieces()[2].slope, 2u);
  EXPECT_DOUBLE_EQ(env.pieces()[2].intercept, 5.0);
  EXPECT_EQ(env.breakpoints(), (std::vector<double>{1.0, 6.0}));
  EXPECT_TRUE(env.check().ok);
  // At a breakpoint the more stable piece is reported.
  EXPECT_EQ(env.piece_at(1.0).slope, 1u);
  TradeoffCurve c = env.tradeoff();
  EXPECT_TRUE(c.check().ok) << c.check().message;
  EXPECT_EQ(c.points().front().changeout, 0.0);
  EXPECT_EQ(c.points().back().changeout, 2.0);
}

TEST(ParametricEnvelope, RandomTopKMatchesBruteForce) {
  std::mt19937_64 g(43);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = testing::pick(g, 2, 9);
    std::size_t k = testing::pick(g, 1, std::min<std::size_t>(4, n));
    KeyedValues x = testing::random_values(g, n);
    OutputSet s = testing::random_subset(g, n, k);
    LinearEnvelope env = parametric_envelope(topk_problem(k), x, s);
    EXPECT_TRUE(env.check().ok) << env.check().message;
    EXPECT_LE(env.size(), k + 1);
    if (k == 1) EXPECT_LE(env.size(), 2u);
    for (int t = 0; t < 100; ++t) {
      double a = testing::uniform(g, 0.0, 20.0);
      EXPECT_NEAR(env(a), envelope_brute(x, s, k, a), 1e-9);
    }
  }
}

TEST(DeltaStable, TopKExample) {
  AdditiveProblem p = topk_problem(2);
  OutputSet d1 = delta_stable(p, kX, kS, 1);
  EXPECT_EQ(d1, (OutputSet{2, 3}));
  EXPECT_DOUBLE_EQ(set_value(kX, d1), 11.0);
  EXPECT_EQ(delta_stable(p, kX, kS, 0), kS);
  EXPECT_EQ(delta_stable(p, kX, kS, 2), (OutputSet{3, 4}));
}

TEST(DeltaStable, ConcaveAndExactForTopK) {
  std::mt19937_64 g(44);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = testing::pick(g, 2, 9);
    std::size_t k = testing::pick(g, 1, std::min<std::size_t>(4, n));
    KeyedValues x = testing::random_values(g, n);
    OutputSet s = testing::random_subset(g, n, k);
    AdditiveProblem p = topk_problem(k);
    std::vector<double> fit;
    for (std::size_t D = 0; D <= k; ++D) {
      OutputSet got = delta_stable(p, x, s, D);
      EXPECT_LE(set_difference_size(got, s), D);
      double best = -kInfinity;
      for (const OutputSet& c : oracle::k_subsets(keys_of(x), k)) {
        if (set_difference_size(c, s) <= D) best = std::max(best, set_value(x, c));
      }
      EXPECT_NEAR(set_value(x, got), best, 1e-9);
      fit.push_back(set_value(x, got));
    }
    for (std::size_t D = 1; D < fit.size(); ++D) {
      EXPECT_GE(fit[D], fit[D - 1] - 1e-12);
      if (D >= 2) EXPECT_LE(fit[D] - fit[D - 1], fit[D - 1] - fit[D - 2] + 1e-9);
    }
  }
}

TEST(DynamicBridge, NoUpdatesGivesInitialOutput) {
  // The bridge starts from the best fit of x.
  DynamicBridge bridge(std::make_unique<TopKDynamicOracle>(kX, 2, TiePolicy::kPreferChange), kX, 3.0);
  EXPECT_EQ(bridge.current(), (OutputSet{3, 4}));
}

TEST(DynamicBridge, TopKStreamsMatchBatch) {
  std::mt19937_64 g(45);
  for (int stream = 0; stream < 5; ++stream) {
    std::size_t n = testing::pick(g, 4, 30);
    std::size_t k = testing::pick(g, 1, n - 1);
    double a = testing::uniform(g, 0.0, 4.0);
    KeyedValues x = testing::random_values(g, n);
    AdditiveProblem p = topk_problem(k);
    OutputSet s0 = top_k(x, k);
    DynamicBridge bridge(
        std::make_unique<TopKDynamicOracle>(x, k, TiePolicy::kPreferChange),
        x, a);
    ASSERT_EQ(bridge.current(), s0);
    for (int t = 0; t < 1000; ++t) {
      OutputSet before = bridge.current();
      Key i = testing::pick(g, 0, n - 1);
      x[i].value = testing::uniform(g, -5.0, 10.0);
      std::size_t entered = bridge.update(i, x[i].value);
      OutputSet want = alpha_stable(p, x, before, a);
      ASSERT_EQ(bridge.current(), want) << "stream " << stream << " step " << t;
      EXPECT_EQ(entered, set_difference_size(want, before));
      EXPECT_LE(entered, 1u);
      EXPECT_EQ(bridge.value(i), x[i].value);
    }
  }
}

// Recomputes a maximum assignment on every change.
class RecomputeAssignment : public DynamicOracle {
 public:
  RecomputeAssignment(std::size_t n, KeyedValues y) : problem_(assignment_problem(n)), y_(std::move(y)) {
    current_ = problem_.opt(y_, {}, TiePolicy::kPreferStable);
  }
  void set_value(Key key, double y) override {
    for (Entry& e : y_) {
      if (e.key == key) e.value = y;
    }
    current_ = problem_.opt(y_, current_, TiePolicy::kPreferStable);
  }
  OutputSet current() const override { return current_; }

 private:
  AdditiveProblem problem_;
  KeyedValues y_;
  OutputSet current_;
};

TEST(DynamicBridge, AssignmentStreamsMatchBatch) {
  std::mt19937_64 g(46);
  for (int stream = 0; stream < 20; ++stream) {
    std::size_t n = testing::pick(g, 2, 6);
    double a = testing::uniform(g, 0.0, 3.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& r : rows) {
      for (double& v : r) v = testing::uniform(g, 0.0, 10.0);
    }
    KeyedValues x = BipartiteWeights(rows).edge_values();
    AdditiveProblem p = assignment_problem(n);
    DynamicBridge bridge(std::make_unique<RecomputeAssignment>(n, x), x, a);
    for (int t = 0; t < 50; ++t) {
      OutputSet before = bridge.current();
      Key e = testing::pick(g, 0, n * n - 1);
      x[e].value = testing::uniform(g, 0.0, 10.0);
      bridge.update(e, x[e].value);
      ASSERT_EQ(bridge.current(), alpha_stable(p, x, before, a)) << "stream " << stream;
    }
  }
}

}  // namespace
}  // namespace stablex
