#include <gtest/gtest.h>

#include <random>

#include "stablex/oracle/oracle.hpp"
#include "stablex/topk.hpp"
#include "support.hpp"

namespace stablex {
namespace {

const KeyedValues kX{{1, 1}, {2, 4}, {3, 7}, {4, 5}};
const KeyedValues kZ{{1, 2}, {2, 3}, {3, 8}, {4, 4}};
const OutputSet kS{1, 2};

std::vector<Key> keys_of(const KeyedValues& x) {
  std::vector<Key> out;
  for (const Entry& e : x) out.push_back(e.key);
  return out;
}

std::vector<double> gains(const SwapPlan& plan) {
  std::vector<double> out;
  for (const Swap& s : plan.swaps) out.push_back(s.gain);
  return out;
}

TEST(SwapPlan, WorkedExample) {
  SwapPlan plan = swap_plan(kX, kS);
  ASSERT_EQ(plan.swaps.size(), 2u);
  EXPECT_EQ(plan.swaps[0].out, 1u);
  EXPECT_EQ(plan.swaps[0].in, 3u);
  EXPECT_EQ(plan.swaps[0].gain, 6.0);
  EXPECT_EQ(plan.swaps[1].out, 2u);
  EXPECT_EQ(plan.swaps[1].in, 4u);
  EXPECT_EQ(plan.swaps[1].gain, 1.0);
}

TEST(SwapPlan, AlreadyTopK) {
  EXPECT_TRUE(swap_plan(kX, {3, 4}).swaps.empty());
}

TEST(SwapPlan, RejectsOversizedSet) {
  EXPECT_THROW(swap_plan({{1, 1.0}}, {1, 2}), ContractViolation);
}

TEST(PsiTransform, SquareGains) {
  KeyedValues x2 = psi_transform(kX, PsiSpec::power(2));
  EXPECT_EQ(x2[2].value, 49.0);
  EXPECT_EQ(gains(swap_plan(x2, kS)), (std::vector<double>{48, 9}));
  EXPECT_EQ(gains(swap_plan(psi_transform(kZ, PsiSpec::power(2)), kS)), (std::vector<double>{60, 7}));
  KeyedValues same = psi_transform(kX, PsiSpec::identity());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(same[i].value, kX[i].value);
}

TEST(PsiTransform, Table) {
  PsiSpec t;
  t.kind = PsiSpec::Kind::kTable;
  t.table = {{0, 0}, {2, 10}, {4, 11}};
  KeyedValues y = psi_transform({{0, -1}, {1, 1}, {2, 3}, {3, 9}}, t);
  EXPECT_EQ(y[0].value, 0.0);
  EXPECT_EQ(y[1].value, 5.0);
  EXPECT_EQ(y[2].value, 10.5);
  EXPECT_EQ(y[3].value, 11.0);
  t.table = {{0, 1}, {1, 0}};
  EXPECT_THROW(psi_transform(kX, t), ContractViolation);
}

TEST(TopKAlphaStable, MatchesExhaustiveSearch) {
  std::mt19937_64 g(51);
  for (int rep = 0; rep < 500; ++rep) {
    std::size_t n = testing::pick(g, 2, 10);
    std::size_t k = testing::pick(g, 1, std::min<std::size_t>(4, n));
    KeyedValues x = testing::random_values(g, n);
    OutputSet s = testing::random_subset(g, n, k);
    double a = testing::uniform(g, 0.0, 8.0);
    oracle::SetChoice ref = oracle::exhaustive_set_oracle(oracle::k_subsets(keys_of(x), k), x, s, a);
    EXPECT_EQ(topk_alpha_stable(x, s, a), ref.set) << "rep " << rep;
  }
}

TEST(TopKTradeoff, WorkedExample) {
  TopKTradeoff t = topk_tradeoff(kX, kS);
  const auto& pts = t.curve.points();
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].changeout, 0.0);
  EXPECT_EQ(pts[0].fitness, 5.0);
  EXPECT_EQ(pts[0].multiplier, 6.0);
  EXPECT_EQ(pts[1].fitness, 11.0);
  EXPECT_EQ(pts[1].multiplier, 1.0);
  EXPECT_EQ(pts[2].fitness, 12.0);
  EXPECT_EQ(pts[2].multiplier, 0.0);
  EXPECT_TRUE(t.curve.check().ok);
}

TEST(TopKTradeoff, MembershipMonotoneInPrice) {
  std::mt19937_64 g(52);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = testing::pick(g, 2, 20);
    std::size_t k = testing::pick(g, 1, n);
    KeyedValues x = testing::random_values(g, n);
    OutputSet s = testing::random_subset(g, n, k);
    TopKTradeoff t = topk_tradeoff(x, s);
    EXPECT_TRUE(t.curve.check().ok) << t.curve.check().message;
    OutputSet best = top_k(x, k);
    std::vector<int> flips(n, 0);
    OutputSet last = s;
    for (int i = 400; i >= 0; --i) {
      OutputSet cur = topk_alpha_stable(x, s, 15.0 * i / 400.0);
      for (Key key = 0; key < n; ++key) {
        if (contains(cur, key) != contains(last, key)) {
          ++flips[key];
          // Sweeping down, only top-k keys enter and only keys of s leave.
          EXPECT_TRUE(contains(cur, key) ? contains(best, key) : contains(s, key));
        }
      }
      last = cur;
    }
    for (int f : flips) EXPECT_LE(f, 1);
  }
}

TEST(TopKState, SingleSwapWhenRaisedPastPrice) {
  TopKState st({{0, 1.0}, {1, 3.0}}, 1, 2.0);
  EXPECT_EQ(st.current_set(), OutputSet{1});
  EXPECT_FALSE(st.update(0, 4.5).has_value());  // gain 1.5 < 2
  std::optional<Swap> s = st.update(0, 5.0);     // gain 2 >= 2
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->out, 1u);
  EXPECT_EQ(s->in, 0u);
  EXPECT_EQ(st.current_set(), OutputSet{0});
}

TEST(TopKState, UnknownKeyJoinsOutside) {
  TopKState st({{0, 1.0}, {1, 3.0}}, 1, 0.5);
  EXPECT_FALSE(st.update(7, 2.0).has_value());
  EXPECT_EQ(st.size(), 3u);
  EXPECT_TRUE(st.update(7, 9.0).has_value());
  EXPECT_EQ(st.current_set(), OutputSet{7});
}

TEST(TopKState, StreamsMatchBatch) {
  std::mt19937_64 g(53);
  std::size_t n = 50, k = 8;
  double a = 1.5;
  KeyedValues x = testing::random_values(g, n);
  TopKState st(x, k, a);
  for (int t = 0; t < 10000; ++t) {
    OutputSet before = st.current_set();
    Key i = testing::pick(g, 0, n - 1);
    // Coarse values make ties and exact-threshold gains common.
    x[i].value = static_cast<double>(testing::pick(g, 0, 20)) * 0.5;
    std::optional<Swap> s = st.update(i, x[i].value);
    OutputSet want = topk_alpha_stable(x, before, a);
    ASSERT_EQ(st.current_set(), want) << "step " << t;
    EXPECT_EQ(s.has_value(), want != before);
  }
}

TEST(TopKState, MatchesDynamicBridge) {
  std::mt19937_64 g(54);
  std::size_t n = 30, k = 5;
  double a = 2.0;
  KeyedValues x = testing::random_values(g, n);
  TopKState st(x, k, a);
  DynamicBridge bridge(std::make_unique<TopKDynamicOracle>(x, k, TiePolicy::kPreferChange), x, a);
  for (int t = 0; t < 10000; ++t) {
    Key i = testing::pick(g, 0, n - 1);
    x[i].value = testing::uniform(g, -5, 10);
    st.update(i, x[i].value);
    bridge.update(i, x[i].value);
    ASSERT_EQ(st.current_set(), bridge.current()) << "step " << t;
  }
}

std::vector<std::vector<double>> random_matrix(std::mt19937_64& g, std::size_t steps, std::size_t n) {
  std::vector<std::vector<double>> x(steps, std::vector<double>(n));
  for (auto& row : x) {
    for (double& v : row) v = testing::uniform(g, 0.0, 10.0);
  }
  return x;
}

TEST(OfflineOptimal, MatchesEnumeration) {
  std::mt19937_64 g(55);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t n = testing::pick(g, 2, 6);
    std::size_t steps = testing::pick(g, 1, 5);
    std::size_t k = testing::pick(g, 1, std::min<std::size_t>(2, n));
    auto x = random_matrix(g, steps, n);
    double a = testing::uniform(g, 0.0, 6.0);
    bool has_initial = rep % 2 == 0;
    OutputSet s0 = has_initial ? testing::random_subset(g, n, k) : OutputSet{};
    std::optional<OutputSet> init = has_initial ? std::optional<OutputSet>(s0) : std::nullopt;
    OfflineResult dp = offline_optimal(x, k, init, {a, std::nullopt});
    oracle::OfflineChoice ref = oracle::exhaustive_offline_topk(x, k, s0, a, -1, !has_initial);
    EXPECT_NEAR(dp.objective, ref.objective, 1e-9) << "rep " << rep;
    EXPECT_NEAR(offline_objective(x, dp.sets, init, a), dp.objective, 1e-9);
    double greedy = offline_objective(x, greedy_sequence(x, k, init, a), init, a);
    EXPECT_GE(dp.objective, greedy - 1e-9);
    // Budgeted variant.
    std::size_t budget = testing::pick(g, 0, steps * k);
    OfflineResult capped = offline_optimal(x, k, init, {0.0, budget});
    oracle::OfflineChoice ref_cap =
        oracle::exhaustive_offline_topk(x, k, s0, 0.0, static_cast<long>(budget), !has_initial);
    EXPECT_NEAR(capped.objective, ref_cap.objective, 1e-9);
    EXPECT_LE(capped.changeout, budget);
  }
}

TEST(OfflineOptimal, SingleStepIsAlphaStable) {
  std::vector<std::vector<double>> x{{1, 4, 7, 5}};
  // Keys are column indices, zero-based.
  OfflineResult r = offline_optimal(x, 2, OutputSet{0, 1}, {3.0, std::nullopt});
  EXPECT_EQ(r.sets[0], (OutputSet{1, 2}));
}

TEST(OfflineOptimal, HugePriceFreezes) {
  std::mt19937_64 g(56);
  auto x = random_matrix(g, 5, 5);
  OfflineResult r = offline_optimal(x, 2, std::nullopt, {1e9, std::nullopt});
  for (const OutputSet& s : r.sets) EXPECT_EQ(s, r.sets[0]);
  // The frozen set is the top-k of the column totals.
  KeyedValues totals;
  for (Key i = 0; i < 5; ++i) {
    double sum = 0.0;
    for (const auto& row : x) sum += row[i];
    totals.push_back({i, sum});
  }
  EXPECT_EQ(r.sets[0], top_k(totals, 2));
  OfflineResult zero = offline_optimal(x, 2, std::nullopt, {0.0, std::size_t{0}});
  EXPECT_EQ(zero.sets[0], top_k(totals, 2));
  EXPECT_EQ(zero.changeout, 0u);
}

TEST(OfflineOptimal, RefusesLargeInstances) {
  std::vector<std::vector<double>> x(9, std::vector<double>(4, 1.0));
  EXPECT_THROW(offline_optimal(x, 1, std::nullopt, {}), ScaleError);
  std::vector<std::vector<double>> wide(2, std::vector<double>(9, 1.0));
  EXPECT_THROW(offline_optimal(wide, 1, std::nullopt, {}), ScaleError);
  std::vector<std::vector<double>> ok(2, std::vector<double>(6, 1.0));
  EXPECT_THROW(offline_optimal(ok, 4, std::nullopt, {}), ScaleError);
}

}  // namespace
}  // namespace stablex
