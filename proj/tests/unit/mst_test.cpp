#include <gtest/gtest.h>

#include <random>

#include "stablex/mst.hpp"
#include "stablex/oracle/oracle.hpp"
#include "support.hpp"

namespace stablex {
namespace {

// Connected random graph: a random spanning tree plus extra edges.
WeightedGraph random_graph(std::mt19937_64& g, std::size_t n, bool integer_weights = false) {
  std::vector<GraphEdge> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  auto weight = [&] {
    return integer_weights ? static_cast<double>(testing::pick(g, 1, 5)) : testing::uniform(g, 0.0, 10.0);
  };
  for (std::size_t v = 1; v < n; ++v) {
    std::size_t u = testing::pick(g, 0, v - 1);
    used[u][v] = used[v][u] = true;
    edges.push_back({u, v, weight(), edges.size()});
  }
  std::size_t extra = testing::pick(g, 0, n * (n - 1) / 2 - (n - 1));
  for (std::size_t t = 0; t < extra; ++t) {
    std::size_t u = testing::pick(g, 0, n - 1), v = testing::pick(g, 0, n - 1);
    if (u == v || used[u][v]) continue;
    used[u][v] = used[v][u] = true;
    edges.push_back({u, v, weight(), edges.size()});
  }
  return WeightedGraph(n, edges);
}

std::vector<oracle::OracleEdge> oracle_edges(const WeightedGraph& g) {
  std::vector<oracle::OracleEdge> out;
  for (const GraphEdge& e : g.edges()) out.push_back({e.u, e.v, e.weight, e.key});
  return out;
}

// Exhaustive minimum of weight(T) + a |T \ prev| (ties toward more kept edges).
OutputSet brute_stable_tree(const WeightedGraph& g, const OutputSet& prev, double a) {
  OutputSet best;
  double best_obj = kInfinity;
  std::size_t best_keep = 0;
  for (const OutputSet& t : oracle::spanning_trees(g.vertex_count(), oracle_edges(g))) {
    double obj = 0.0;
    for (Key k : t) obj += g.edge(k).weight + (contains(prev, k) ? 0.0 : a);
    std::size_t keep = intersection_size(t, prev);
    if (obj < best_obj - 1e-12 || (std::abs(obj - best_obj) <= 1e-12 && keep > best_keep)) {
      best = t;
      best_obj = obj;
      best_keep = keep;
    }
  }
  return best;
}

TEST(Mst, Triangle) {
  WeightedGraph g(3, {{0, 1, 1.0, 1}, {1, 2, 2.0, 2}, {0, 2, 3.0, 3}});
  EXPECT_EQ(mst(g), (OutputSet{1, 2}));
}

TEST(Mst, PathKeepsAllEdges) {
  WeightedGraph g(4, {{0, 1, 5.0, 0}, {1, 2, 1.0, 1}, {2, 3, 9.0, 2}});
  EXPECT_EQ(mst(g), (OutputSet{0, 1, 2}));
}

TEST(Mst, Validation) {
  EXPECT_THROW(WeightedGraph(2, {{0, 1, -1.0, 0}}), ContractViolation);
  EXPECT_THROW(WeightedGraph(2, {{0, 0, 1.0, 0}}), ContractViolation);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, 1.0, 0}, {1, 0, 2.0, 1}}), ContractViolation);
  EXPECT_THROW(WeightedGraph(3, {{0, 1, 1.0, 0}, {1, 2, 2.0, 0}}), ContractViolation);
  WeightedGraph split(4, {{0, 1, 1.0, 0}, {2, 3, 1.0, 1}});
  EXPECT_FALSE(split.connected());
  EXPECT_THROW(mst(split), InfeasibleError);
}

TEST(Mst, RandomGraphsMatchExhaustiveMinimum) {
  std::mt19937_64 g(61);
  for (int rep = 0; rep < 100; ++rep) {
    WeightedGraph graph = random_graph(g, testing::pick(g, 2, 8));
    OutputSet t = mst(graph);
    EXPECT_TRUE(is_spanning_tree(graph, t));
    double best = kInfinity;
    for (const OutputSet& c : oracle::spanning_trees(graph.vertex_count(), oracle_edges(graph))) {
      best = std::min(best, tree_weight(graph, c));
    }
    EXPECT_NEAR(tree_weight(graph, t), best, 1e-9);
  }
}

TEST(AlphaStableMst, Ends) {
  std::mt19937_64 g(62);
  WeightedGraph graph = random_graph(g, 6);
  OutputSet prev = brute_stable_tree(graph, {}, 0.0);
  // Use a different spanning tree as the previous one.
  auto trees = oracle::spanning_trees(graph.vertex_count(), oracle_edges(graph));
  prev = trees.back();
  EXPECT_EQ(alpha_stable_mst(graph, prev, 1e6), prev);
  EXPECT_NEAR(tree_weight(graph, alpha_stable_mst(graph, prev, 0.0)), tree_weight(graph, mst(graph)), 1e-12);
}

TEST(AlphaStableMst, MatchesExhaustiveSearch) {
  std::mt19937_64 g(63);
  for (int rep = 0; rep < 100; ++rep) {
    bool ints = rep % 3 == 0;
    WeightedGraph graph = random_graph(g, testing::pick(g, 2, 7), ints);
    auto trees = oracle::spanning_trees(graph.vertex_count(), oracle_edges(graph));
    OutputSet prev = trees[testing::pick(g, 0, trees.size() - 1)];
    for (int t = 0; t < 5; ++t) {
      double a = ints ? static_cast<double>(testing::pick(g, 0, 8)) * 0.5 : testing::uniform(g, 0, 10);
      OutputSet got = alpha_stable_mst(graph, prev, a);
      OutputSet want = brute_stable_tree(graph, prev, a);
      double obj_got = tree_weight(graph, got) + a * static_cast<double>(set_difference_size(got, prev));
      double obj_want = tree_weight(graph, want) + a * static_cast<double>(set_difference_size(want, prev));
      EXPECT_NEAR(obj_got, obj_want, 1e-9);
      EXPECT_EQ(set_difference_size(got, prev), set_difference_size(want, prev));
      if (!ints) EXPECT_EQ(got, want);
    }
  }
}

TEST(MstTradeoff, AlreadyMinimal) {
  std::mt19937_64 g(64);
  WeightedGraph graph = random_graph(g, 6);
  MstTradeoff t = mst_tradeoff(graph, mst(graph));
  EXPECT_EQ(t.curve.size(), 1u);
}

TEST(MstTradeoff, ToggleGraphSingleBreakpoint) {
  // Square 0-1-2-3 with the previous tree using the heavy edge (3,0).
  WeightedGraph g(4, {{0, 1, 1.0, 0}, {1, 2, 1.0, 1}, {2, 3, 1.0, 2}, {3, 0, 3.0, 3}});
  OutputSet prev{0, 1, 3};
  MstTradeoff t = mst_tradeoff(g, prev);
  ASSERT_EQ(t.curve.size(), 2u);
  EXPECT_DOUBLE_EQ(t.curve.points()[0].multiplier, 2.0);
  EXPECT_EQ(alpha_stable_mst(g, prev, 2.5), prev);
  EXPECT_EQ(alpha_stable_mst(g, prev, 2.0), prev);
  EXPECT_EQ(alpha_stable_mst(g, prev, 1.5), (OutputSet{0, 1, 2}));
  for (const EdgeThreshold& e : t.thresholds) {
    if (e.key == 3) EXPECT_DOUBLE_EQ(e.threshold, 2.0);
    if (e.key == 2) EXPECT_DOUBLE_EQ(e.threshold, 2.0);
  }
}

TEST(MstTradeoff, MembershipIsStepFunction) {
  std::mt19937_64 g(65);
  for (int rep = 0; rep < 100; ++rep) {
    WeightedGraph graph = random_graph(g, testing::pick(g, 3, 7));
    auto trees = oracle::spanning_trees(graph.vertex_count(), oracle_edges(graph));
    OutputSet prev = trees[testing::pick(g, 0, trees.size() - 1)];
    MstTradeoff t = mst_tradeoff(graph, prev);
    EXPECT_TRUE(t.curve.check().ok) << t.curve.check().message;
    std::vector<int> flips(graph.edges().size(), 0);
    OutputSet last = alpha_stable_mst(graph, prev, 0.0);
    for (int i = 1; i <= 1000; ++i) {
      double a = 12.0 * i / 1000.0;
      OutputSet cur = alpha_stable_mst(graph, prev, a);
      for (const GraphEdge& e : graph.edges()) {
        if (contains(cur, e.key) != contains(last, e.key)) ++flips[e.key];
      }
      last = cur;
    }
    for (int f : flips) EXPECT_LE(f, 1);
    // Thresholds agree with the sweep.
    for (const EdgeThreshold& e : t.thresholds) {
      double probe_hi = e.threshold + 1e-6, probe_lo = std::max(0.0, e.threshold - 1e-6);
      if (e.threshold <= 1e-6) continue;
      if (e.in_prev) {
        EXPECT_TRUE(contains(alpha_stable_mst(graph, prev, probe_hi), e.key));
        EXPECT_FALSE(contains(alpha_stable_mst(graph, prev, probe_lo), e.key));
      } else {
        EXPECT_FALSE(contains(alpha_stable_mst(graph, prev, probe_hi), e.key));
        EXPECT_TRUE(contains(alpha_stable_mst(graph, prev, probe_lo), e.key));
      }
    }
  }
}

}  // namespace
}  // namespace stablex
