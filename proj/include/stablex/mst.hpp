// Stable minimum spanning trees. Trees are sets of edge keys.
#pragma once

#include <vector>

#include "stablex/core.hpp"
#include "stablex/piecewise.hpp"
#include "stablex/reduction.hpp"

namespace stablex {

struct GraphEdge {
  std::size_t u;
  std::size_t v;
  double weight;
  Key key;
};

// Simple undirected graph with nonnegative edge weights and unique keys.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::size_t vertices, std::vector<GraphEdge> edges);

  std::size_t vertex_count() const { return n_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(Key key) const;
  bool connected() const;
  // Negated weights, the maximization-oriented input of the reduction.
  KeyedValues fitness_values() const;

 private:
  std::size_t n_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<std::size_t> by_key_order_;
};

double tree_weight(const WeightedGraph& g, const OutputSet& tree);
// n-1 edges of g without a cycle.
bool is_spanning_tree(const WeightedGraph& g, const OutputSet& tree);

// Kruskal; equal weights by key. InfeasibleError when disconnected.
OutputSet mst(const WeightedGraph& g);

// Reduction view over edge keys: opt is a maximum spanning tree of y.
AdditiveProblem mst_problem(const WeightedGraph& g);

// Minimizes weight(T) + a |T \ T_prev|; prior edges win weight ties.
OutputSet alpha_stable_mst(const WeightedGraph& g, const OutputSet& prev, double a);

struct EdgeThreshold {
  Key key;
  bool in_prev;
  // Prior edges are kept for a >= threshold; other edges are used for
  // a < threshold. 0 means never leaves / never enters.
  double threshold;
};

struct MstTradeoff {
  TradeoffCurve curve;
  std::vector<EdgeThreshold> thresholds;
  // Distinct stable trees with the lowest price at which each is chosen,
  // by increasing changeout.
  std::vector<std::pair<double, OutputSet>> trees;
};

// Probes a = 0, midpoints between consecutive distinct pairwise weight
// differences and one point past the largest. Throws ContractViolation if
// some edge changes membership more than once.
MstTradeoff mst_tradeoff(const WeightedGraph& g, const OutputSet& prev);

}  // namespace stablex
