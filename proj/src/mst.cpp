#include "stablex/mst.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace stablex {
namespace {

class Dsu {
 public:
  explicit Dsu(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

WeightedGraph::WeightedGraph(std::size_t vertices, std::vector<GraphEdge> edges)
    : n_(vertices), edges_(std::move(edges)) {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::set<Key> keys;
  for (const GraphEdge& e : edges_) {
    if (e.u >= n_ || e.v >= n_) throw ContractViolation("edge endpoint out of range");
    if (e.u == e.v) throw ContractViolation("self loop");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw ContractViolation("edge weight must be finite and nonnegative");
    }
    if (!pairs.insert(std::minmax(e.u, e.v)).second) throw ContractViolation("parallel edge");
    if (!keys.insert(e.key).second) throw ContractViolation("duplicate edge key");
  }
  by_key_order_.resize(edges_.size());
  std::iota(by_key_order_.begin(), by_key_order_.end(), 0);
  std::sort(by_key_order_.begin(), by_key_order_.end(),
            [&](std::size_t a, std::size_t b) { return edges_[a].key < edges_[b].key; });
}

const GraphEdge& WeightedGraph::edge(Key key) const {
  auto it = std::lower_bound(by_key_order_.begin(), by_key_order_.end(), key,
                             [&](std::size_t i, Key k) { return edges_[i].key < k; });
  if (it == by_key_order_.end() || edges_[*it].key != key) {
    throw ContractViolation("unknown edge key " + std::to_string(key));
  }
  return edges_[*it];
}

bool WeightedGraph::connected() const {
  if (n_ == 0) return true;
  Dsu dsu(n_);
  std::size_t parts = n_;
  for (const GraphEdge& e : edges_) parts -= dsu.unite(e.u, e.v) ? 1 : 0;
  return parts == 1;
}

KeyedValues WeightedGraph::fitness_values() const {
  KeyedValues x;
  for (const GraphEdge& e : edges_) x.push_back({e.key, -e.weight});
  return x;
}

double tree_weight(const WeightedGraph& g, const OutputSet& tree) {
  double w = 0.0;
  for (Key k : tree) w += g.edge(k).weight;
  return w;
}

bool is_spanning_tree(const WeightedGraph& g, const OutputSet& tree) {
  if (g.vertex_count() == 0) return tree.empty();
  if (tree.size() + 1 != g.vertex_count()) return false;
  Dsu dsu(g.vertex_count());
  for (Key k : tree) {
    const GraphEdge& e = g.edge(k);
    if (!dsu.unite(e.u, e.v)) return false;
  }
  return true;
}

AdditiveProblem mst_problem(const WeightedGraph& g) {
  AdditiveProblem p;
  p.fixed_size = g.vertex_count() > 0 ? g.vertex_count() - 1 : 0;
  p.opt = [g](const KeyedValues& y, const OutputSet& favored, TiePolicy ties) {
    std::vector<Entry> order(y);
    bool want_in = ties == TiePolicy::kPreferStable;
    std::sort(order.begin(), order.end(), [&](const Entry& l, const Entry& r) {
      if (l.value != r.value) return l.value > r.value;
      bool li = contains(favored, l.key) == want_in;
      bool ri = contains(favored, r.key) == want_in;
      if (li != ri) return li;
      return l.key < r.key;
    });
    Dsu dsu(g.vertex_count());
    std::vector<Key> tree;
    for (const Entry& e : order) {
      const GraphEdge& ge = g.edge(e.key);
      if (dsu.unite(ge.u, ge.v)) tree.push_back(e.key);
    }
    if (g.vertex_count() > 0 && tree.size() + 1 != g.vertex_count()) {
      throw InfeasibleError("graph is disconnected");
    }
    return make_output_set(std::move(tree));
  };
  return p;
}

OutputSet mst(const WeightedGraph& g) {
  return mst_problem(g).opt(g.fitness_values(), {}, TiePolicy::kPreferStable);
}

OutputSet alpha_stable_mst(const WeightedGraph& g, const OutputSet& prev, double a) {
  if (!is_spanning_tree(g, prev)) throw ContractViolation("previous output is not a spanning tree");
  return alpha_stable(mst_problem(g), g.fitness_values(), prev, a);
}

MstTradeoff mst_tradeoff(const WeightedGraph& g, const OutputSet& prev) {
  if (!is_spanning_tree(g, prev)) throw ContractViolation("previous output is not a spanning tree");
  std::vector<double> diffs{0.0};
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      double d = std::abs(edges[i].weight - edges[j].weight);
      if (d > 0.0) diffs.push_back(d);
    }
  }
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

  // Probe i covers prices (diffs[i-1], diffs[i]) by its midpoint; probe 0
  // is a = 0 itself and the last lies past every difference.
  struct Probe {
    double lower;
    OutputSet tree;
  };
  std::vector<Probe> probes;
  probes.push_back({0.0, alpha_stable_mst(g, prev, 0.0)});
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    double hi = i + 1 < diffs.size() ? diffs[i + 1] : diffs[i] + 1.0;
    probes.push_back({diffs[i], alpha_stable_mst(g, prev, 0.5 * (diffs[i] + hi))});
  }

  MstTradeoff out;
  for (const GraphEdge& e : edges) {
    bool in_prev = contains(prev, e.key);
    int flips = 0;
    double threshold = 0.0;
    for (std::size_t i = 1; i < probes.size(); ++i) {
      bool before = contains(probes[i - 1].tree, e.key);
      bool after = contains(probes[i].tree, e.key);
      if (before != after) {
        ++flips;
        threshold = probes[i].lower;
      }
    }
    if (flips > 1) throw ContractViolation("edge membership is not monotone in the price");
    bool first = contains(probes.front().tree, e.key);
    if (flips == 0) threshold = 0.0;
    if (flips == 1 && in_prev == first) {
      throw ContractViolation("edge membership moves against the price");
    }
    out.thresholds.push_back({e.key, in_prev, threshold});
  }

  // Highest price first gives increasing changeout; each run of equal
  // trees reports its lowest price.
  std::vector<std::pair<double, OutputSet>> runs;
  for (std::size_t i = probes.size(); i-- > 0;) {
    if (!runs.empty() && runs.back().second == probes[i].tree) {
      runs.back().first = probes[i].lower;
    } else {
      runs.push_back({probes[i].lower, probes[i].tree});
    }
  }
  out.trees = std::move(runs);
  for (const auto& [lower, t] : out.trees) {
    out.curve.push_back({static_cast<double>(set_difference_size(t, prev)), -tree_weight(g, t),
                         lower});
  }
  return out;
}

}  // namespace stablex
