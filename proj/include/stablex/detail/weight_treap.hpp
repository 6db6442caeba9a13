// Pooled treaps over (weight, key) with subtree count and weight sums.
// Every tree lives in one node pool, so trees can be split and united
// without copying. A tree is named by its root index (kNil when empty).
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stablex/core.hpp"

namespace stablex::detail {

struct WeightKey {
  double weight;
  Key key;

  friend bool operator<(const WeightKey& a, const WeightKey& b) {
    return a.weight < b.weight || (a.weight == b.weight && a.key < b.key);
  }
  friend bool operator==(const WeightKey& a, const WeightKey& b) {
    return a.weight == b.weight && a.key == b.key;
  }
};

class WeightTreap {
 public:
  static constexpr int kNil = -1;

  int insert(int root, WeightKey item);
  int erase(int root, WeightKey item);
  // Union of two trees with disjoint items, in expected
  // O(m log(n/m)) for sizes m <= n.
  int unite(int a, int b);
  // (items < at, items >= at)
  std::pair<int, int> split(int root, WeightKey at);

  std::size_t count(int root) const { return root == kNil ? 0 : nodes_[root].count; }
  double sum(int root) const { return root == kNil ? 0.0 : nodes_[root].sum; }
  // Count and weight sum of items < at.
  std::pair<std::size_t, double> below(int root, WeightKey at) const;

  // Largest item < at / smallest item > at / smallest item >= at.
  std::optional<WeightKey> prev(int root, WeightKey at) const;
  std::optional<WeightKey> next(int root, WeightKey at) const;
  std::optional<WeightKey> lower_bound(int root, WeightKey at) const;
  std::optional<WeightKey> max(int root) const;

  template <typename Fn>
  void for_each(int root, Fn fn) const {
    if (root == kNil) return;
    for_each(nodes_[root].left, fn);
    fn(nodes_[root].item);
    for_each(nodes_[root].right, fn);
  }

  // In-order visit of items < at.
  template <typename Fn>
  void for_each_less(int root, WeightKey at, Fn fn) const {
    if (root == kNil) return;
    const Node& n = nodes_[root];
    for_each_less(n.left, at, fn);
    if (n.item < at) {
      fn(n.item);
      for_each_less(n.right, at, fn);
    }
  }

  // Node visits made by structural operations since construction.
  std::uint64_t work() const { return work_; }
  std::size_t live_nodes() const { return nodes_.size() - free_.size(); }

 private:
  struct Node {
    WeightKey item;
    std::uint64_t prio;
    int left;
    int right;
    std::size_t count;
    double sum;
  };

  int make(WeightKey item);
  void pull(int n);
  int merge(int a, int b);

  std::vector<Node> nodes_;
  std::vector<int> free_;
  std::uint64_t prio_state_ = 0x2545f4914f6cdd1dULL;
  std::uint64_t work_ = 0;
};

}  // namespace stablex::detail
