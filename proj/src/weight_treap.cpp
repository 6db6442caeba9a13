#include "stablex/detail/weight_treap.hpp"

#include <cmath>

#include "stablex/sampler.hpp"

namespace stablex::detail {

int WeightTreap::make(WeightKey item) {
  prio_state_ = splitmix64(prio_state_);
  Node n{item, prio_state_, kNil, kNil, 1, item.weight};
  if (!free_.empty()) {
    int id = free_.back();
    free_.pop_back();
    nodes_[id] = n;
    return id;
  }
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size() - 1);
}

void WeightTreap::pull(int n) {
  Node& x = nodes_[n];
  x.count = 1 + count(x.left) + count(x.right);
  x.sum = x.item.weight + sum(x.left) + sum(x.right);
}

std::pair<int, int> WeightTreap::split(int root, WeightKey at) {
  if (root == kNil) return {kNil, kNil};
  ++work_;
  if (nodes_[root].item < at) {
    auto [l, r] = split(nodes_[root].right, at);
    nodes_[root].right = l;
    pull(root);
    return {root, r};
  }
  auto [l, r] = split(nodes_[root].left, at);
  nodes_[root].left = r;
  pull(root);
  return {l, root};
}

int WeightTreap::merge(int a, int b) {
  if (a == kNil) return b;
  if (b == kNil) return a;
  ++work_;
  if (nodes_[a].prio > nodes_[b].prio) {
    nodes_[a].right = merge(nodes_[a].right, b);
    pull(a);
    return a;
  }
  nodes_[b].left = merge(a, nodes_[b].left);
  pull(b);
  return b;
}

int WeightTreap::insert(int root, WeightKey item) {
  auto [l, r] = split(root, item);
  return merge(merge(l, make(item)), r);
}

int WeightTreap::erase(int root, WeightKey item) {
  auto [l, r] = split(root, item);
  // r starts with item.
  WeightKey after{item.weight, item.key + 1};
  if (item.key == ~Key{0}) after = {std::nextafter(item.weight, kInfinity), 0};
  auto [mid, rest] = split(r, after);
  if (mid == kNil) throw ContractViolation("treap erase of a missing item");
  free_.push_back(mid);
  return merge(l, rest);
}

int WeightTreap::unite(int a, int b) {
  if (a == kNil) return b;
  if (b == kNil) return a;
  ++work_;
  if (nodes_[a].prio < nodes_[b].prio) std::swap(a, b);
  auto [l, r] = split(b, nodes_[a].item);
  int left = unite(nodes_[a].left, l);
  int right = unite(nodes_[a].right, r);
  nodes_[a].left = left;
  nodes_[a].right = right;
  pull(a);
  return a;
}

std::pair<std::size_t, double> WeightTreap::below(int root, WeightKey at) const {
  std::size_t c = 0;
  double s = 0.0;
  while (root != kNil) {
    const Node& n = nodes_[root];
    if (n.item < at) {
      c += 1 + count(n.left);
      s += n.item.weight + sum(n.left);
      root = n.right;
    } else {
      root = n.left;
    }
  }
  return {c, s};
}

std::optional<WeightKey> WeightTreap::prev(int root, WeightKey at) const {
  std::optional<WeightKey> best;
  while (root != kNil) {
    const Node& n = nodes_[root];
    if (n.item < at) {
      best = n.item;
      root = n.right;
    } else {
      root = n.left;
    }
  }
  return best;
}

std::optional<WeightKey> WeightTreap::next(int root, WeightKey at) const {
  std::optional<WeightKey> best;
  while (root != kNil) {
    const Node& n = nodes_[root];
    if (at < n.item) {
      best = n.item;
      root = n.left;
    } else {
      root = n.right;
    }
  }
  return best;
}

std::optional<WeightKey> WeightTreap::lower_bound(int root, WeightKey at) const {
  std::optional<WeightKey> best;
  while (root != kNil) {
    const Node& n = nodes_[root];
    if (!(n.item < at)) {
      best = n.item;
      root = n.left;
    } else {
      root = n.right;
    }
  }
  return best;
}

std::optional<WeightKey> WeightTreap::max(int root) const {
  if (root == kNil) return std::nullopt;
  while (nodes_[root].right != kNil) root = nodes_[root].right;
  return nodes_[root].item;
}

}  // namespace stablex::detail
