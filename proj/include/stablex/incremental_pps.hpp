// Stable PPS under single-entry weight updates.
//
// Entries are grouped into stretches that share a threshold tau_s, with
// p_i = min{1, w_i / tau_s}. An update re-ratios one entry into its own
// stretch; if that breaks tau_lo^2 - tau_hi^2 <= a, the stretches at both
// ends are walked lazily until the gap closes, and the walked stretches are
// merged into one prefix and one suffix stretch.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "stablex/core.hpp"
#include "stablex/detail/weight_treap.hpp"
#include "stablex/sampler.hpp"

namespace stablex {

struct ProbabilityChange {
  Key key;
  double before;
  double after;
};

struct ChangeReport {
  std::vector<ProbabilityChange> changes;
  // PRN sample changes.
  std::vector<Key> inserted;
  std::vector<Key> removed;
  // sum |after - before|
  double l1 = 0.0;
  // Whether the price invariant had to be restored.
  bool repaired = false;
  // Treap node visits plus walker events for this update.
  std::uint64_t work = 0;
};

class StableState {
 public:
  static StableState build(const WeightVector& w, double k, double a,
                           std::uint64_t seed = 0x5eed);

  // new_weight = 0 removes the entry once its probability reaches 0.
  ChangeReport update_weight(Key key, double new_weight);

  // Sorted by key; includes zero-weight entries that still hold mass.
  PpsDistribution current_distribution() const;
  WeightVector current_weights() const;
  SampleSet current_sample() const;

  double probability(Key key) const;
  double weight(Key key) const;
  // Threshold of the next increase (+inf if some positive entry has p = 0,
  // 0 if nothing can increase) and of the next decrease (0 while
  // zero-weight entries hold mass).
  double tau_lo() const;
  double tau_hi() const;

  double k() const { return k_; }
  double price() const { return a_; }
  std::size_t stretch_count() const { return index_.size(); }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_work() const { return treap_.work() + events_; }
  const PrnTable& prn() const { return prn_; }

 private:
  struct Stretch {
    double tau;
    int root;
  };
  struct EntryState {
    double weight;
    int stretch;  // -1: not in a stretch (zero weight)
  };
  class IncreaseWalker;
  class DecreaseWalker;
  friend class IncreaseWalker;
  friend class DecreaseWalker;

  StableState(double k, double a, std::uint64_t seed) : k_(k), a_(a), prn_(seed) {}

  int find(int s) const;
  int new_stretch(double tau, int root);
  void drop_from_index(int s);
  double prob_in(int s, double w) const;
  void detach(Key key, EntryState& e);
  int merge_into(const std::vector<int>& ids, double tau);

  double k_;
  double a_;
  PrnTable prn_;
  detail::WeightTreap treap_;
  std::vector<Stretch> stretches_;
  mutable std::vector<int> parent_;
  std::set<std::pair<double, int>> index_;
  std::unordered_map<Key, EntryState> entries_;
  // Zero-weight entries still holding probability, reduced in key order.
  std::map<Key, double> zero_pool_;
  std::size_t positive_ = 0;
  std::uint64_t events_ = 0;
};

}  // namespace stablex
