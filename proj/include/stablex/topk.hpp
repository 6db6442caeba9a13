// Stable top-k: batch swap plans, tradeoffs, value transforms, incremental
// maintenance and the small-scale offline optimum.
//
// Equal values are ordered by key: of two keys with the same value the
// smaller key counts as heavier.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "stablex/core.hpp"
#include "stablex/piecewise.hpp"
#include "stablex/reduction.hpp"

namespace stablex {

struct Swap {
  Key out;
  Key in;
  double gain;
};

// Lightest members of S paired with the heaviest non-members, listed while
// the gain is positive. Gains are non-increasing.
struct SwapPlan {
  std::vector<Swap> swaps;
};

// Keys of S must appear in x; |S| <= |x|.
SwapPlan swap_plan(const KeyedValues& x, const OutputSet& s);

// S with every swap of gain >= a applied (never a zero-gain swap).
OutputSet apply_swaps(const SwapPlan& plan, const OutputSet& s, double a);

OutputSet topk_alpha_stable(const KeyedValues& x, const OutputSet& s, double a);

// The k heaviest keys.
OutputSet top_k(const KeyedValues& x, std::size_t k);

struct TopKTradeoff {
  SwapPlan plan;
  // Point h: h swaps applied, optimal for prices in [gain_{h+1}, gain_h].
  TradeoffCurve curve;
};

TopKTradeoff topk_tradeoff(const KeyedValues& x, const OutputSet& s);

// Reduction view: opt is the top-k of y. Ties at positive price resolve
// toward change, matching the gain >= a swap rule.
AdditiveProblem topk_problem(std::size_t k);

struct PsiSpec {
  enum class Kind { kIdentity, kPower, kTable };
  Kind kind = Kind::kIdentity;
  double exponent = 1.0;
  // Kind::kTable: (input, output) knots, inputs strictly increasing and
  // outputs non-decreasing; linear between knots, clamped outside.
  std::vector<std::pair<double, double>> table;

  static PsiSpec identity() { return {}; }
  static PsiSpec power(double p) { return {Kind::kPower, p, {}}; }
};

// psi applied entrywise; kPower uses |x|^p.
KeyedValues psi_transform(const KeyedValues& x, const PsiSpec& psi);

// Two ordered sets standing in for the min-heap of cached keys and the
// max-heap of the rest. At rest no swap with gain >= a (and gain > 0)
// exists.
class TopKState {
 public:
  TopKState(const KeyedValues& x, std::size_t k, double a);
  // Starts from a given set instead of the plain top-k.
  TopKState(const KeyedValues& x, const OutputSet& initial, double a);

  // Unknown keys join the non-members. Returns the swap made, if any.
  std::optional<Swap> update(Key key, double value);
  OutputSet current_set() const;
  double value(Key key) const;
  std::size_t k() const { return in_.size(); }
  double price() const { return a_; }
  std::size_t size() const { return values_.size(); }

 private:
  struct Lighter {
    bool operator()(const Entry& l, const Entry& r) const;
  };
  struct Heavier {
    bool operator()(const Entry& l, const Entry& r) const;
  };

  void restore();

  double a_;
  std::unordered_map<Key, double> values_;
  std::unordered_map<Key, bool> member_;
  std::set<Entry, Lighter> in_;   // lightest first
  std::set<Entry, Heavier> out_;  // heaviest first
};

// Dynamic top-k over adjusted values for DynamicBridge. After each change
// at most one swap is made; equal values resolve per the tie policy.
class TopKDynamicOracle : public DynamicOracle {
 public:
  TopKDynamicOracle(const KeyedValues& y, std::size_t k, TiePolicy ties);
  void set_value(Key key, double y) override;
  OutputSet current() const override;

 private:
  struct Lighter {
    bool operator()(const Entry& l, const Entry& r) const;
  };
  struct Heavier {
    bool operator()(const Entry& l, const Entry& r) const;
  };

  TiePolicy ties_;
  std::unordered_map<Key, double> values_;
  std::unordered_map<Key, bool> member_;
  std::set<Entry, Lighter> in_;
  std::set<Entry, Heavier> out_;
};

struct OfflineResult {
  std::vector<OutputSet> sets;
  double objective = 0.0;
  std::size_t changeout = 0;
};

struct OfflineCost {
  // Price per key brought in; ignored when budget is set.
  double a = 0.0;
  // Cap on total changeout; the objective is then plain fitness.
  std::optional<std::size_t> budget;
};

// x[j][i]: value of key i at step j. Maximizes
// sum_j (value(S_j, x_j) - a |S_j \ S_{j-1}|) over size-k sets by dynamic
// programming over (step, set). Without an initial set the first step is
// free. Refuses instances beyond n <= 8, N <= 8, k <= 3 with ScaleError.
OfflineResult offline_optimal(const std::vector<std::vector<double>>& x, std::size_t k,
                              const std::optional<OutputSet>& initial, const OfflineCost& cost);

// Objective of a given sequence under the same conventions.
double offline_objective(const std::vector<std::vector<double>>& x,
                         const std::vector<OutputSet>& sets,
                         const std::optional<OutputSet>& initial, double a);

// S_j = topk_alpha_stable(x_j, S_{j-1}, a), with S_1 = top-k when there is
// no initial set.
std::vector<OutputSet> greedy_sequence(const std::vector<std::vector<double>>& x, std::size_t k,
                                       const std::optional<OutputSet>& initial, double a);

}  // namespace stablex
