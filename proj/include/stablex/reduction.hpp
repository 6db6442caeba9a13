// Stable extensions of additive problems: fitness sum_{i in S} x_i and
// changeout sum_{i in S' \ S} c_i.
#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "stablex/core.hpp"
#include "stablex/piecewise.hpp"

namespace stablex {

// How a best-fit oracle resolves equal totals between outputs that differ
// in how many keys they share with the favored set.
enum class TiePolicy {
  kPreferStable,  // more keys of the favored set
  kPreferChange,  // fewer keys of the favored set
};

// Returns a feasible output maximizing sum_{i in S} y_i. Ties are resolved
// against `favored` per the policy, then deterministically.
using OptOracle =
    std::function<OutputSet(const KeyedValues& y, const OutputSet& favored, TiePolicy ties)>;

struct AdditiveProblem {
  OptOracle opt;
  // Size of every feasible output; 0 when outputs vary in size.
  std::size_t fixed_size = 0;
  // Changeout cost per key; missing keys cost 1.
  std::unordered_map<Key, double> costs;
  // Tie rule used by alpha_stable for positive prices.
  TiePolicy ties = TiePolicy::kPreferStable;

  double cost(Key key) const;
  bool uniform() const;
};

enum class AdjustForm {
  kSubtractive,  // y_i = x_i - [i not in S] c_i a
  kAdditive,     // y_i = x_i + [i in S] a
  kAuto,         // additive for fixed-size uniform problems
};

KeyedValues adjusted_input(const AdditiveProblem& problem, const KeyedValues& x,
                           const OutputSet& s, double a, AdjustForm form = AdjustForm::kAuto);

// sum_{i in S' \ S} c_i
double changeout(const AdditiveProblem& problem, const OutputSet& next, const OutputSet& prev);

// phi(S', x) - a d(S', S)
double stable_objective(const AdditiveProblem& problem, const KeyedValues& x,
                        const OutputSet& next, const OutputSet& prev, double a);

// opt(adjusted input). At a = 0 ties always prefer S, so no zero-gain
// change is ever made.
OutputSet alpha_stable(const AdditiveProblem& problem, const KeyedValues& x, const OutputSet& s,
                       double a);

struct EnvelopePiece {
  // |S cap S'| of the witness.
  std::size_t slope = 0;
  // Fitness of the witness.
  double intercept = 0.0;
  double a_lo = 0.0;
  double a_hi = kInfinity;
  OutputSet witness;

  double operator()(double a) const { return intercept + a * static_cast<double>(slope); }
};

// Upper envelope of a -> phi(S') + a |S cap S'| for a >= 0, pieces ordered
// by increasing a (and slope).
class LinearEnvelope {
 public:
  LinearEnvelope() = default;
  LinearEnvelope(std::vector<EnvelopePiece> pieces, std::size_t k);

  const std::vector<EnvelopePiece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  std::size_t k() const { return k_; }
  double operator()(double a) const;
  // Piece active at a; at a breakpoint the higher-slope piece.
  const EnvelopePiece& piece_at(double a) const;
  std::vector<double> breakpoints() const;
  // Slopes strictly increasing, breakpoints increasing, at most k+1 pieces.
  CurveCheck check(double tol = kTolerance) const;
  // (changeout k - slope, fitness, lower price) by increasing changeout.
  TradeoffCurve tradeoff() const;

 private:
  std::vector<EnvelopePiece> pieces_;
  std::size_t k_ = 0;
};

// Fixed-size uniform problems only. Lines are found by recursive
// intersection probing between the a = 0 optimum and S itself.
LinearEnvelope parametric_envelope(const AdditiveProblem& problem, const KeyedValues& x,
                                   const OutputSet& s);

// Best envelope witness with |S' \ S| <= D.
OutputSet delta_stable(const AdditiveProblem& problem, const KeyedValues& x, const OutputSet& s,
                       std::size_t D);

// Best-fit structure that tracks single-entry value changes.
class DynamicOracle {
 public:
  virtual ~DynamicOracle() = default;
  virtual void set_value(Key key, double y) = 0;
  // Current best output. Ties prefer the previous output.
  virtual OutputSet current() const = 0;
};

// Maintains the stable output of a fixed-size uniform problem by feeding
// the adjusted input y_i = x_i + a [i in S] to a dynamic oracle and moving
// the +a bonus whenever the output changes.
class DynamicBridge {
 public:
  // The oracle must already hold x.
  DynamicBridge(std::unique_ptr<DynamicOracle> oracle, const KeyedValues& x, double a);

  // Returns the number of keys that entered the output.
  std::size_t update(Key key, double x);
  const OutputSet& current() const { return current_; }
  double value(Key key) const;

 private:
  std::unique_ptr<DynamicOracle> oracle_;
  std::unordered_map<Key, double> x_;
  double a_;
  OutputSet current_;
};

}  // namespace stablex
