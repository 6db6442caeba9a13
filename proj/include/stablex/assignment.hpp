// Stable maximum-weight perfect assignment. Edge (i, j) has key i * n + j.
#pragma once

#include <vector>

#include "stablex/core.hpp"
#include "stablex/reduction.hpp"

namespace stablex {

class BipartiteWeights {
 public:
  BipartiteWeights() = default;
  // Square, finite, nonnegative.
  explicit BipartiteWeights(std::vector<std::vector<double>> rows);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  Key edge_key(std::size_t i, std::size_t j) const { return i * n_ + j; }
  KeyedValues edge_values() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

// match[i] is the column assigned to row i.
using Matching = std::vector<std::size_t>;

OutputSet matching_keys(const Matching& m);
// Inverse of matching_keys for an n x n instance. ContractViolation if the
// keys are not a perfect matching.
Matching keys_to_matching(const OutputSet& keys, std::size_t n);
double matching_weight(const BipartiteWeights& w, const Matching& m);

// Hungarian method on lexicographic (weight, tie score) costs.
Matching max_assignment(const BipartiteWeights& w);

// Reduction view over edge keys.
AdditiveProblem assignment_problem(std::size_t n);

// Maximizes weight(M) - a |M \ M_prev|; ties prefer edges of M_prev.
Matching alpha_stable_assignment(const BipartiteWeights& w, const Matching& prev, double a);

LinearEnvelope assignment_tradeoff(const BipartiteWeights& w, const Matching& prev);

}  // namespace stablex
