// Reference solvers for tests. Nothing here calls the production solvers:
// PPS quantities are recomputed in exact rationals or by a Lagrangian dual
// search, and discrete problems by exhaustive enumeration.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "stablex/core.hpp"

namespace stablex::oracle {

using Rational = boost::multiprecision::cpp_rational;

Rational rat(long long num, long long den = 1);
double to_double(const Rational& r);

struct ExactPps {
  std::vector<Rational> probs;
  Rational threshold;
};

// Solves sum min(1, w_i / tau) = k by trying every saturated prefix.
ExactPps exact_pps(const std::vector<Rational>& w, const Rational& k);

// One piece of a threshold function on the x-interval (lo, hi]:
// increase side tau(x) = b / (x - c), decrease side tau(x) = b / (c - x),
// or constant 0 when b = 0.
struct ExactPiece {
  Rational lo;
  Rational hi;
  Rational c;
  Rational b;
};

// Pieces found by classifying every entry on each interval between
// consecutive candidate thresholds.
std::vector<ExactPiece> exact_increase_pieces(const std::vector<Rational>& w,
                                              const std::vector<Rational>& p);
std::vector<ExactPiece> exact_decrease_pieces(const std::vector<Rational>& w,
                                              const std::vector<Rational>& p);

struct ExactStable {
  std::vector<Rational> probs;
  Rational tau_lo;
  Rational tau_hi;
};

// Best fit within L1 distance D via thresholds at x = D/2.
ExactStable exact_delta_opt(const std::vector<Rational>& w, const std::vector<Rational>& p,
                            const Rational& D);

// Minimizes sum w_i^2/q_i over sum q = k, 0 <= q <= 1, ||q - p||_1 <= D by
// bisection on the two Lagrange multipliers, with
// zero weights handled exactly. Throws ScaleError above 64 entries.
std::vector<double> convex_pps_oracle(const std::vector<double>& w, const std::vector<double>& p,
                                      double D);

// sum w_i^2/q_i over w_i > 0 (+inf if such q_i = 0).
double pps_cost(const std::vector<double>& w, const std::vector<double>& q);

// Random points of {0 <= q <= 1, sum q = sum p} reached by random pairwise
// mass transfers starting from p.
std::vector<double> random_feasible_point(const std::vector<double>& p, std::mt19937_64& rng,
                                          int moves = 64);

struct SetChoice {
  OutputSet set;
  double objective;
};

// argmax over family of value(S') - a * |S' \ S|; ties prefer larger
// |S' cap S|, then the earlier candidate.
SetChoice exhaustive_set_oracle(const std::vector<OutputSet>& family, const KeyedValues& x,
                                const OutputSet& s, double a);

// All k-subsets of keys. ScaleError beyond 10^6 candidates.
std::vector<OutputSet> k_subsets(const std::vector<Key>& keys, std::size_t k);

struct OracleEdge {
  std::size_t u;
  std::size_t v;
  double weight;
  Key key;
};

// All spanning trees (as sorted key sets). ScaleError beyond 10^6 edge
// subsets examined.
std::vector<OutputSet> spanning_trees(std::size_t n, const std::vector<OracleEdge>& edges);

// All permutations of 0..n-1; perm[i] is the column of row i.
std::vector<std::vector<std::size_t>> permutations(std::size_t n);

// min over |C| = s, C disjoint from fixed, of max_p min_{c in C cup F} d(p, c).
double exhaustive_kcenter_radius(const std::vector<std::vector<double>>& dist,
                                 const std::vector<std::size_t>& fixed, std::size_t s);

struct OfflineChoice {
  std::vector<OutputSet> sets;
  double objective;
};

// Enumerates every sequence of size-k sets for the offline top-k objective
// sum_j (value(S_j, x_j) - a |S_j \ S_{j-1}|). When budget >= 0 the price
// is ignored and total changeout is capped instead. first_free skips
// the changeout of the first step.
OfflineChoice exhaustive_offline_topk(const std::vector<std::vector<double>>& x, std::size_t k,
                                      const OutputSet& initial, double a, long budget,
                                      bool first_free);

}  // namespace stablex::oracle
