// Batch stable PPS: best-fit probabilities, best increase/decrease threshold
// functions, changeout-bounded and price-based stable distributions.
#pragma once

#include "stablex/core.hpp"
#include "stablex/piecewise.hpp"

namespace stablex {

struct PpsSolution {
  PpsDistribution dist;
  double threshold = 0.0;
};

// p_i = min{1, w_i/tau} with sum p_i = k. When every positive entry is
// saturated the largest valid tau (the smallest positive weight) is reported.
PpsSolution pps_probabilities(const WeightVector& w, double k);

struct IncreaseFunctions {
  // Total increase as a function of the threshold y (decreasing).
  PiecewiseFunction delta_plus;
  // Threshold as a function of the total increase x (decreasing).
  PiecewiseFunction tau_lo;
  bool empty = true;
  // Largest increase, sum over w_i > 0 of (1 - p_i).
  double max_increase = 0.0;
};

struct DecreaseFunctions {
  // Total decrease as a function of the threshold y (increasing).
  PiecewiseFunction delta_minus;
  // Threshold as a function of the total decrease x (increasing). Equal to 0
  // on (0, zero_mass].
  PiecewiseFunction tau_hi;
  double zero_mass = 0.0;
  bool empty = true;
  double max_decrease = 0.0;
};

// w and p must list the same keys in the same order (see
// PpsDistribution::aligned_to).
IncreaseFunctions best_increase(const WeightVector& w, const PpsDistribution& p);
DecreaseFunctions best_decrease(const WeightVector& w, const PpsDistribution& p);

// ||pps(k, w) - p||_1 with k the target size of p.
double max_changeout(const WeightVector& w, const PpsDistribution& p);

// Best fit within L1 distance D of p.
PpsDistribution delta_opt(const WeightVector& w, const PpsDistribution& p, double D);

// tau_lo(D/2)^2 - tau_hi(D/2)^2. +inf at D = 0, 0 at the maximum changeout.
double alpha_of_changeout(const WeightVector& w, const PpsDistribution& p, double D);

// Limit of alpha_of_changeout as D -> 0+. Prices at or above it keep p.
double alpha_upper(const WeightVector& w, const PpsDistribution& p);

struct AlphaSolution {
  PpsDistribution dist;
  double changeout = 0.0;
  double tau_lo = 0.0;
  double tau_hi = 0.0;
};

// Stable distribution for price a: the point of the tradeoff where
// tau_lo^2 - tau_hi^2 = a. It maximizes phi(q) - a * ||q - p||_1 / 2, i.e.
// a is charged per unit of probability mass moved.
AlphaSolution alpha_opt(const WeightVector& w, const PpsDistribution& p, double a);

// Sampled at every breakpoint of tau_lo(D/2) and tau_hi(D/2) plus both ends.
TradeoffCurve pps_tradeoff(const WeightVector& w, const PpsDistribution& p);

}  // namespace stablex
