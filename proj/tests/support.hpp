// Random instance generators shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "stablex/core.hpp"
#include "stablex/oracle/oracle.hpp"

namespace stablex::testing {

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::size_t pick(std::mt19937_64& g, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

struct PpsInstance {
  std::vector<double> w;
  std::vector<double> p;
  double k = 1.0;
};

// Weights with some zeros, k an integer up to the positive count, p a random
// point of the size-k polytope.
inline PpsInstance random_pps_instance(std::mt19937_64& g, std::size_t max_n) {
  PpsInstance inst;
  std::size_t n = pick(g, 2, max_n);
  inst.w.resize(n);
  std::size_t positive = 0;
  for (double& x : inst.w) {
    x = pick(g, 0, 4) == 0 ? 0.0 : uniform(g, 0.1, 10.0);
    positive += x > 0.0;
  }
  if (positive == 0) {
    inst.w[0] = 1.0;
    positive = 1;
  }
  inst.k = static_cast<double>(pick(g, 1, positive));
  std::vector<double> base(n, inst.k / static_cast<double>(n));
  inst.p = oracle::random_feasible_point(base, g, 50);
  // Snap rounding residue of the transfers to the bounds and put the
  // difference on an interior entry.
  double drift = 0.0;
  for (double& v : inst.p) {
    double snapped = v < 1e-12 ? 0.0 : (v > 1.0 - 1e-12 ? 1.0 : v);
    drift += v - snapped;
    v = snapped;
  }
  for (double& v : inst.p) {
    if (v > 0.0 && v < 1.0 && v + drift >= 1e-12 && v + drift <= 1.0 - 1e-12) {
      v += drift;
      break;
    }
  }
  return inst;
}

// Distinct random values keyed 0..n-1.
inline KeyedValues random_values(std::mt19937_64& g, std::size_t n, double lo = -5.0,
                                 double hi = 10.0) {
  KeyedValues x;
  for (std::size_t i = 0; i < n; ++i) x.push_back({i, uniform(g, lo, hi)});
  return x;
}

inline OutputSet random_subset(std::mt19937_64& g, std::size_t n, std::size_t k) {
  std::vector<Key> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = i;
  std::shuffle(keys.begin(), keys.end(), g);
  keys.resize(k);
  return make_output_set(keys);
}

}  // namespace stablex::testing
