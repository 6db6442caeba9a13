// Stable k-center clustering with farthest-point greedy completion.
#pragma once

#include <vector>

#include "stablex/core.hpp"

namespace stablex {

// Points 0..n-1 with a metric, from coordinates (Euclidean) or an explicit
// distance matrix.
class MetricPoints {
 public:
  static MetricPoints from_coordinates(std::vector<std::vector<double>> coords);
  // Validates symmetry, zero diagonal, nonnegativity and the triangle
  // inequality (relative tolerance 1e-9).
  static MetricPoints from_matrix(std::vector<std::vector<double>> dist);

  std::size_t size() const { return n_; }
  double distance(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::vector<std::vector<double>> matrix() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

// max_p min_{c in centers} d(p, c); +inf with no centers and n > 0.
double covering_radius(const MetricPoints& pts, const std::vector<std::size_t>& centers);

struct GonzalezResult {
  std::vector<std::size_t> centers;  // the s new centers, in pick order
  double radius = 0.0;               // radius of centers plus fixed
  // Distance from the next farthest point to the chosen centers; the
  // optimal radius for s free centers is at least half of it.
  double witness = 0.0;
  bool clamped = false;  // s exceeded the number of free points
};

// Adds s centers to the fixed set, each time the point farthest from all
// current centers (lowest index on ties). With no fixed centers the first
// pick is point 0.
GonzalezResult gonzalez_fixed(const MetricPoints& pts, const std::vector<std::size_t>& fixed,
                              std::size_t s);

struct KCenterResult {
  std::vector<std::size_t> centers;  // sorted
  double radius = 0.0;
  std::size_t changeout = 0;  // |C \ C_prev|
  double objective = 0.0;     // radius + a * changeout
  std::size_t candidates = 0;
};

// Keeps every subset F of prev missing at most floor(k/2) centers,
// completes it greedily, and also tries a fresh greedy k-center. Returns
// the candidate minimizing radius + a * changeout; ties go to fewer
// changes, then to the earlier candidate.
KCenterResult stable_kcenter(const MetricPoints& pts, const std::vector<std::size_t>& prev,
                             std::size_t k, double a);

// sum_{j <= floor(k/2)} C(k, j) + 1
std::size_t kcenter_candidate_count(std::size_t k);

}  // namespace stablex
