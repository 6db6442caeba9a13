// Shared value types for the stable solvers.
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace stablex {

using Key = std::uint64_t;

// Absolute tolerance for sums and continuity checks.
inline constexpr double kTolerance = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// No feasible output exists (e.g. k exceeds the positive support).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Instance too large for an exact small-scale solver.
class ScaleError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Malformed external input. line is 1-based, 0 when unknown.
class InputError : public Error {
 public:
  InputError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Entry {
  Key key;
  double value;
};

// Keyed real values with unique keys. Used for signed inputs (top-k,
// reduction) where weights may be negative.
using KeyedValues = std::vector<Entry>;

// Throws ContractViolation on duplicate keys or non-finite values.
void validate_keyed_values(const KeyedValues& values);

// Nonnegative per-key weights. Order of entries is preserved.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<Entry> entries);
  // Keys 0..n-1.
  static WeightVector from_values(const std::vector<double>& weights);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  Key key(std::size_t i) const { return entries_[i].key; }
  double weight(std::size_t i) const { return entries_[i].value; }
  std::vector<double> weights() const;
  std::vector<Key> keys() const;
  std::optional<std::size_t> index_of(Key key) const;
  std::size_t positive_count() const;
  double total() const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<Key, std::size_t> index_;
};

// Inclusion probabilities with expected size k.
class PpsDistribution {
 public:
  PpsDistribution() = default;
  // Validates probabilities in [0,1] and sum equal to k within tolerance
  // (scaled by max(1, k)).
  PpsDistribution(std::vector<Entry> probs, double k);
  // k taken as the sum of probs.
  static PpsDistribution from_probs(std::vector<Entry> probs);
  static PpsDistribution from_values(const std::vector<double>& probs);

  std::size_t size() const { return probs_.size(); }
  double target_size() const { return k_; }
  const std::vector<Entry>& entries() const { return probs_; }
  Key key(std::size_t i) const { return probs_[i].key; }
  double prob(std::size_t i) const { return probs_[i].value; }
  std::vector<double> probs() const;
  std::vector<Key> keys() const;
  // 0 for unknown keys.
  double prob_of(Key key) const;
  std::optional<std::size_t> index_of(Key key) const;

  // Same probabilities listed in the key order of w. Keys of w missing here
  // get probability 0; a key with positive probability that w lacks is a
  // ContractViolation.
  PpsDistribution aligned_to(const WeightVector& w) const;

 private:
  std::vector<Entry> probs_;
  double k_ = 0.0;
  std::unordered_map<Key, std::size_t> index_;
};

// Throws ContractViolation unless w and p list the same keys in order.
void require_aligned(const WeightVector& w, const PpsDistribution& p);

double l1_distance(const PpsDistribution& p, const PpsDistribution& q);

// Fitness in maximization orientation: -sum w_i^2 / q_i over w_i > 0.
// -inf when some positive-weight entry has q_i = 0.
double pps_fitness(const WeightVector& w, const PpsDistribution& q);

// Sum of Horvitz-Thompson variances, sum w_i^2 (1/q_i - 1).
double ht_variance(const WeightVector& w, const PpsDistribution& q);

// Output sets are sorted, duplicate-free key lists.
using OutputSet = std::vector<Key>;

OutputSet make_output_set(std::vector<Key> keys);
bool contains(const OutputSet& s, Key key);
// |a \ b|
std::size_t set_difference_size(const OutputSet& a, const OutputSet& b);
std::size_t intersection_size(const OutputSet& a, const OutputSet& b);
double set_value(const KeyedValues& x, const OutputSet& s);

}  // namespace stablex
