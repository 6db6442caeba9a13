#include "stablex/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stablex {
namespace {

std::unordered_map<Key, std::size_t> build_index(const std::vector<Entry>& entries,
                                                 const char* what) {
  std::unordered_map<Key, std::size_t> index;
  index.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!index.emplace(entries[i].key, i).second) {
      throw ContractViolation(std::string(what) + ": duplicate key " +
                              std::to_string(entries[i].key));
    }
  }
  return index;
}

}  // namespace

void validate_keyed_values(const KeyedValues& values) {
  for (const Entry& e : values) {
    if (!std::isfinite(e.value)) {
      throw ContractViolation("non-finite value for key " + std::to_string(e.key));
    }
  }
  build_index(values, "keyed values");
}

WeightVector::WeightVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (const Entry& e : entries_) {
    if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
      throw ContractViolation("weight must be finite and nonnegative (key " +
                              std::to_string(e.key) + ")");
    }
  }
  index_ = build_index(entries_, "weight vector");
}

WeightVector WeightVector::from_values(const std::vector<double>& weights) {
  std::vector<Entry> entries;
  entries.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) entries.push_back({i, weights[i]});
  return WeightVector(std::move(entries));
}

std::vector<double> WeightVector::weights() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.value);
  return out;
}

std::vector<Key> WeightVector::keys() const {
  std::vector<Key> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.key);
  return out;
}

std::optional<std::size_t> WeightVector::index_of(Key key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t WeightVector::positive_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [](const Entry& e) { return e.value > 0.0; }));
}

double WeightVector::total() const {
  double s = 0.0;
  for (const Entry& e : entries_) s += e.value;
  return s;
}

PpsDistribution::PpsDistribution(std::vector<Entry> probs, double k)
    : probs_(std::move(probs)), k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ContractViolation("target size k must be positive");
  }
  double sum = 0.0;
  for (Entry& e : probs_) {
    if (!(e.value >= -kTolerance && e.value <= 1.0 + kTolerance)) {
      throw ContractViolation("probability outside [0,1] for key " +
                              std::to_string(e.key));
    }
    e.value = std::clamp(e.value, 0.0, 1.0);
    sum += e.value;
  }
  if (std::abs(sum - k) > kTolerance * std::max(1.0, k)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << sum << ", expected " << k;
    throw ContractViolation(msg.str());
  }
  index_ = build_index(probs_, "distribution");
}

PpsDistribution PpsDistribution::from_probs(std::vector<Entry> probs) {
  double sum = 0.0;
  for (const Entry& e : probs) sum += e.value;
  return PpsDistribution(std::move(probs), sum);
}

PpsDistribution PpsDistribution::from_values(const std::vector<double>& probs) {
  std::vector<Entry> entries;
  entries.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) entries.push_back({i, probs[i]});
  return from_probs(std::move(entries));
}

std::vector<double> PpsDistribution::probs() const {
  std::vector<double> out;
  out.reserve(probs_.size());
  for (const Entry& e : probs_) out.push_back(e.value);
  return out;
}

std::vector<Key> PpsDistribution::keys() const {
  std::vector<Key> out;
  out.reserve(probs_.size());
  for (const Entry& e : probs_) out.push_back(e.key);
  return out;
}

double PpsDistribution::prob_of(Key key) const {
  auto it = index_.find(key);
  return it == index_.end() ? 0.0 : probs_[it->second].value;
}

std::optional<std::size_t> PpsDistribution::index_of(Key key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PpsDistribution PpsDistribution::aligned_to(const WeightVector& w) const {
  std::vector<Entry> out;
  out.reserve(w.size());
  for (const Entry& e : w.entries()) out.push_back({e.key, prob_of(e.key)});
  for (const Entry& e : probs_) {
    if (e.value > 0.0 && !w.index_of(e.key)) {
      throw ContractViolation("key " + std::to_string(e.key) +
                              " has positive probability but no weight");
    }
  }
  return PpsDistribution(std::move(out), k_);
}

void require_aligned(const WeightVector& w, const PpsDistribution& p) {
  if (w.size() != p.size()) {
    throw ContractViolation("weights and distribution differ in length");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.key(i) != p.key(i)) {
      throw ContractViolation("weights and distribution list keys in different order");
    }
  }
}

double l1_distance(const PpsDistribution& p, const PpsDistribution& q) {
  double d = 0.0;
  for (const Entry& e : q.entries()) d += std::abs(e.value - p.prob_of(e.key));
  for (const Entry& e : p.entries()) {
    if (!q.index_of(e.key)) d += e.value;
  }
  return d;
}

double pps_fitness(const WeightVector& w, const PpsDistribution& q) {
  require_aligned(w, q);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double wi = w.weight(i);
    if (wi <= 0.0) continue;
    if (q.prob(i) <= 0.0) return -kInfinity;
    s += wi * wi / q.prob(i);
  }
  return -s;
}

double ht_variance(const WeightVector& w, const PpsDistribution& q) {
  require_aligned(w, q);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double wi = w.weight(i);
    if (wi <= 0.0) continue;
    if (q.prob(i) <= 0.0) return kInfinity;
    s += wi * wi * (1.0 / q.prob(i) - 1.0);
  }
  return s;
}

OutputSet make_output_set(std::vector<Key> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

bool contains(const OutputSet& s, Key key) {
  return std::binary_search(s.begin(), s.end(), key);
}

std::size_t set_difference_size(const OutputSet& a, const OutputSet& b) {
  std::size_t n = 0;
  for (Key k : a) n += contains(b, k) ? 0 : 1;
  return n;
}

std::size_t intersection_size(const OutputSet& a, const OutputSet& b) {
  return a.size() - set_difference_size(a, b);
}

double set_value(const KeyedValues& x, const OutputSet& s) {
  double v = 0.0;
  for (const Entry& e : x) {
    if (contains(s, e.key)) v += e.value;
  }
  return v;
}

}  // namespace stablex
