// Sample materialization: coordinated subsampling and permanent random
// numbers.
#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>

#include "stablex/core.hpp"

namespace stablex {

// Seedable 64-bit generator. split() derives an independent child stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x5eed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return std::generate_canonical<double, 64>(engine_); }
  Rng split();
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// A sample is a set of keys, kept sorted.
using SampleSet = OutputSet;

// Turns S ~ p into S' ~ q with E|S delta S'| = ||p - q||_1. Entries with
// q_i = p_i consume no random draws. Keys of S absent from q are dropped.
SampleSet subsample(const SampleSet& s, const PpsDistribution& p,
                    const PpsDistribution& q, Rng& rng);

// Independent Poisson sample.
SampleSet poisson_sample(const PpsDistribution& p, Rng& rng);

// u_i in (0, 1] per key, derived from (seed, key) so values do not depend
// on lookup order. Values are cached for the table's lifetime.
class PrnTable {
 public:
  explicit PrnTable(std::uint64_t seed = 0x5eed) : seed_(seed) {}

  double operator()(Key key);
  double value(Key key) const;
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return cache_.size(); }

 private:
  std::uint64_t seed_;
  std::unordered_map<Key, double> cache_;
};

// {i : u_i <= p_i}
SampleSet prn_sample(const PpsDistribution& p, PrnTable& table);

}  // namespace stablex
