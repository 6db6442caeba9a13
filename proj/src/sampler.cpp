#include "stablex/sampler.hpp"

#include <algorithm>

namespace stablex {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::split() { return Rng(splitmix64(engine_())); }

SampleSet subsample(const SampleSet& s, const PpsDistribution& p,
                    const PpsDistribution& q, Rng& rng) {
  std::vector<Key> out;
  out.reserve(s.size());
  for (const Entry& e : q.entries()) {
    double pi = p.prob_of(e.key);
    double qi = e.value;
    bool in = contains(s, e.key);
    if (qi == pi) {
      if (in) out.push_back(e.key);
      continue;
    }
    if (!in) {
      if (qi > pi && rng.uniform() < (qi - pi) / (1.0 - pi)) out.push_back(e.key);
    } else if (qi < pi) {
      if (!(rng.uniform() > qi / pi)) out.push_back(e.key);
    } else {
      out.push_back(e.key);
    }
  }
  return make_output_set(std::move(out));
}

SampleSet poisson_sample(const PpsDistribution& p, Rng& rng) {
  std::vector<Key> out;
  for (const Entry& e : p.entries()) {
    if (e.value >= 1.0 || (e.value > 0.0 && rng.uniform() < e.value)) out.push_back(e.key);
  }
  return make_output_set(std::move(out));
}

double PrnTable::value(Key key) const {
  // Top 53 bits mapped to (0, 1].
  std::uint64_t h = splitmix64(splitmix64(seed_) ^ key);
  return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

double PrnTable::operator()(Key key) {
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  double u = value(key);
  cache_.emplace(key, u);
  return u;
}

SampleSet prn_sample(const PpsDistribution& p, PrnTable& table) {
  std::vector<Key> out;
  for (const Entry& e : p.entries()) {
    if (e.value > 0.0 && table(e.key) <= e.value) out.push_back(e.key);
  }
  return make_output_set(std::move(out));
}

}  // namespace stablex
