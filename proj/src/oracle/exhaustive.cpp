#include <algorithm>
#include <functional>
#include <numeric>

#include "stablex/oracle/oracle.hpp"

namespace stablex::oracle {
namespace {

constexpr std::size_t kMaxCandidates = 1000000;

double lookup(const KeyedValues& x, Key key) {
  for (const Entry& e : x) {
    if (e.key == key) return e.value;
  }
  return 0.0;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) v = parent[v];
  return v;
}

}  // namespace

SetChoice exhaustive_set_oracle(const std::vector<OutputSet>& family, const KeyedValues& x,
                                const OutputSet& s, double a) {
  if (family.empty()) throw InfeasibleError("empty feasible family");
  if (family.size() > kMaxCandidates) throw ScaleError("family too large");
  SetChoice best{{}, -kInfinity};
  std::size_t best_common = 0;
  for (const OutputSet& cand : family) {
    double value = 0.0;
    std::size_t common = 0;
    for (Key k : cand) {
      value += lookup(x, k);
      if (std::binary_search(s.begin(), s.end(), k)) ++common;
    }
    double obj = value - a * static_cast<double>(cand.size() - common);
    if (obj > best.objective || (obj == best.objective && common > best_common)) {
      best = {cand, obj};
      best_common = common;
    }
  }
  return best;
}

std::vector<OutputSet> k_subsets(const std::vector<Key>& keys, std::size_t k) {
  std::vector<Key> sorted(keys);
  std::sort(sorted.begin(), sorted.end());
  std::vector<OutputSet> out;
  if (k > sorted.size()) return out;
  std::vector<bool> mask(sorted.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(k), true);
  do {
    OutputSet s;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (mask[i]) s.push_back(sorted[i]);
    }
    out.push_back(std::move(s));
    if (out.size() > kMaxCandidates) throw ScaleError("too many subsets");
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

std::vector<OutputSet> spanning_trees(std::size_t n, const std::vector<OracleEdge>& edges) {
  std::vector<OutputSet> out;
  if (n == 0) return out;
  if (n == 1) return {OutputSet{}};
  std::size_t examined = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (++examined > 50 * kMaxCandidates) throw ScaleError("too many edge subsets");
    if (chosen.size() == n - 1) {
      std::vector<std::size_t> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      for (std::size_t e : chosen) {
        std::size_t a = find_root(parent, edges[e].u);
        std::size_t b = find_root(parent, edges[e].v);
        if (a == b) return;
        parent[a] = b;
      }
      OutputSet keys;
      for (std::size_t e : chosen) keys.push_back(edges[e].key);
      std::sort(keys.begin(), keys.end());
      out.push_back(std::move(keys));
      return;
    }
    for (std::size_t e = start; e < edges.size(); ++e) {
      if (edges.size() - e < n - 1 - chosen.size()) break;
      chosen.push_back(e);
      rec(e + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<std::vector<std::size_t>> permutations(std::size_t n) {
  if (n > 9) throw ScaleError("permutation enumeration limited to n <= 9");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

double exhaustive_kcenter_radius(const std::vector<std::vector<double>>& dist,
                                 const std::vector<std::size_t>& fixed, std::size_t s) {
  std::size_t n = dist.size();
  std::vector<std::size_t> free_pts;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(fixed.begin(), fixed.end(), i) == fixed.end()) free_pts.push_back(i);
  }
  s = std::min(s, free_pts.size());
  std::vector<Key> ids(free_pts.begin(), free_pts.end());
  double best = kInfinity;
  for (const OutputSet& c : k_subsets(ids, s)) {
    double r = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      double near = kInfinity;
      for (std::size_t f : fixed) near = std::min(near, dist[p][f]);
      for (Key ci : c) near = std::min(near, dist[p][ci]);
      r = std::max(r, near);
    }
    best = std::min(best, r);
  }
  return best;
}

OfflineChoice exhaustive_offline_topk(const std::vector<std::vector<double>>& x, std::size_t k,
                                      const OutputSet& initial, double a, long budget,
                                      bool first_free) {
  if (x.empty()) return {{}, 0.0};
  std::size_t n = x.front().size();
  std::vector<Key> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<OutputSet> sets = k_subsets(ids, k);
  std::size_t steps = x.size();
  double total = 1.0;
  for (std::size_t j = 0; j < steps; ++j) total *= static_cast<double>(sets.size());
  if (total > 5e7) throw ScaleError("offline enumeration too large");

  OfflineChoice best{{}, -kInfinity};
  std::vector<OutputSet> path;
  std::function<void(std::size_t, const OutputSet&, double, long)> rec =
      [&](std::size_t j, const OutputSet& prev, double value, long used) {
        if (j == steps) {
          if (value > best.objective) best = {path, value};
          return;
        }
        for (const OutputSet& s : sets) {
          long change = 0;
          for (Key key : s) change += std::binary_search(prev.begin(), prev.end(), key) ? 0 : 1;
          if (j == 0 && first_free) change = 0;
          double v = value;
          for (Key key : s) v += x[j][key];
          long u = used;
          if (budget >= 0) {
            u += change;
            if (u > budget) continue;
          } else {
            v -= a * static_cast<double>(change);
          }
          path.push_back(s);
          rec(j + 1, s, v, u);
          path.pop_back();
        }
      };
  rec(0, initial, 0.0, 0);
  return best;
}

}  // namespace stablex::oracle
