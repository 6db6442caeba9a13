#include "stablex/assignment.hpp"

#include <cmath>

namespace stablex {
namespace {

// Cost compared by primary value, then by tie score.
struct Lex {
  double a = 0.0;
  double b = 0.0;
  Lex operator+(const Lex& o) const { return {a + o.a, b + o.b}; }
  Lex operator-(const Lex& o) const { return {a - o.a, b - o.b}; }
  Lex& operator+=(const Lex& o) { return *this = *this + o; }
  Lex& operator-=(const Lex& o) { return *this = *this - o; }
  bool operator<(const Lex& o) const { return a != o.a ? a < o.a : b < o.b; }
};

// Minimum-cost perfect assignment; cost[i][j] for rows and columns 0..n-1.
Matching hungarian(const std::vector<std::vector<Lex>>& cost) {
  std::size_t n = cost.size();
  const Lex inf{kInfinity, 0.0};
  std::vector<Lex> u(n + 1), v(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<Lex> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0];
      std::size_t j1 = 0;
      Lex delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        Lex cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Matching m(n);
  for (std::size_t j = 1; j <= n; ++j) m[p[j] - 1] = j - 1;
  return m;
}

}  // namespace

BipartiteWeights::BipartiteWeights(std::vector<std::vector<double>> rows) : n_(rows.size()) {
  w_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw ContractViolation("weight matrix must be square");
    for (double x : r) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ContractViolation("assignment weights must be finite and nonnegative");
      }
      w_.push_back(x);
    }
  }
}

KeyedValues BipartiteWeights::edge_values() const {
  KeyedValues x;
  x.reserve(w_.size());
  for (std::size_t e = 0; e < w_.size(); ++e) x.push_back({e, w_[e]});
  return x;
}

OutputSet matching_keys(const Matching& m) {
  std::vector<Key> keys;
  for (std::size_t i = 0; i < m.size(); ++i) keys.push_back(i * m.size() + m[i]);
  return make_output_set(std::move(keys));
}

Matching keys_to_matching(const OutputSet& keys, std::size_t n) {
  if (keys.size() != n) throw ContractViolation("matching must have n edges");
  Matching m(n, n);
  std::vector<bool> col(n, false);
  for (Key k : keys) {
    std::size_t i = k / n;
    std::size_t j = k % n;
    if (i >= n || m[i] != n || col[j]) throw ContractViolation("keys are not a perfect matching");
    m[i] = j;
    col[j] = true;
  }
  return m;
}

double matching_weight(const BipartiteWeights& w, const Matching& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += w.at(i, m[i]);
  return s;
}

AdditiveProblem assignment_problem(std::size_t n) {
  AdditiveProblem p;
  p.fixed_size = n;
  p.opt = [n](const KeyedValues& y, const OutputSet& favored, TiePolicy ties) {
    if (y.size() != n * n) throw ContractViolation("assignment oracle needs n*n edge values");
    double score = ties == TiePolicy::kPreferStable ? -1.0 : 1.0;
    std::vector<std::vector<Lex>> cost(n, std::vector<Lex>(n));
    for (const Entry& e : y) {
      if (e.key >= n * n) throw ContractViolation("edge key out of range");
      cost[e.key / n][e.key % n] = {-e.value, contains(favored, e.key) ? score : 0.0};
    }
    return matching_keys(hungarian(cost));
  };
  return p;
}

Matching max_assignment(const BipartiteWeights& w) {
  std::size_t n = w.size();
  return keys_to_matching(assignment_problem(n).opt(w.edge_values(), {}, TiePolicy::kPreferStable),
                          n);
}

Matching alpha_stable_assignment(const BipartiteWeights& w, const Matching& prev, double a) {
  std::size_t n = w.size();
  OutputSet s = matching_keys(prev);
  keys_to_matching(s, n);
  return keys_to_matching(alpha_stable(assignment_problem(n), w.edge_values(), s, a), n);
}

LinearEnvelope assignment_tradeoff(const BipartiteWeights& w, const Matching& prev) {
  std::size_t n = w.size();
  OutputSet s = matching_keys(prev);
  keys_to_matching(s, n);
  return parametric_envelope(assignment_problem(n), w.edge_values(), s);
}

}  // namespace stablex
