#include "stablex/topk.hpp"

#include <algorithm>
#include <cmath>

namespace stablex {
namespace {

bool heavier(const Entry& l, const Entry& r) {
  if (l.value != r.value) return l.value > r.value;
  return l.key < r.key;
}

std::vector<Entry> sorted_heaviest_first(std::vector<Entry> v) {
  std::sort(v.begin(), v.end(), heavier);
  return v;
}

}  // namespace

SwapPlan swap_plan(const KeyedValues& x, const OutputSet& s) {
  validate_keyed_values(x);
  std::vector<Entry> in;
  std::vector<Entry> out;
  for (const Entry& e : x) (contains(s, e.key) ? in : out).push_back(e);
  if (in.size() != s.size()) throw ContractViolation("swap_plan: S has keys missing from x");
  in = sorted_heaviest_first(std::move(in));
  std::reverse(in.begin(), in.end());
  out = sorted_heaviest_first(std::move(out));
  SwapPlan plan;
  for (std::size_t h = 0; h < in.size() && h < out.size(); ++h) {
    if (!(in[h].value < out[h].value)) break;
    plan.swaps.push_back({in[h].key, out[h].key, out[h].value - in[h].value});
  }
  return plan;
}

OutputSet apply_swaps(const SwapPlan& plan, const OutputSet& s, double a) {
  std::vector<Key> keys(s);
  for (const Swap& sw : plan.swaps) {
    if (!(sw.gain >= a)) break;
    std::replace(keys.begin(), keys.end(), sw.out, sw.in);
  }
  return make_output_set(std::move(keys));
}

OutputSet topk_alpha_stable(const KeyedValues& x, const OutputSet& s, double a) {
  if (a < 0.0) throw DomainError("topk_alpha_stable: negative price");
  return apply_swaps(swap_plan(x, s), s, a);
}

OutputSet top_k(const KeyedValues& x, std::size_t k) {
  if (k > x.size()) throw InfeasibleError("top_k: k exceeds the number of keys");
  std::vector<Entry> v = sorted_heaviest_first(x);
  std::vector<Key> keys;
  for (std::size_t i = 0; i < k; ++i) keys.push_back(v[i].key);
  return make_output_set(std::move(keys));
}

TopKTradeoff topk_tradeoff(const KeyedValues& x, const OutputSet& s) {
  TopKTradeoff out;
  out.plan = swap_plan(x, s);
  const auto& sw = out.plan.swaps;
  double fit = set_value(x, s);
  for (std::size_t h = 0; h <= sw.size(); ++h) {
    if (h > 0) fit += sw[h - 1].gain;
    double lower = h < sw.size() ? sw[h].gain : 0.0;
    out.curve.push_back({static_cast<double>(h), fit, lower});
  }
  return out;
}

AdditiveProblem topk_problem(std::size_t k) {
  AdditiveProblem p;
  p.fixed_size = k;
  p.ties = TiePolicy::kPreferChange;
  p.opt = [k](const KeyedValues& y, const OutputSet& favored, TiePolicy ties) {
    if (k > y.size()) throw InfeasibleError("top-k oracle: k exceeds the number of keys");
    std::vector<Entry> v(y);
    bool want_in = ties == TiePolicy::kPreferStable;
    std::sort(v.begin(), v.end(), [&](const Entry& l, const Entry& r) {
      if (l.value != r.value) return l.value > r.value;
      bool li = contains(favored, l.key) == want_in;
      bool ri = contains(favored, r.key) == want_in;
      if (li != ri) return li;
      return l.key < r.key;
    });
    std::vector<Key> keys;
    for (std::size_t i = 0; i < k; ++i) keys.push_back(v[i].key);
    return make_output_set(std::move(keys));
  };
  return p;
}

KeyedValues psi_transform(const KeyedValues& x, const PsiSpec& psi) {
  KeyedValues out(x);
  switch (psi.kind) {
    case PsiSpec::Kind::kIdentity:
      break;
    case PsiSpec::Kind::kPower:
      if (!(psi.exponent > 0.0)) throw ContractViolation("psi power must be positive");
      for (Entry& e : out) e.value = std::pow(std::abs(e.value), psi.exponent);
      break;
    case PsiSpec::Kind::kTable: {
      const auto& t = psi.table;
      if (t.empty()) throw ContractViolation("psi table is empty");
      for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i].first > t[i - 1].first) || t[i].second < t[i - 1].second) {
          throw ContractViolation("psi table must be increasing and monotone");
        }
      }
      for (Entry& e : out) {
        double v = e.value;
        if (v <= t.front().first) {
          e.value = t.front().second;
        } else if (v >= t.back().first) {
          e.value = t.back().second;
        } else {
          auto it = std::upper_bound(t.begin(), t.end(), v,
                                     [](double val, const auto& knot) { return val < knot.first; });
          const auto& hi = *it;
          const auto& lo = *(it - 1);
          double f = (v - lo.first) / (hi.first - lo.first);
          e.value = lo.second + f * (hi.second - lo.second);
        }
      }
      break;
    }
  }
  return out;
}

bool TopKState::Lighter::operator()(const Entry& l, const Entry& r) const {
  return heavier(r, l);
}

bool TopKState::Heavier::operator()(const Entry& l, const Entry& r) const {
  return heavier(l, r);
}

TopKState::TopKState(const KeyedValues& x, std::size_t k, double a)
    : TopKState(x, top_k(x, k), a) {}

TopKState::TopKState(const KeyedValues& x, const OutputSet& initial, double a) : a_(a) {
  if (a < 0.0) throw DomainError("TopKState: negative price");
  validate_keyed_values(x);
  for (const Entry& e : x) {
    values_[e.key] = e.value;
    bool in = contains(initial, e.key);
    member_[e.key] = in;
    if (in) {
      in_.insert(e);
    } else {
      out_.insert(e);
    }
  }
  if (in_.size() != initial.size()) throw ContractViolation("TopKState: initial set not in x");
}

std::optional<Swap> TopKState::update(Key key, double value) {
  if (!std::isfinite(value)) throw ContractViolation("TopKState: non-finite value");
  auto it = values_.find(key);
  if (it == values_.end()) {
    values_[key] = value;
    member_[key] = false;
    out_.insert({key, value});
  } else if (member_[key]) {
    in_.erase({key, it->second});
    it->second = value;
    in_.insert({key, value});
  } else {
    out_.erase({key, it->second});
    it->second = value;
    out_.insert({key, value});
  }
  if (in_.empty() || out_.empty()) return std::nullopt;
  Entry lo = *in_.begin();
  Entry hi = *out_.begin();
  double gain = hi.value - lo.value;
  if (!(gain > 0.0 && gain >= a_)) return std::nullopt;
  in_.erase(in_.begin());
  out_.erase(out_.begin());
  in_.insert(hi);
  out_.insert(lo);
  member_[hi.key] = true;
  member_[lo.key] = false;
  return Swap{lo.key, hi.key, gain};
}

OutputSet TopKState::current_set() const {
  std::vector<Key> keys;
  for (const Entry& e : in_) keys.push_back(e.key);
  return make_output_set(std::move(keys));
}

double TopKState::value(Key key) const {
  auto it = values_.find(key);
  return it == values_.end() ? 0.0 : it->second;
}

bool TopKDynamicOracle::Lighter::operator()(const Entry& l, const Entry& r) const {
  return heavier(r, l);
}

bool TopKDynamicOracle::Heavier::operator()(const Entry& l, const Entry& r) const {
  return heavier(l, r);
}

TopKDynamicOracle::TopKDynamicOracle(const KeyedValues& y, std::size_t k, TiePolicy ties)
    : ties_(ties) {
  OutputSet first = top_k(y, k);
  for (const Entry& e : y) {
    values_[e.key] = e.value;
    bool in = contains(first, e.key);
    member_[e.key] = in;
    if (in) {
      in_.insert(e);
    } else {
      out_.insert(e);
    }
  }
}

void TopKDynamicOracle::set_value(Key key, double y) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    values_[key] = y;
    member_[key] = false;
    out_.insert({key, y});
  } else if (member_[key]) {
    in_.erase({key, it->second});
    it->second = y;
    in_.insert({key, y});
  } else {
    out_.erase({key, it->second});
    it->second = y;
    out_.insert({key, y});
  }
  if (in_.empty() || out_.empty()) return;
  Entry lo = *in_.begin();
  Entry hi = *out_.begin();
  bool swap = hi.value > lo.value || (hi.value == lo.value && ties_ == TiePolicy::kPreferChange);
  if (!swap) return;
  in_.erase(in_.begin());
  out_.erase(out_.begin());
  in_.insert(hi);
  out_.insert(lo);
  member_[hi.key] = true;
  member_[lo.key] = false;
}

OutputSet TopKDynamicOracle::current() const {
  std::vector<Key> keys;
  for (const Entry& e : in_) keys.push_back(e.key);
  return make_output_set(std::move(keys));
}

namespace {

using Mask = unsigned;

std::vector<Mask> size_k_masks(std::size_t n, std::size_t k) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (1u << n); ++m) {
    if (static_cast<std::size_t>(__builtin_popcount(m)) == k) out.push_back(m);
  }
  return out;
}

OutputSet mask_to_set(Mask m) {
  OutputSet s;
  for (Key i = 0; m >> i; ++i) {
    if ((m >> i) & 1u) s.push_back(i);
  }
  return s;
}

Mask set_to_mask(const OutputSet& s, std::size_t n) {
  Mask m = 0;
  for (Key k : s) {
    if (k >= n) throw ContractViolation("offline: initial set key out of range");
    m |= 1u << k;
  }
  return m;
}

double mask_value(const std::vector<double>& x, Mask m) {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((m >> i) & 1u) v += x[i];
  }
  return v;
}

}  // namespace

OfflineResult offline_optimal(const std::vector<std::vector<double>>& x, std::size_t k,
                              const std::optional<OutputSet>& initial, const OfflineCost& cost) {
  OfflineResult result;
  std::size_t steps = x.size();
  if (steps == 0) return result;
  std::size_t n = x.front().size();
  for (const auto& row : x) {
    if (row.size() != n) throw InputError("offline: ragged value matrix");
  }
  if (n > 8 || steps > 8 || k > 3) throw ScaleError("offline: limited to n <= 8, N <= 8, k <= 3");
  if (k > n) throw InfeasibleError("offline: k exceeds the number of keys");
  std::optional<Mask> start;
  if (initial) {
    if (initial->size() != k) throw ContractViolation("offline: initial set must have size k");
    start = set_to_mask(*initial, n);
  }
  std::vector<Mask> masks = size_k_masks(n, k);
  std::size_t m = masks.size();
  auto change = [](Mask next, Mask prev) {
    return static_cast<std::size_t>(__builtin_popcount(next & ~prev));
  };

  // Budget levels: one level per unit of changeout (priced mode uses one).
  std::size_t levels = cost.budget ? std::min(*cost.budget, steps * k) + 1 : 1;
  double neg = -kInfinity;
  // best[j][s * levels + u], parent index for reconstruction.
  std::vector<std::vector<double>> best(steps, std::vector<double>(m * levels, neg));
  std::vector<std::vector<std::size_t>> from(steps, std::vector<std::size_t>(m * levels, 0));
  for (std::size_t s = 0; s < m; ++s) {
    std::size_t c = start ? change(masks[s], *start) : 0;
    double v = mask_value(x[0], masks[s]);
    if (cost.budget) {
      if (c < levels) best[0][s * levels + c] = v;
    } else {
      best[0][s] = v - cost.a * static_cast<double>(c);
    }
  }
  for (std::size_t j = 1; j < steps; ++j) {
    for (std::size_t s = 0; s < m; ++s) {
      double v = mask_value(x[j], masks[s]);
      for (std::size_t t = 0; t < m; ++t) {
        std::size_t c = change(masks[s], masks[t]);
        for (std::size_t u = 0; u < levels; ++u) {
          double prev = best[j - 1][t * levels + u];
          if (prev == neg) continue;
          std::size_t nu = u;
          double cand = prev + v;
          if (cost.budget) {
            nu = u + c;
            if (nu >= levels) continue;
          } else {
            cand -= cost.a * static_cast<double>(c);
          }
          double& slot = best[j][s * levels + nu];
          if (cand > slot) {
            slot = cand;
            from[j][s * levels + nu] = t * levels + u;
          }
        }
      }
    }
  }
  std::size_t arg = 0;
  double top = neg;
  for (std::size_t idx = 0; idx < m * levels; ++idx) {
    if (best[steps - 1][idx] > top) {
      top = best[steps - 1][idx];
      arg = idx;
    }
  }
  if (top == neg) throw InfeasibleError("offline: no sequence within budget");
  result.objective = top;
  result.sets.assign(steps, {});
  for (std::size_t j = steps; j-- > 0;) {
    result.sets[j] = mask_to_set(masks[arg / levels]);
    if (j > 0) arg = from[j][arg];
  }
  for (std::size_t j = 0; j < steps; ++j) {
    if (j == 0) {
      if (initial) result.changeout += set_difference_size(result.sets[0], *initial);
    } else {
      result.changeout += set_difference_size(result.sets[j], result.sets[j - 1]);
    }
  }
  return result;
}

double offline_objective(const std::vector<std::vector<double>>& x,
                         const std::vector<OutputSet>& sets,
                         const std::optional<OutputSet>& initial, double a) {
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (Key key : sets[j]) total += x[j][key];
    if (j > 0) {
      total -= a * static_cast<double>(set_difference_size(sets[j], sets[j - 1]));
    } else if (initial) {
      total -= a * static_cast<double>(set_difference_size(sets[0], *initial));
    }
  }
  return total;
}

std::vector<OutputSet> greedy_sequence(const std::vector<std::vector<double>>& x, std::size_t k,
                                       const std::optional<OutputSet>& initial, double a) {
  std::vector<OutputSet> out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    KeyedValues row;
    for (std::size_t i = 0; i < x[j].size(); ++i) row.push_back({i, x[j][i]});
    if (j == 0 && !initial) {
      out.push_back(top_k(row, k));
    } else {
      out.push_back(topk_alpha_stable(row, j == 0 ? *initial : out.back(), a));
    }
  }
  return out;
}

}  // namespace stablex
