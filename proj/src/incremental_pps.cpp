#include "stablex/incremental_pps.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "stablex/detail/roots.hpp"
#include "stablex/pps.hpp"

namespace stablex {
namespace {

using detail::WeightKey;
using detail::WeightTreap;

struct Member {
  WeightKey item;
  int stretch;
};

struct MemberLess {
  bool operator()(const Member& a, const Member& b) const { return a.item < b.item; }
};
struct MemberGreater {
  bool operator()(const Member& a, const Member& b) const { return b.item < a.item; }
};

constexpr WeightKey kMinItem{-kInfinity, 0};

}  // namespace

// Walks thresholds downward from +inf. Each stretch enters at tau_s with
// its unsaturated members; each member exits (saturates) at y = w_i.
class StableState::IncreaseWalker {
 public:
  explicit IncreaseWalker(StableState& st) : st_(st), it_(st.index_.rbegin()) {}

  bool exhausted() const { return it_ == st_.index_.rend() && exits_.empty(); }

  // Largest pending event value, 0 when none.
  double next_value() const {
    double v = 0.0;
    if (it_ != st_.index_.rend()) v = it_->first;
    if (!exits_.empty()) v = std::max(v, exits_.top().item.weight);
    return v;
  }

  void advance() {
    double v = next_value();
    y_ = v;
    while (it_ != st_.index_.rend() && it_->first == v) {
      enter(it_->second);
      ++it_;
    }
    while (!exits_.empty() && exits_.top().item.weight == v) {
      Member m = exits_.top();
      exits_.pop();
      ++st_.events_;
      W_ -= m.item.weight;
      C_ += 1.0;
      --active_;
      if (auto p = st_.treap_.prev(st_.stretches_[m.stretch].root, m.item)) {
        exits_.push({*p, m.stretch});
      }
    }
    if (active_ == 0) W_ = 0.0;
  }

  // Threshold on the current segment; x_lo <= x <= x_hi.
  double tau(double x) const { return W_ / (x - C_); }
  double x_hi() const {
    double v = next_value();
    if (W_ == 0.0) return C_;
    return v > 0.0 ? C_ + W_ / v : kInfinity;
  }
  double dtau2(double x) const {
    double y = tau(x);
    return -2.0 * y * y * y / W_;
  }

  double W() const { return W_; }
  double top() const { return y_; }
  const std::vector<int>& entered() const { return entered_; }

 private:
  void enter(int s) {
    ++st_.events_;
    const Stretch& str = st_.stretches_[s];
    WeightKey bound{str.tau, 0};
    auto [cnt, sum] = st_.treap_.below(str.root, bound);
    entered_.push_back(s);
    if (cnt == 0) return;
    W_ += sum;
    if (std::isfinite(str.tau)) C_ -= sum / str.tau;
    active_ += static_cast<long>(cnt);
    if (auto p = st_.treap_.prev(str.root, bound)) exits_.push({*p, s});
  }

  StableState& st_;
  std::set<std::pair<double, int>>::reverse_iterator it_;
  std::priority_queue<Member, std::vector<Member>, MemberLess> exits_;
  std::vector<int> entered_;
  double C_ = 0.0;
  double W_ = 0.0;
  long active_ = 0;
  double y_ = kInfinity;
};

// Walks thresholds upward from 0 after the zero-weight pool is used up.
// Each stretch enters at tau_s with its unsaturated members; saturated
// members start decreasing at y = w_i.
class StableState::DecreaseWalker {
 public:
  explicit DecreaseWalker(StableState& st) : st_(st), it_(st.index_.begin()) {
    for (const auto& [key, p] : st.zero_pool_) zero_mass_ += p;
    C_ = zero_mass_;
  }

  bool exhausted() const { return next_value() == kInfinity; }

  double next_value() const {
    double v = kInfinity;
    if (it_ != st_.index_.end()) v = it_->first;
    if (!heap_.empty()) v = std::min(v, heap_.top().item.weight);
    return v;
  }

  void advance() {
    double v = next_value();
    y_ = v;
    while (it_ != st_.index_.end() && it_->first == v) {
      enter(it_->second);
      ++it_;
    }
    while (!heap_.empty() && heap_.top().item.weight == v) {
      Member m = heap_.top();
      heap_.pop();
      ++st_.events_;
      W_ += m.item.weight;
      C_ += 1.0;
      if (auto n = st_.treap_.next(st_.stretches_[m.stretch].root, m.item)) {
        heap_.push({*n, m.stretch});
      }
    }
  }

  double tau(double x) const { return W_ / (C_ - x); }
  double x_hi() const {
    double v = next_value();
    return v == kInfinity ? C_ : C_ - W_ / v;
  }
  double dtau2(double x) const {
    double y = tau(x);
    return 2.0 * y * y * y / W_;
  }

  double zero_mass() const { return zero_mass_; }
  double top() const { return y_; }
  const std::vector<int>& entered() const { return entered_; }

 private:
  void enter(int s) {
    ++st_.events_;
    const Stretch& str = st_.stretches_[s];
    WeightKey bound{str.tau, 0};
    auto [cnt, sum] = st_.treap_.below(str.root, bound);
    entered_.push_back(s);
    W_ += sum;
    if (cnt > 0) C_ += sum / str.tau;
    if (auto m = st_.treap_.lower_bound(str.root, bound)) heap_.push({*m, s});
  }

  StableState& st_;
  std::set<std::pair<double, int>>::iterator it_;
  std::priority_queue<Member, std::vector<Member>, MemberGreater> heap_;
  std::vector<int> entered_;
  double zero_mass_ = 0.0;
  double C_ = 0.0;
  double W_ = 0.0;
  double y_ = 0.0;
};

StableState StableState::build(const WeightVector& w, double k, double a,
                               std::uint64_t seed) {
  if (!(a >= 0.0)) throw DomainError("price must be nonnegative");
  PpsSolution sol = pps_probabilities(w, k);
  StableState st(k, a, seed);
  int root = WeightTreap::kNil;
  st.new_stretch(sol.threshold, WeightTreap::kNil);
  for (const Entry& e : w.entries()) {
    if (e.value <= 0.0) continue;
    root = st.treap_.insert(root, {e.value, e.key});
    st.entries_[e.key] = {e.value, 0};
    ++st.positive_;
  }
  st.stretches_[0].root = root;
  return st;
}

int StableState::find(int s) const {
  while (parent_[s] != s) {
    parent_[s] = parent_[parent_[s]];
    s = parent_[s];
  }
  return s;
}

int StableState::new_stretch(double tau, int root) {
  int id = static_cast<int>(stretches_.size());
  stretches_.push_back({tau, root});
  parent_.push_back(id);
  index_.insert({tau, id});
  return id;
}

void StableState::drop_from_index(int s) { index_.erase({stretches_[s].tau, s}); }

double StableState::prob_in(int s, double w) const {
  double tau = stretches_[s].tau;
  if (tau == kInfinity) return 0.0;
  return std::min(1.0, w / tau);
}

void StableState::detach(Key key, EntryState& e) {
  if (e.stretch >= 0) {
    int s = find(e.stretch);
    stretches_[s].root = treap_.erase(stretches_[s].root, {e.weight, key});
    if (stretches_[s].root == WeightTreap::kNil) drop_from_index(s);
    e.stretch = -1;
  } else {
    zero_pool_.erase(key);
  }
}

int StableState::merge_into(const std::vector<int>& ids, double tau) {
  int head = ids.front();
  drop_from_index(head);
  for (std::size_t i = 1; i < ids.size(); ++i) {
    int s = ids[i];
    drop_from_index(s);
    stretches_[head].root = treap_.unite(stretches_[head].root, stretches_[s].root);
    stretches_[s].root = WeightTreap::kNil;
    parent_[s] = head;
  }
  stretches_[head].tau = tau;
  index_.insert({tau, head});
  return head;
}

double StableState::probability(Key key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return 0.0;
  if (it->second.stretch >= 0) return prob_in(find(it->second.stretch), it->second.weight);
  auto z = zero_pool_.find(key);
  return z == zero_pool_.end() ? 0.0 : z->second;
}

double StableState::weight(Key key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second.weight;
}

double StableState::tau_lo() const {
  for (auto it = index_.rbegin(); it != index_.rend(); ++it) {
    const Stretch& s = stretches_[it->second];
    auto lo = treap_.lower_bound(s.root, kMinItem);
    if (lo && lo->weight < s.tau) return s.tau;
  }
  return 0.0;
}

double StableState::tau_hi() const {
  if (!zero_pool_.empty()) return 0.0;
  double best = kInfinity;
  for (const auto& [tau, id] : index_) {
    if (tau >= best || tau == kInfinity) break;
    auto lo = treap_.lower_bound(stretches_[id].root, kMinItem);
    if (lo) best = std::min(best, std::max(tau, lo->weight));
  }
  return best;
}

PpsDistribution StableState::current_distribution() const {
  std::vector<Entry> probs;
  probs.reserve(entries_.size());
  for (const auto& [key, e] : entries_) probs.push_back({key, probability(key)});
  std::sort(probs.begin(), probs.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  return PpsDistribution(std::move(probs), k_);
}

WeightVector StableState::current_weights() const {
  std::vector<Entry> ws;
  ws.reserve(entries_.size());
  for (const auto& [key, e] : entries_) ws.push_back({key, e.weight});
  std::sort(ws.begin(), ws.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
  return WeightVector(std::move(ws));
}

SampleSet StableState::current_sample() const {
  std::vector<Key> out;
  for (const auto& [key, e] : entries_) {
    if (prn_.value(key) <= probability(key)) out.push_back(key);
  }
  return make_output_set(std::move(out));
}

ChangeReport StableState::update_weight(Key key, double new_weight) {
  if (!(new_weight >= 0.0) || !std::isfinite(new_weight)) {
    throw DomainError("weight must be finite and nonnegative");
  }
  ChangeReport report;
  std::uint64_t work0 = total_work();
  auto it = entries_.find(key);
  double old_weight = it == entries_.end() ? 0.0 : it->second.weight;
  std::size_t positive = positive_ - (old_weight > 0.0 ? 1 : 0) + (new_weight > 0.0 ? 1 : 0);
  if (static_cast<double>(positive) < k_ - kTolerance * std::max(1.0, k_)) {
    throw InfeasibleError("update leaves fewer than k positive weights");
  }
  if (it == entries_.end() && new_weight == 0.0) return report;

  double p_old = probability(key);
  if (it == entries_.end()) it = entries_.emplace(key, EntryState{0.0, -1}).first;
  detach(key, it->second);
  if (new_weight > 0.0) {
    double tau = p_old > 0.0 ? new_weight / p_old : kInfinity;
    int root = treap_.insert(WeightTreap::kNil, {new_weight, key});
    it->second = {new_weight, new_stretch(tau, root)};
  } else if (p_old > 0.0) {
    zero_pool_[key] = p_old;
    it->second = {0.0, -1};
  } else {
    entries_.erase(it);
  }
  positive_ = positive;

  IncreaseWalker inc(*this);
  DecreaseWalker dec(*this);
  auto finish = [&]() {
    report.work = total_work() - work0;
    return report;
  };
  while (inc.W() == 0.0 && !inc.exhausted()) inc.advance();
  if (inc.W() == 0.0) return finish();
  bool zero = dec.zero_mass() > 0.0;
  if (!zero) {
    if (dec.exhausted()) return finish();
    dec.advance();
  }
  auto lo_at = [&](double x) { return inc.tau(x); };
  auto hi_at = [&](double x) { return zero ? 0.0 : dec.tau(x); };
  auto g = [&](double x) {
    double l = lo_at(x);
    double h = hi_at(x);
    return l * l - h * h;
  };
  double top_hi = zero ? 0.0 : dec.top();
  if (inc.top() * inc.top() - top_hi * top_hi <= a_) return finish();
  report.repaired = true;

  double x = 0.0;
  double xs = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
  while (true) {
    double xi = inc.x_hi();
    double xd = zero ? dec.zero_mass() : dec.x_hi();
    double xb = std::max(x, std::min(xi, xd));
    if (g(xb) <= a_) {
      xs = detail::solve_decreasing(
          [&](double t) { return g(t) - a_; },
          [&](double t) { return inc.dtau2(t) - (zero ? 0.0 : dec.dtau2(t)); }, x, xb);
      y_lo = std::clamp(lo_at(xs), inc.next_value(), inc.top());
      y_hi = zero ? 0.0 : std::clamp(hi_at(xs), dec.top(), dec.next_value());
      break;
    }
    double left_lo = std::max(lo_at(xb), inc.next_value());
    double left_hi = zero ? 0.0 : std::min(hi_at(xb), dec.next_value());
    bool stop = false;
    if (xi <= xb) {
      inc.advance();
      while (inc.W() == 0.0 && !inc.exhausted()) inc.advance();
      stop = stop || inc.W() == 0.0;
    }
    if (xd <= xb) {
      if (dec.exhausted()) {
        stop = true;
      } else {
        zero = false;
        dec.advance();
      }
    }
    if (stop || g(xb) <= a_) {
      xs = xb;
      y_lo = left_lo;
      y_hi = left_hi;
      zero = left_hi == 0.0;
      break;
    }
    x = xb;
  }

  auto note = [&](Key k, double before, double after) {
    if (before == after) return;
    report.changes.push_back({k, before, after});
    report.l1 += std::abs(after - before);
    double u = prn_.value(k);
    bool was = u <= before;
    bool now = u <= after;
    if (was && !now) report.removed.push_back(k);
    if (!was && now) report.inserted.push_back(k);
  };

  std::vector<int> up;
  for (int s : inc.entered()) {
    if (stretches_[s].tau > y_lo) up.push_back(s);
  }
  std::vector<int> down;
  if (zero) {
    double r = xs;
    for (auto zit = zero_pool_.begin(); zit != zero_pool_.end() && r > 0.0;) {
      double p = zit->second;
      double q = std::max(0.0, p - r);
      r -= p;
      note(zit->first, p, q);
      if (q == 0.0) {
        entries_.erase(zit->first);
        zit = zero_pool_.erase(zit);
      } else {
        zit->second = q;
        ++zit;
      }
    }
  } else {
    for (const auto& [k, p] : zero_pool_) {
      note(k, p, 0.0);
      entries_.erase(k);
    }
    zero_pool_.clear();
    for (int s : dec.entered()) {
      if (stretches_[s].tau < y_hi) down.push_back(s);
    }
  }
  for (int s : up) {
    double tau = stretches_[s].tau;
    treap_.for_each_less(stretches_[s].root, {tau, 0}, [&](const WeightKey& m) {
      note(m.key, prob_in(s, m.weight), std::min(1.0, m.weight / y_lo));
    });
  }
  for (int s : down) {
    treap_.for_each_less(stretches_[s].root, {y_hi, 0}, [&](const WeightKey& m) {
      note(m.key, prob_in(s, m.weight), m.weight / y_hi);
    });
  }
  if (!up.empty()) merge_into(up, y_lo);
  if (!down.empty()) merge_into(down, y_hi);
  return finish();
}

}  // namespace stablex
