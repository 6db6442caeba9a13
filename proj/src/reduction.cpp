#include "stablex/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace stablex {

double AdditiveProblem::cost(Key key) const {
  auto it = costs.find(key);
  return it == costs.end() ? 1.0 : it->second;
}

bool AdditiveProblem::uniform() const {
  return std::all_of(costs.begin(), costs.end(), [](const auto& kv) { return kv.second == 1.0; });
}

KeyedValues adjusted_input(const AdditiveProblem& problem, const KeyedValues& x,
                           const OutputSet& s, double a, AdjustForm form) {
  if (a < 0.0) throw DomainError("adjusted_input: negative price");
  if (form == AdjustForm::kAuto) {
    form = problem.fixed_size > 0 && problem.uniform() ? AdjustForm::kAdditive
                                                       : AdjustForm::kSubtractive;
  }
  KeyedValues y(x);
  for (Entry& e : y) {
    bool in = contains(s, e.key);
    if (form == AdjustForm::kAdditive) {
      if (in) e.value += a * problem.cost(e.key);
    } else if (!in) {
      e.value -= a * problem.cost(e.key);
    }
  }
  return y;
}

double changeout(const AdditiveProblem& problem, const OutputSet& next, const OutputSet& prev) {
  double d = 0.0;
  for (Key k : next) {
    if (!contains(prev, k)) d += problem.cost(k);
  }
  return d;
}

double stable_objective(const AdditiveProblem& problem, const KeyedValues& x,
                        const OutputSet& next, const OutputSet& prev, double a) {
  return set_value(x, next) - a * changeout(problem, next, prev);
}

OutputSet alpha_stable(const AdditiveProblem& problem, const KeyedValues& x, const OutputSet& s,
                       double a) {
  TiePolicy ties = a > 0.0 ? problem.ties : TiePolicy::kPreferStable;
  return problem.opt(adjusted_input(problem, x, s, a), s, ties);
}

LinearEnvelope::LinearEnvelope(std::vector<EnvelopePiece> pieces, std::size_t k)
    : pieces_(std::move(pieces)), k_(k) {
  if (pieces_.empty()) throw ContractViolation("envelope needs at least one piece");
}

double LinearEnvelope::operator()(double a) const {
  double best = -kInfinity;
  for (const EnvelopePiece& p : pieces_) best = std::max(best, p(a));
  return best;
}

const EnvelopePiece& LinearEnvelope::piece_at(double a) const {
  for (std::size_t i = pieces_.size(); i-- > 0;) {
    if (a >= pieces_[i].a_lo) return pieces_[i];
  }
  return pieces_.front();
}

std::vector<double> LinearEnvelope::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].a_lo);
  return out;
}

CurveCheck LinearEnvelope::check(double tol) const {
  if (pieces_.size() > k_ + 1) return {false, "more than k+1 pieces"};
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const EnvelopePiece& l = pieces_[i - 1];
    const EnvelopePiece& r = pieces_[i];
    if (r.slope <= l.slope) return {false, "slopes not increasing at piece " + std::to_string(i)};
    if (r.a_lo < l.a_lo - tol) return {false, "breakpoints not increasing"};
    double at = r.a_lo;
    if (std::abs(l(at) - r(at)) > tol * std::max(1.0, std::abs(l(at)))) {
      return {false, "pieces do not meet at breakpoint " + std::to_string(i)};
    }
  }
  return {true, ""};
}

TradeoffCurve LinearEnvelope::tradeoff() const {
  TradeoffCurve curve;
  for (std::size_t i = pieces_.size(); i-- > 0;) {
    const EnvelopePiece& p = pieces_[i];
    curve.push_back({static_cast<double>(k_ - p.slope), p.intercept, p.a_lo});
  }
  return curve;
}

namespace {

struct Line {
  std::size_t slope;
  double intercept;
  OutputSet witness;
  double at(double a) const { return intercept + a * static_cast<double>(slope); }
};

class EnvelopeBuilder {
 public:
  EnvelopeBuilder(const AdditiveProblem& problem, const KeyedValues& x, const OutputSet& s)
      : problem_(problem), x_(x), s_(s) {}

  Line probe(double a) const {
    OutputSet w = problem_.opt(adjusted_input(problem_, x_, s_, a, AdjustForm::kAdditive), s_,
                               TiePolicy::kPreferStable);
    return {intersection_size(w, s_), set_value(x_, w), std::move(w)};
  }

  // Appends the lines strictly between l and r (exclusive) in slope order.
  void between(const Line& l, const Line& r, std::vector<Line>& out, int depth = 0) const {
    if (r.slope <= l.slope + 0 || depth > 64) return;
    double a = (l.intercept - r.intercept) / static_cast<double>(r.slope - l.slope);
    if (!(a > 0.0)) return;
    Line m = probe(a);
    double base = l.at(a);
    if (m.slope <= l.slope || m.slope >= r.slope) return;
    if (m.at(a) <= base + 1e-9 * std::max(1.0, std::abs(base))) return;
    between(l, m, out, depth + 1);
    out.push_back(m);
    between(m, r, out, depth + 1);
  }

 private:
  const AdditiveProblem& problem_;
  const KeyedValues& x_;
  const OutputSet& s_;
};

}  // namespace

LinearEnvelope parametric_envelope(const AdditiveProblem& problem, const KeyedValues& x,
                                   const OutputSet& s) {
  if (problem.fixed_size == 0 || !problem.uniform()) {
    throw ContractViolation("parametric_envelope needs a fixed-size uniform-cost problem");
  }
  if (s.size() != problem.fixed_size) throw ContractViolation("previous output has wrong size");
  std::size_t k = problem.fixed_size;
  EnvelopeBuilder builder(problem, x, s);
  Line first = builder.probe(0.0);
  Line last{k, set_value(x, s), s};
  std::vector<Line> lines{first};
  if (first.slope < k) {
    builder.between(first, last, lines);
    lines.push_back(last);
  }
  // Drop lines that never lead (can only happen through rounding).
  std::vector<Line> kept;
  for (Line& l : lines) {
    while (kept.size() >= 2) {
      const Line& p = kept[kept.size() - 2];
      const Line& q = kept.back();
      double pq = (p.intercept - q.intercept) / static_cast<double>(q.slope - p.slope);
      double ql = (q.intercept - l.intercept) / static_cast<double>(l.slope - q.slope);
      if (ql <= pq) {
        kept.pop_back();
      } else {
        break;
      }
    }
    kept.push_back(std::move(l));
  }
  std::vector<EnvelopePiece> pieces;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    EnvelopePiece p;
    p.slope = kept[i].slope;
    p.intercept = kept[i].intercept;
    p.witness = kept[i].witness;
    if (i > 0) {
      const Line& prev = kept[i - 1];
      p.a_lo = (prev.intercept - p.intercept) / static_cast<double>(p.slope - prev.slope);
      pieces.back().a_hi = p.a_lo;
    }
    pieces.push_back(std::move(p));
  }
  return LinearEnvelope(std::move(pieces), k);
}

OutputSet delta_stable(const AdditiveProblem& problem, const KeyedValues& x, const OutputSet& s,
                       std::size_t D) {
  LinearEnvelope env = parametric_envelope(problem, x, s);
  std::size_t k = env.k();
  for (const EnvelopePiece& p : env.pieces()) {
    if (k - p.slope <= D) return p.witness;
  }
  return s;
}

DynamicBridge::DynamicBridge(std::unique_ptr<DynamicOracle> oracle, const KeyedValues& x,
                             double a)
    : oracle_(std::move(oracle)), a_(a) {
  if (a < 0.0) throw DomainError("DynamicBridge: negative price");
  for (const Entry& e : x) x_[e.key] = e.value;
  current_ = oracle_->current();
  for (Key k : current_) oracle_->set_value(k, x_[k] + a_);
}

std::size_t DynamicBridge::update(Key key, double x) {
  x_[key] = x;
  oracle_->set_value(key, x + (contains(current_, key) ? a_ : 0.0));
  OutputSet next = oracle_->current();
  std::size_t entered = 0;
  for (Key k : next) {
    if (!contains(current_, k)) {
      oracle_->set_value(k, x_[k] + a_);
      ++entered;
    }
  }
  for (Key k : current_) {
    if (!contains(next, k)) oracle_->set_value(k, x_[k]);
  }
  current_ = std::move(next);
  return entered;
}

double DynamicBridge::value(Key key) const {
  auto it = x_.find(key);
  return it == x_.end() ? 0.0 : it->second;
}

}  // namespace stablex
