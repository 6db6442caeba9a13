#include "stablex/pps.hpp"

#include <algorithm>
#include <cmath>

#include "stablex/detail/roots.hpp"

namespace stablex {
namespace {

struct Record {
  double v;
  double dw;
  double dc;
  int dcount;
};

// Sweeps records grouped by equal value in the given order. fn(v, group)
// is called once per group.
template <typename Fn>
void for_each_group(const std::vector<Record>& recs, Fn fn) {
  std::size_t i = 0;
  while (i < recs.size()) {
    std::size_t j = i;
    while (j < recs.size() && recs[j].v == recs[i].v) ++j;
    fn(recs[i].v, i, j);
    i = j;
  }
}

// q for total increase and decrease x with thresholds t_lo and t_hi.
PpsDistribution distribution_at(const WeightVector& w, const PpsDistribution& p,
                                double x, double t_lo, double t_hi) {
  std::vector<Entry> q(p.entries());
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double wi = w.weight(i);
    double pi = p.prob(i);
    if (wi == 0.0) {
      if (pi > 0.0) zeros.push_back(i);
      continue;
    }
    double up = wi / t_lo;
    if (pi < 1.0 && up > pi) {
      q[i].value = std::min(1.0, up);
    } else if (t_hi > 0.0 && pi > wi / t_hi) {
      q[i].value = wi / t_hi;
    }
  }
  if (t_hi > 0.0) {
    for (std::size_t i : zeros) q[i].value = 0.0;
  } else {
    std::sort(zeros.begin(), zeros.end(),
              [&](std::size_t a, std::size_t b) { return w.key(a) < w.key(b); });
    double r = x;
    for (std::size_t i : zeros) {
      double pi = p.prob(i);
      q[i].value = std::max(0.0, pi - r);
      r -= pi;
      if (r <= 0.0) break;
    }
  }
  return PpsDistribution(std::move(q), p.target_size());
}

struct Bracket {
  const HyperbolaPiece* lo;
  const HyperbolaPiece* hi;

  double g(double x) const {
    double a = (*lo)(x);
    double b = (*hi)(x);
    return a * a - b * b;
  }
  double dg(double x) const {
    auto d = [](const HyperbolaPiece& p, double x) {
      if (p.form != PieceForm::kShiftReciprocal) return 0.0;
      double y = p(x);
      return -2.0 * y * y * y / p.b;
    };
    return d(*lo, x) - d(*hi, x);
  }
};

}  // namespace

PpsSolution pps_probabilities(const WeightVector& w, double k) {
  if (!(k > 0.0)) throw InfeasibleError("sample size k must be positive");
  std::vector<double> pos;
  for (const Entry& e : w.entries()) {
    if (e.value > 0.0) pos.push_back(e.value);
  }
  if (pos.empty()) throw InfeasibleError("all weights are zero");
  double m = static_cast<double>(pos.size());
  if (k > m + kTolerance * std::max(1.0, k)) {
    throw InfeasibleError("k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(pos.size()) + " positive weights");
  }
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::vector<double> suffix(pos.size() + 1, 0.0);
  for (std::size_t i = pos.size(); i-- > 0;) suffix[i] = suffix[i + 1] + pos[i];

  double tau = pos.back();
  for (std::size_t h = 0; h < pos.size(); ++h) {
    double rem = k - static_cast<double>(h);
    if (rem <= 0.0) break;
    double t = suffix[h] / rem;
    if (pos[h] <= t) {
      tau = t;
      break;
    }
  }
  std::vector<Entry> probs;
  probs.reserve(w.size());
  for (const Entry& e : w.entries()) probs.push_back({e.key, std::min(1.0, e.value / tau)});
  return {PpsDistribution(std::move(probs), k), tau};
}

IncreaseFunctions best_increase(const WeightVector& w, const PpsDistribution& p) {
  require_aligned(w, p);
  std::vector<Record> recs;
  double w0 = 0.0;
  int active = 0;
  IncreaseFunctions out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double wi = w.weight(i);
    double pi = p.prob(i);
    if (wi <= 0.0 || pi >= 1.0) continue;
    out.max_increase += 1.0 - pi;
    if (pi == 0.0) {
      w0 += wi;
      ++active;
    } else {
      recs.push_back({wi / pi, wi, -pi, 1});
    }
    recs.push_back({wi, -wi, 1.0, -1});
  }
  if (recs.empty()) return out;
  std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) { return a.v > b.v; });

  std::vector<HyperbolaPiece> dplus;  // descending y
  std::vector<HyperbolaPiece> tau;    // ascending x
  double W = w0;
  double C = 0.0;
  double y_hi = kInfinity;
  double x_prev = 0.0;
  for_each_group(recs, [&](double v, std::size_t b, std::size_t e) {
    if (active > 0) {
      dplus.push_back({{v, y_hi, true, false}, PieceForm::kAddReciprocal, C, W});
      double x_hi = C + W / v;
      // Ratios equal up to rounding give zero-width pieces; drop them.
      if (x_hi > x_prev) {
        tau.push_back({{x_prev, x_hi, false, true}, PieceForm::kShiftReciprocal, C, W});
        x_prev = x_hi;
      }
    } else if (y_hi != kInfinity) {
      dplus.push_back({{v, y_hi, true, false}, PieceForm::kConstant, C, 0.0});
    }
    for (std::size_t r = b; r < e; ++r) {
      W += recs[r].dw;
      C += recs[r].dc;
      active += recs[r].dcount;
    }
    if (active == 0) W = 0.0;
    y_hi = v;
  });
  std::reverse(dplus.begin(), dplus.end());
  out.delta_plus = PiecewiseFunction(std::move(dplus), Direction::kDecreasing);
  out.tau_lo = PiecewiseFunction(std::move(tau), Direction::kDecreasing);
  out.empty = false;
  return out;
}

DecreaseFunctions best_decrease(const WeightVector& w, const PpsDistribution& p) {
  require_aligned(w, p);
  DecreaseFunctions out;
  std::vector<Record> recs;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double wi = w.weight(i);
    double pi = p.prob(i);
    if (pi <= 0.0) continue;
    out.max_decrease += pi;
    if (wi == 0.0) {
      out.zero_mass += pi;
    } else {
      recs.push_back({wi / pi, wi, pi, 1});
    }
  }
  std::vector<HyperbolaPiece> dminus;
  std::vector<HyperbolaPiece> tau;
  if (out.zero_mass > 0.0) {
    tau.push_back({{0.0, out.zero_mass, false, true}, PieceForm::kConstant, 0.0, 0.0});
  }
  std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) { return a.v < b.v; });
  double W = 0.0;
  double C = out.zero_mass;
  double x_prev = out.zero_mass;
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for_each_group(recs, [&](double, std::size_t b, std::size_t e) { groups.push_back({b, e}); });
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t r = groups[g].first; r < groups[g].second; ++r) {
      W += recs[r].dw;
      C += recs[r].dc;
    }
    double v = recs[groups[g].first].v;
    bool last = g + 1 == groups.size();
    double v_next = last ? kInfinity : recs[groups[g + 1].first].v;
    dminus.push_back({{v, v_next, true, false}, PieceForm::kSubReciprocal, C, W});
    double x_hi = last ? C : C - W / v_next;
    if (x_hi > x_prev) {
      tau.push_back({{x_prev, x_hi, false, true}, PieceForm::kShiftReciprocal, C, -W});
      x_prev = x_hi;
    }
  }
  out.delta_minus = PiecewiseFunction(std::move(dminus), Direction::kIncreasing);
  out.tau_hi = PiecewiseFunction(std::move(tau), Direction::kIncreasing);
  out.empty = out.tau_hi.empty();
  return out;
}

double max_changeout(const WeightVector& w, const PpsDistribution& p) {
  require_aligned(w, p);
  PpsSolution best = pps_probabilities(w, p.target_size());
  return l1_distance(p, best.dist);
}

PpsDistribution delta_opt(const WeightVector& w, const PpsDistribution& p, double D) {
  require_aligned(w, p);
  if (!(D >= 0.0)) throw DomainError("changeout budget must be nonnegative");
  PpsSolution best = pps_probabilities(w, p.target_size());
  double dmax = l1_distance(p, best.dist);
  if (D > dmax + kTolerance * std::max(1.0, dmax)) {
    throw DomainError("changeout " + std::to_string(D) + " exceeds maximum " +
                      std::to_string(dmax));
  }
  if (D == 0.0) return p;
  if (D >= dmax) return best.dist;
  double x = D / 2.0;
  IncreaseFunctions inc = best_increase(w, p);
  DecreaseFunctions dec = best_decrease(w, p);
  // A maximum changeout at rounding level leaves no usable pieces.
  if (inc.tau_lo.empty() || dec.tau_hi.empty()) return best.dist;
  x = std::clamp(x, std::nextafter(0.0, 1.0),
                 std::min(inc.tau_lo.domain_hi(), dec.tau_hi.domain_hi()));
  return distribution_at(w, p, x, inc.tau_lo(x), dec.tau_hi(x));
}

double alpha_upper(const WeightVector& w, const PpsDistribution& p) {
  IncreaseFunctions inc = best_increase(w, p);
  DecreaseFunctions dec = best_decrease(w, p);
  if (inc.empty || dec.empty) return 0.0;
  double lo = inc.tau_lo.pieces().front().at_lo();
  double hi = dec.tau_hi.pieces().front().at_lo();
  return lo * lo - hi * hi;
}

double alpha_of_changeout(const WeightVector& w, const PpsDistribution& p, double D) {
  require_aligned(w, p);
  if (D < 0.0) throw DomainError("changeout must be nonnegative");
  if (D == 0.0) return kInfinity;
  double dmax = max_changeout(w, p);
  if (D >= dmax) {
    if (D > dmax + kTolerance * std::max(1.0, dmax)) {
      throw DomainError("changeout exceeds maximum");
    }
    return 0.0;
  }
  double x = D / 2.0;
  double lo = best_increase(w, p).tau_lo(x);
  double hi = best_decrease(w, p).tau_hi(x);
  return std::max(0.0, lo * lo - hi * hi);
}

AlphaSolution alpha_opt(const WeightVector& w, const PpsDistribution& p, double a) {
  require_aligned(w, p);
  if (!(a >= 0.0)) throw DomainError("price must be nonnegative");
  PpsSolution best = pps_probabilities(w, p.target_size());
  double dmax = l1_distance(p, best.dist);
  if (dmax <= 0.0) return {p, 0.0, best.threshold, best.threshold};
  if (a <= 0.0) return {best.dist, dmax, best.threshold, best.threshold};

  IncreaseFunctions inc = best_increase(w, p);
  DecreaseFunctions dec = best_decrease(w, p);
  double xm = dmax / 2.0;
  std::vector<double> bps{0.0, xm};
  for (double b : inc.tau_lo.breakpoints()) {
    if (b > 0.0 && b < xm) bps.push_back(b);
  }
  for (double b : dec.tau_hi.breakpoints()) {
    if (b > 0.0 && b < xm) bps.push_back(b);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  auto finish = [&](double x) {
    double lo = inc.tau_lo(x);
    double hi = dec.tau_hi(x);
    return AlphaSolution{distribution_at(w, p, x, lo, hi), 2.0 * x, lo, hi};
  };

  for (std::size_t j = 0; j + 1 < bps.size(); ++j) {
    double l = bps[j];
    double r = bps[j + 1];
    double mid = 0.5 * (l + r);
    Bracket br{&inc.tau_lo.pieces()[inc.tau_lo.locate(mid)],
               &dec.tau_hi.pieces()[dec.tau_hi.locate(mid)]};
    double g_l = br.g(l);
    if (g_l <= a) {
      // Nothing to gain moving past l (price above the jump at l).
      if (j == 0) return {p, 0.0, inc.tau_lo.pieces().front().at_lo(),
                          dec.tau_hi.pieces().front().at_lo()};
      return finish(l);
    }
    double g_r = br.g(r);
    if (g_r <= a) {
      double x = detail::solve_decreasing(
          [&](double t) { return br.g(t) - a; }, [&](double t) { return br.dg(t); }, l, r);
      if (x <= 0.0) return {p, 0.0, inc.tau_lo.pieces().front().at_lo(),
                            dec.tau_hi.pieces().front().at_lo()};
      return finish(x);
    }
  }
  return {best.dist, dmax, best.threshold, best.threshold};
}

TradeoffCurve pps_tradeoff(const WeightVector& w, const PpsDistribution& p) {
  require_aligned(w, p);
  PpsSolution best = pps_probabilities(w, p.target_size());
  double dmax = l1_distance(p, best.dist);
  TradeoffCurve curve;
  if (dmax <= 0.0) {
    curve.push_back({0.0, pps_fitness(w, p), 0.0});
    return curve;
  }
  IncreaseFunctions inc = best_increase(w, p);
  DecreaseFunctions dec = best_decrease(w, p);
  double xm = dmax / 2.0;
  std::vector<double> xs;
  for (double b : inc.tau_lo.breakpoints()) {
    if (b > 0.0 && b < xm) xs.push_back(b);
  }
  for (double b : dec.tau_hi.breakpoints()) {
    if (b > 0.0 && b < xm) xs.push_back(b);
  }
  std::sort(xs.begin(), xs.end());
  double a0 = inc.tau_lo.pieces().front().at_lo();
  double b0 = dec.tau_hi.pieces().front().at_lo();
  curve.push_back({0.0, pps_fitness(w, p), a0 * a0 - b0 * b0});
  double last = 0.0;
  double gap = 1e-12 * std::max(1.0, xm);
  for (double x : xs) {
    if (x - last <= gap || xm - x <= gap) continue;
    double lo = inc.tau_lo(x);
    double hi = dec.tau_hi(x);
    PpsDistribution q = distribution_at(w, p, x, lo, hi);
    curve.push_back({2.0 * x, pps_fitness(w, q), std::max(0.0, lo * lo - hi * hi)});
    last = x;
  }
  curve.push_back({dmax, pps_fitness(w, best.dist), 0.0});
  return curve;
}

}  // namespace stablex
