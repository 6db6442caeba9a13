#include <algorithm>

#include "stablex/oracle/oracle.hpp"

namespace stablex::oracle {

Rational rat(long long num, long long den) { return Rational(num, den); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

ExactPps exact_pps(const std::vector<Rational>& w, const Rational& k) {
  std::vector<Rational> pos;
  for (const Rational& v : w) {
    if (v > 0) pos.push_back(v);
  }
  if (pos.empty() || k <= 0 || k > Rational(static_cast<long long>(pos.size()))) {
    throw InfeasibleError("exact_pps: infeasible k");
  }
  std::sort(pos.begin(), pos.end(), [](const Rational& a, const Rational& b) { return a > b; });
  Rational tau = pos.back();
  for (std::size_t h = 0; h < pos.size(); ++h) {
    Rational rem = k - Rational(static_cast<long long>(h));
    if (rem <= 0) break;
    Rational rest = 0;
    for (std::size_t i = h; i < pos.size(); ++i) rest += pos[i];
    Rational t = rest / rem;
    bool prefix_ok = h == 0 || pos[h - 1] >= t;
    if (prefix_ok && pos[h] <= t) {
      tau = t;
      break;
    }
  }
  ExactPps out;
  out.threshold = tau;
  for (const Rational& v : w) out.probs.push_back(v >= tau ? Rational(1) : Rational(v / tau));
  return out;
}

namespace {

void append_merged(std::vector<ExactPiece>& out, ExactPiece piece) {
  if (!out.empty() && out.back().c == piece.c && out.back().b == piece.b &&
      out.back().hi == piece.lo) {
    out.back().hi = piece.hi;
    return;
  }
  out.push_back(std::move(piece));
}

}  // namespace

std::vector<ExactPiece> exact_increase_pieces(const std::vector<Rational>& w,
                                              const std::vector<Rational>& p) {
  std::vector<Rational> cuts;
  bool has_zero_prob = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0 || p[i] >= 1) continue;
    cuts.push_back(w[i]);
    if (p[i] > 0) {
      cuts.push_back(w[i] / p[i]);
    } else {
      has_zero_prob = true;
    }
  }
  std::sort(cuts.begin(), cuts.end(), [](const Rational& a, const Rational& b) { return a > b; });
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Threshold intervals (lo_y, hi_y), highest first; hi_y < 0 marks +inf.
  struct Span {
    Rational lo;
    Rational hi;
    bool top;
  };
  std::vector<Span> spans;
  if (has_zero_prob && !cuts.empty()) spans.push_back({cuts[0], Rational(0), true});
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) spans.push_back({cuts[j + 1], cuts[j], false});

  std::vector<ExactPiece> out;
  for (const Span& s : spans) {
    Rational y = s.top ? Rational(s.lo + 1) : Rational((s.lo + s.hi) / 2);
    Rational C = 0;
    Rational W = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0 || p[i] >= 1) continue;
      bool below_entry = p[i] == 0 || y < w[i] / p[i];
      if (!below_entry) continue;
      if (y <= w[i]) {
        C += 1 - p[i];
      } else {
        W += w[i];
        C -= p[i];
      }
    }
    if (W == 0) continue;
    Rational x_lo = s.top ? C : Rational(C + W / s.hi);
    Rational x_hi = C + W / s.lo;
    append_merged(out, {x_lo, x_hi, C, W});
  }
  return out;
}

std::vector<ExactPiece> exact_decrease_pieces(const std::vector<Rational>& w,
                                              const std::vector<Rational>& p) {
  Rational d0 = 0;
  std::vector<Rational> cuts;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (p[i] <= 0) continue;
    if (w[i] == 0) {
      d0 += p[i];
    } else {
      cuts.push_back(w[i] / p[i]);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<ExactPiece> out;
  if (d0 > 0) out.push_back({Rational(0), d0, Rational(0), Rational(0)});
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    bool last = j + 1 == cuts.size();
    Rational y = last ? Rational(cuts[j] + 1) : Rational((cuts[j] + cuts[j + 1]) / 2);
    Rational C = d0;
    Rational W = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (p[i] <= 0 || w[i] == 0) continue;
      if (y > w[i] / p[i]) {
        C += p[i];
        W += w[i];
      }
    }
    Rational x_lo = C - W / cuts[j];
    Rational x_hi = last ? C : Rational(C - W / cuts[j + 1]);
    append_merged(out, {x_lo, x_hi, C, W});
  }
  return out;
}

ExactStable exact_delta_opt(const std::vector<Rational>& w, const std::vector<Rational>& p,
                            const Rational& D) {
  ExactStable out;
  Rational x = D / 2;
  if (x <= 0) {
    out.probs = p;
    return out;
  }
  auto find = [&](const std::vector<ExactPiece>& pieces) -> const ExactPiece& {
    for (const ExactPiece& pc : pieces) {
      if (pc.lo < x && x <= pc.hi) return pc;
    }
    throw DomainError("exact_delta_opt: budget outside the threshold domain");
  };
  std::vector<ExactPiece> ups = exact_increase_pieces(w, p);
  const ExactPiece& up = find(ups);
  out.tau_lo = up.b / (x - up.c);
  std::vector<ExactPiece> downs = exact_decrease_pieces(w, p);
  const ExactPiece& dn = find(downs);
  out.tau_hi = dn.b == 0 ? Rational(0) : Rational(dn.b / (dn.c - x));

  Rational r = x;
  out.probs = p;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) {
      if (p[i] == 0) continue;
      if (out.tau_hi > 0) {
        out.probs[i] = 0;
      } else {
        Rational take = std::min(p[i], std::max(r, Rational(0)));
        out.probs[i] = p[i] - take;
        r -= take;
      }
      continue;
    }
    Rational up_q = w[i] / out.tau_lo;
    if (p[i] < 1 && up_q > p[i]) {
      out.probs[i] = std::min(Rational(1), up_q);
    } else if (out.tau_hi > 0 && p[i] > w[i] / out.tau_hi) {
      out.probs[i] = w[i] / out.tau_hi;
    }
  }
  return out;
}

}  // namespace stablex::oracle
