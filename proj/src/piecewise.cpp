#include "stablex/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stablex {
namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool near(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

bool Interval::contains(double x) const {
  if (x < lo || x > hi) return false;
  if (x == lo && !lo_closed) return false;
  if (x == hi && !hi_closed) return false;
  return true;
}

bool Interval::empty() const {
  return lo > hi || (lo == hi && !(lo_closed && hi_closed));
}

std::string Interval::to_string() const {
  return std::string(lo_closed ? "[" : "(") + fmt_num(lo) + ", " + fmt_num(hi) +
         (hi_closed ? "]" : ")");
}

double HyperbolaPiece::operator()(double x) const {
  switch (form) {
    case PieceForm::kAddReciprocal:
      return a + b / x;
    case PieceForm::kShiftReciprocal:
      return b / (x - a);
    case PieceForm::kSubReciprocal:
      return a - b / x;
    case PieceForm::kConstant:
      return a;
    case PieceForm::kAffine:
      return a + b * x;
  }
  return a;
}

double HyperbolaPiece::at_lo() const { return (*this)(domain.lo); }
double HyperbolaPiece::at_hi() const { return (*this)(domain.hi); }

int HyperbolaPiece::monotonicity() const {
  if (b == 0.0 || form == PieceForm::kConstant) return 0;
  switch (form) {
    case PieceForm::kAddReciprocal:
    case PieceForm::kShiftReciprocal:
      return b > 0.0 ? -1 : 1;
    case PieceForm::kSubReciprocal:
    case PieceForm::kAffine:
      return b > 0.0 ? 1 : -1;
    case PieceForm::kConstant:
      break;
  }
  return 0;
}

std::string HyperbolaPiece::to_string() const {
  std::string f;
  switch (form) {
    case PieceForm::kAddReciprocal:
      f = fmt_num(a) + " + " + fmt_num(b) + "/y";
      break;
    case PieceForm::kShiftReciprocal:
      f = fmt_num(b) + "/(x - " + fmt_num(a) + ")";
      break;
    case PieceForm::kSubReciprocal:
      f = fmt_num(a) + " - " + fmt_num(b) + "/y";
      break;
    case PieceForm::kConstant:
      f = fmt_num(a);
      break;
    case PieceForm::kAffine:
      f = fmt_num(a) + " + " + fmt_num(b) + "*x";
      break;
  }
  return domain.to_string() + " " + f;
}

HyperbolaPiece invert(const HyperbolaPiece& piece) {
  int mono = piece.monotonicity();
  if (mono == 0) throw ContractViolation("cannot invert a constant piece");
  HyperbolaPiece out;
  switch (piece.form) {
    case PieceForm::kAddReciprocal:
      out.form = PieceForm::kShiftReciprocal;
      out.a = piece.a;
      out.b = piece.b;
      break;
    case PieceForm::kShiftReciprocal:
      if (piece.b > 0.0) {
        out.form = PieceForm::kAddReciprocal;
        out.a = piece.a;
        out.b = piece.b;
      } else {
        out.form = PieceForm::kSubReciprocal;
        out.a = piece.a;
        out.b = -piece.b;
      }
      break;
    case PieceForm::kSubReciprocal:
      out.form = PieceForm::kShiftReciprocal;
      out.a = piece.a;
      out.b = -piece.b;
      break;
    case PieceForm::kAffine:
      out.form = PieceForm::kAffine;
      out.a = -piece.a / piece.b;
      out.b = 1.0 / piece.b;
      break;
    case PieceForm::kConstant:
      break;
  }
  double vlo = piece.at_lo();
  double vhi = piece.at_hi();
  if (mono > 0) {
    out.domain = {vlo, vhi, piece.domain.lo_closed, piece.domain.hi_closed};
  } else {
    out.domain = {vhi, vlo, piece.domain.hi_closed, piece.domain.lo_closed};
  }
  return out;
}

PiecewiseFunction::PiecewiseFunction(std::vector<HyperbolaPiece> pieces,
                                     Direction direction)
    : pieces_(std::move(pieces)), direction_(direction) {
  int want = direction == Direction::kIncreasing ? 1 : -1;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const HyperbolaPiece& p = pieces_[i];
    if (p.domain.empty()) {
      throw ContractViolation("empty piece domain " + p.domain.to_string());
    }
    int mono = p.monotonicity();
    if (mono != 0 && mono != want) {
      throw ContractViolation("piece " + p.to_string() + " is monotone against direction");
    }
    if (i == 0) continue;
    const Interval& prev = pieces_[i - 1].domain;
    if (!near(prev.hi, p.domain.lo, 1e-12)) {
      throw ContractViolation("pieces do not tile: " + prev.to_string() + " then " +
                              p.domain.to_string());
    }
    if (!prev.hi_closed && !p.domain.lo_closed) {
      throw ContractViolation("gap at breakpoint " + fmt_num(prev.hi));
    }
  }
}

double PiecewiseFunction::domain_lo() const {
  if (pieces_.empty()) throw DomainError("empty piecewise function");
  return pieces_.front().domain.lo;
}

double PiecewiseFunction::domain_hi() const {
  if (pieces_.empty()) throw DomainError("empty piecewise function");
  return pieces_.back().domain.hi;
}

bool PiecewiseFunction::in_domain(double x) const {
  if (pieces_.empty()) return false;
  const Interval& first = pieces_.front().domain;
  const Interval& last = pieces_.back().domain;
  if (x < first.lo || (x == first.lo && !first.lo_closed)) return false;
  if (x > last.hi || (x == last.hi && !last.hi_closed)) return false;
  return true;
}

std::size_t PiecewiseFunction::locate(double x) const {
  if (!in_domain(x)) {
    throw DomainError("x = " + fmt_num(x) + " outside function domain");
  }
  // First piece whose upper end reaches x.
  auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                 [x](const HyperbolaPiece& p) {
                                   return p.domain.hi < x ||
                                          (p.domain.hi == x && !p.domain.hi_closed);
                                 });
  return static_cast<std::size_t>(it - pieces_.begin());
}

double PiecewiseFunction::operator()(double x) const { return pieces_[locate(x)](x); }

std::vector<double> PiecewiseFunction::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) out.push_back(pieces_[i].domain.hi);
  return out;
}

double PiecewiseFunction::max_discontinuity() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    double l = pieces_[i].at_hi();
    double r = pieces_[i + 1].at_lo();
    if (std::isinf(l) && l == r) continue;
    double jump = std::abs(l - r) / std::max({1.0, std::abs(l), std::abs(r)});
    worst = std::max(worst, jump);
  }
  return worst;
}

PiecewiseFunction PiecewiseFunction::restricted(double lo, double hi) const {
  std::vector<HyperbolaPiece> out;
  for (HyperbolaPiece p : pieces_) {
    if (p.domain.lo < lo) {
      p.domain.lo = lo;
      p.domain.lo_closed = true;
    }
    if (p.domain.hi > hi) {
      p.domain.hi = hi;
      p.domain.hi_closed = true;
    }
    if (p.domain.empty()) continue;
    out.push_back(p);
  }
  return PiecewiseFunction(std::move(out), direction_);
}

double eval_piecewise(const PiecewiseFunction& f, double x) { return f(x); }

PiecewiseFunction invert_piecewise(const PiecewiseFunction& f) {
  std::vector<HyperbolaPiece> out;
  out.reserve(f.pieces().size());
  for (const HyperbolaPiece& p : f.pieces()) out.push_back(invert(p));
  if (f.direction() == Direction::kDecreasing) std::reverse(out.begin(), out.end());
  return PiecewiseFunction(std::move(out), f.direction());
}

CurveCheck TradeoffCurve::check(double tol) const {
  auto fail = [](std::size_t i, const std::string& what) {
    return CurveCheck{false, what + " at point " + std::to_string(i)};
  };
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const TradeoffPoint& p = points_[i];
    if (!(p.changeout >= 0.0)) return fail(i, "negative changeout");
    if (!(p.multiplier >= 0.0)) return fail(i, "negative multiplier");
    if (i == 0) continue;
    const TradeoffPoint& q = points_[i - 1];
    if (!(p.changeout > q.changeout)) return fail(i, "changeout not increasing");
    if (p.fitness < q.fitness && !near(p.fitness, q.fitness, tol)) {
      return fail(i, "fitness decreasing");
    }
    if (p.multiplier > q.multiplier && !near(p.multiplier, q.multiplier, tol)) {
      return fail(i, "multiplier increasing");
    }
  }
  double prev_slope = kInfinity;
  double prev_noise = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const TradeoffPoint& q = points_[i - 1];
    const TradeoffPoint& p = points_[i];
    if (std::isinf(q.fitness)) continue;
    double dx = p.changeout - q.changeout;
    double slope = (p.fitness - q.fitness) / dx;
    // Rounding in fitness values is amplified by short segments.
    double noise = 1e-13 * std::max(std::abs(p.fitness), std::abs(q.fitness)) / dx;
    if (slope > prev_slope + noise + prev_noise && !near(slope, prev_slope, tol)) {
      return fail(i, "slope increases (not concave)");
    }
    prev_slope = slope;
    prev_noise = noise;
  }
  return {};
}

}  // namespace stablex
