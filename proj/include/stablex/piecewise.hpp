// Piecewise hyperbolic functions and tradeoff curves.
#pragma once

#include <string>
#include <vector>

#include "stablex/core.hpp"

namespace stablex {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = true;

  bool contains(double x) const;
  bool empty() const;
  std::string to_string() const;
};

enum class PieceForm {
  kAddReciprocal,    // a + b/y
  kShiftReciprocal,  // b/(x - a)
  kSubReciprocal,    // a - b/y
  kConstant,         // a
  kAffine,           // a + b*x
};

struct HyperbolaPiece {
  Interval domain;
  PieceForm form = PieceForm::kConstant;
  double a = 0.0;
  double b = 0.0;

  double operator()(double x) const;
  // Value at a domain endpoint, using the limit for open or infinite ends.
  double at_lo() const;
  double at_hi() const;
  // +1 increasing, -1 decreasing, 0 constant.
  int monotonicity() const;
  std::string to_string() const;
};

// Inverse of a strictly monotone piece on its image interval. Endpoints are
// swapped for decreasing pieces along with their openness.
HyperbolaPiece invert(const HyperbolaPiece& piece);

enum class Direction { kIncreasing, kDecreasing };

class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;
  // Pieces must tile the domain in ascending order. Throws ContractViolation
  // on gaps, overlaps, or a piece monotone against direction.
  PiecewiseFunction(std::vector<HyperbolaPiece> pieces, Direction direction);

  const std::vector<HyperbolaPiece>& pieces() const { return pieces_; }
  Direction direction() const { return direction_; }
  bool empty() const { return pieces_.empty(); }
  double domain_lo() const;
  double domain_hi() const;
  bool in_domain(double x) const;
  // Index of the piece covering x; at a shared boundary the piece whose
  // closed end contains x wins. Throws DomainError outside the domain.
  std::size_t locate(double x) const;
  double operator()(double x) const;
  // Interior breakpoints (shared boundaries).
  std::vector<double> breakpoints() const;
  // Largest jump between adjacent piece values at shared boundaries.
  double max_discontinuity() const;
  // Copy restricted to [lo, hi] intersected with the domain.
  PiecewiseFunction restricted(double lo, double hi) const;

 private:
  std::vector<HyperbolaPiece> pieces_;
  Direction direction_ = Direction::kIncreasing;
};

double eval_piecewise(const PiecewiseFunction& f, double x);

// Piecewise inverse. Constant pieces cannot be inverted and raise
// ContractViolation.
PiecewiseFunction invert_piecewise(const PiecewiseFunction& f);

struct TradeoffPoint {
  double changeout = 0.0;
  double fitness = 0.0;
  // Lower end of the price range for which this point is optimal.
  double multiplier = 0.0;
};

struct CurveCheck {
  bool ok = true;
  std::string message;
};

class TradeoffCurve {
 public:
  TradeoffCurve() = default;
  explicit TradeoffCurve(std::vector<TradeoffPoint> points)
      : points_(std::move(points)) {}

  const std::vector<TradeoffPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  void push_back(const TradeoffPoint& p) { points_.push_back(p); }

  // D strictly increasing, fitness non-decreasing, multiplier
  // non-increasing, slopes non-increasing. tol is relative to the
  // magnitude of the compared values.
  CurveCheck check(double tol = kTolerance) const;

 private:
  std::vector<TradeoffPoint> points_;
};

}  // namespace stablex
