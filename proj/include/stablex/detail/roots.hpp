// Safeguarded Newton iteration for monotone scalar equations.
#pragma once

#include <cmath>

namespace stablex::detail {

// Root of a decreasing f on [lo, hi] with f(lo) >= 0 >= f(hi). Newton steps
// from the bracket midpoint are taken when they stay strictly inside the
// bracket; otherwise the step bisects.
template <typename F, typename DF>
double solve_decreasing(F f, DF df, double lo, double hi, int max_iter = 200) {
  double x = 0.5 * (lo + hi);
  double best = x;
  double best_f = INFINITY;
  for (int it = 0; it < max_iter; ++it) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if (std::fabs(fx) < best_f) {
      best = x;
      best_f = std::fabs(fx);
    }
    if (fx > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4e-16 * std::fmax(1.0, std::fabs(hi))) break;
    double d = df(x);
    double next = (d < 0.0 && std::isfinite(d)) ? x - fx / d : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return best;
}

}  // namespace stablex::detail
