#include <algorithm>
#include <cmath>
#include <limits>

#include "stablex/oracle/oracle.hpp"

namespace stablex::oracle {
namespace {

// argmin over q in [0,1] of w^2/q + mu*q + lam*|q - p|, for w > 0.
double item_argmin(double w, double p, double mu, double lam) {
  double up = mu + lam;
  double right = p > 0.0 ? -w * w / (p * p) + up : -kInfinity;
  if (p < 1.0 && right < 0.0) return up > 0.0 ? std::min(1.0, w / std::sqrt(up)) : 1.0;
  if (p > 0.0) {
    double down = mu - lam;
    double left = -w * w / (p * p) + down;
    if (left > 0.0) return std::max(0.0, w / std::sqrt(down));
  }
  return p;
}

// Zero weights are handled exactly: such an entry stays at p while
// mu < lam, drops to 0 once mu > lam, and takes any value in between at
// mu == lam.
struct Dual {
  const std::vector<double>& w;
  const std::vector<double>& p;
  double k;

  double positive_sum(double mu, double lam) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > 0.0) s += item_argmin(w[i], p[i], mu, lam);
    }
    return s;
  }

  double zero_mass() const {
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) z += p[i];
    }
    return z;
  }

  double sum_at(double mu, double lam) const {
    return positive_sum(mu, lam) + (mu < lam ? zero_mass() : 0.0);
  }

  // Primal point for the multipliers. At mu == lam the zero-weight entries
  // absorb whatever the positive entries leave of k.
  std::vector<double> at(double mu, double lam) const {
    std::vector<double> q(w.size());
    double fill = 0.0;
    double z = zero_mass();
    if (mu == lam && z > 0.0) fill = std::clamp((k - positive_sum(mu, lam)) / z, 0.0, 1.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > 0.0) {
        q[i] = item_argmin(w[i], p[i], mu, lam);
      } else if (mu < lam) {
        q[i] = p[i];
      } else {
        q[i] = mu == lam ? p[i] * fill : 0.0;
      }
    }
    return q;
  }

  // Sum constraint multiplier for a fixed L1 multiplier.
  double mu_for(double lam) const {
    double z = zero_mass();
    if (z > 0.0) {
      double s = positive_sum(lam, lam);
      if (s <= k && k <= s + z) return lam;
    }
    double lo = -lam;
    double hi = std::max(1.0, lam);
    for (int it = 0; it < 2000 && sum_at(hi, lam) > k; ++it) hi *= 2.0;
    for (int it = 0; it < 300 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      double mid = 0.5 * (lo + hi);
      if (sum_at(mid, lam) > k) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  double l1_at(double lam) const {
    std::vector<double> q = at(mu_for(lam), lam);
    double d = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) d += std::abs(q[i] - p[i]);
    return d;
  }
};

}  // namespace

std::vector<double> convex_pps_oracle(const std::vector<double>& w, const std::vector<double>& p,
                                      double D) {
  if (w.size() > 64) throw ScaleError("convex oracle limited to 64 entries");
  double k = 0.0;
  for (double v : p) k += v;
  Dual dual{w, p, k};
  if (D <= 0.0) return p;
  double lam_lo = 0.0;
  if (dual.l1_at(0.0) <= D) return dual.at(dual.mu_for(0.0), 0.0);
  double lam_hi = 1.0;
  // Bounded: float noise in p can leave an L1 floor just above a tiny D.
  for (int it = 0; it < 1000 && dual.l1_at(lam_hi) > D; ++it) lam_hi *= 2.0;
  if (!std::isfinite(lam_hi)) lam_hi = std::numeric_limits<double>::max();
  for (int it = 0; it < 200 && lam_hi - lam_lo > 1e-15 * lam_hi; ++it) {
    double mid = 0.5 * (lam_lo + lam_hi);
    if (dual.l1_at(mid) > D) {
      lam_lo = mid;
    } else {
      lam_hi = mid;
    }
  }
  return dual.at(dual.mu_for(lam_hi), lam_hi);
}

double pps_cost(const std::vector<double>& w, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInfinity;
    s += w[i] * w[i] / q[i];
  }
  return s;
}

std::vector<double> random_feasible_point(const std::vector<double>& p, std::mt19937_64& rng,
                                          int moves) {
  std::vector<double> q(p);
  if (q.size() < 2) return q;
  std::uniform_int_distribution<std::size_t> pick(0, q.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int m = 0; m < moves; ++m) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) continue;
    double cap = std::min(1.0 - q[i], q[j]);
    double delta = unit(rng) < 0.2 ? cap : unit(rng) * cap;
    q[i] += delta;
    q[j] -= delta;
  }
  for (double& v : q) v = std::clamp(v, 0.0, 1.0);
  return q;
}

}  // namespace stablex::oracle
