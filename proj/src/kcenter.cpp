#include "stablex/kcenter.hpp"

#include <algorithm>
#include <cmath>

namespace stablex {

MetricPoints MetricPoints::from_coordinates(std::vector<std::vector<double>> coords) {
  MetricPoints m;
  m.n_ = coords.size();
  std::size_t dim = m.n_ ? coords[0].size() : 0;
  for (const auto& c : coords) {
    if (c.size() != dim) throw ContractViolation("points must share a dimension");
    for (double v : c) {
      if (!std::isfinite(v)) throw ContractViolation("non-finite coordinate");
    }
  }
  m.d_.assign(m.n_ * m.n_, 0.0);
  for (std::size_t i = 0; i < m.n_; ++i) {
    for (std::size_t j = i + 1; j < m.n_; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < dim; ++t) {
        double diff = coords[i][t] - coords[j][t];
        s += diff * diff;
      }
      m.d_[i * m.n_ + j] = m.d_[j * m.n_ + i] = std::sqrt(s);
    }
  }
  return m;
}

MetricPoints MetricPoints::from_matrix(std::vector<std::vector<double>> dist) {
  MetricPoints m;
  m.n_ = dist.size();
  for (const auto& r : dist) {
    if (r.size() != m.n_) throw ContractViolation("distance matrix must be square");
  }
  for (std::size_t i = 0; i < m.n_; ++i) {
    if (dist[i][i] != 0.0) throw ContractViolation("distance matrix diagonal must be 0");
    for (std::size_t j = 0; j < m.n_; ++j) {
      double d = dist[i][j];
      if (!(d >= 0.0) || !std::isfinite(d)) throw ContractViolation("invalid distance");
      if (d != dist[j][i]) throw ContractViolation("distance matrix must be symmetric");
      m.d_.push_back(d);
    }
  }
  for (std::size_t i = 0; i < m.n_; ++i) {
    for (std::size_t j = 0; j < m.n_; ++j) {
      for (std::size_t t = 0; t < m.n_; ++t) {
        double direct = dist[i][j];
        double via = dist[i][t] + dist[t][j];
        if (direct > via + 1e-9 * std::max(1.0, via)) {
          throw ContractViolation("distance matrix violates the triangle inequality");
        }
      }
    }
  }
  return m;
}

std::vector<std::vector<double>> MetricPoints::matrix() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = distance(i, j);
  }
  return out;
}

double covering_radius(const MetricPoints& pts, const std::vector<std::size_t>& centers) {
  double r = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    double near = kInfinity;
    for (std::size_t c : centers) near = std::min(near, pts.distance(p, c));
    r = std::max(r, near);
  }
  return r;
}

GonzalezResult gonzalez_fixed(const MetricPoints& pts, const std::vector<std::size_t>& fixed,
                              std::size_t s) {
  std::size_t n = pts.size();
  if (n == 0) throw ContractViolation("gonzalez_fixed: no points");
  std::vector<bool> is_center(n, false);
  std::vector<double> near(n, kInfinity);
  auto add = [&](std::size_t c) {
    is_center[c] = true;
    for (std::size_t p = 0; p < n; ++p) near[p] = std::min(near[p], pts.distance(p, c));
  };
  for (std::size_t f : fixed) {
    if (f >= n) throw ContractViolation("fixed center out of range");
    if (!is_center[f]) add(f);
  }
  std::size_t free_count = 0;
  for (bool c : is_center) free_count += c ? 0 : 1;
  GonzalezResult out;
  if (s > free_count) {
    s = free_count;
    out.clamped = true;
  }
  auto farthest = [&]() {
    std::size_t best = n;
    for (std::size_t p = 0; p < n; ++p) {
      if (is_center[p]) continue;
      if (best == n || near[p] > near[best]) best = p;
    }
    return best;
  };
  for (std::size_t t = 0; t < s; ++t) {
    std::size_t pick = fixed.empty() && t == 0 ? 0 : farthest();
    out.centers.push_back(pick);
    add(pick);
  }
  out.radius = 0.0;
  for (double d : near) out.radius = std::max(out.radius, d);
  std::size_t next = farthest();
  out.witness = next == n ? 0.0 : near[next];
  return out;
}

std::size_t kcenter_candidate_count(std::size_t k) {
  std::size_t total = 1;
  std::size_t binom = 1;
  for (std::size_t j = 0; j <= k / 2; ++j) {
    if (j > 0) binom = binom * (k - j + 1) / j;
    total += binom;
  }
  return total;
}

KCenterResult stable_kcenter(const MetricPoints& pts, const std::vector<std::size_t>& prev,
                             std::size_t k, double a) {
  if (k > pts.size()) throw InfeasibleError("stable_kcenter: k exceeds the number of points");
  if (a < 0.0) throw DomainError("stable_kcenter: negative price");
  std::vector<std::size_t> old(prev);
  std::sort(old.begin(), old.end());
  if (old.size() != k || std::adjacent_find(old.begin(), old.end()) != old.end()) {
    throw ContractViolation("stable_kcenter: previous centers must be k distinct points");
  }
  for (std::size_t c : old) {
    if (c >= pts.size()) throw ContractViolation("previous center out of range");
  }

  KCenterResult best;
  bool have = false;
  std::size_t count = 0;
  auto consider = [&](std::vector<std::size_t> centers) {
    ++count;
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    std::size_t change = 0;
    for (std::size_t c : centers) {
      if (!std::binary_search(old.begin(), old.end(), c)) ++change;
    }
    double r = covering_radius(pts, centers);
    double obj = r + a * static_cast<double>(change);
    if (!have || obj < best.objective || (obj == best.objective && change < best.changeout)) {
      best = {centers, r, change, obj, 0};
      have = true;
    }
  };

  // Subsets keeping k - j old centers, j = 0..floor(k/2).
  for (std::size_t j = 0; j <= k / 2; ++j) {
    std::vector<bool> drop(k, false);
    std::fill(drop.begin(), drop.begin() + static_cast<long>(j), true);
    do {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < k; ++i) {
        if (!drop[i]) keep.push_back(old[i]);
      }
      GonzalezResult g = gonzalez_fixed(pts, keep, j);
      keep.insert(keep.end(), g.centers.begin(), g.centers.end());
      consider(std::move(keep));
    } while (std::prev_permutation(drop.begin(), drop.end()));
  }
  consider(gonzalez_fixed(pts, {}, k).centers);
  best.candidates = count;
  return best;
}

}  // namespace stablex
