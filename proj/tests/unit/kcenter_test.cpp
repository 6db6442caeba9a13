#include <gtest/gtest.h>

#include <random>

#include "stablex/kcenter.hpp"
#include "stablex/oracle/oracle.hpp"
#include "support.hpp"

namespace stablex {
namespace {

MetricPoints random_points(std::mt19937_64& g, std::size_t n) {
  std::vector<std::vector<double>> c(n);
  for (auto& p : c) p = {testing::uniform(g, 0, 10), testing::uniform(g, 0, 10)};
  return MetricPoints::from_coordinates(c);
}

std::vector<std::size_t> random_centers(std::mt19937_64& g, std::size_t n, std::size_t k) {
  OutputSet s = testing::random_subset(g, n, k);
  return {s.begin(), s.end()};
}

TEST(MetricPoints, MatrixValidation) {
  EXPECT_THROW(MetricPoints::from_matrix({{0, 1}, {2, 0}}), ContractViolation);
  EXPECT_THROW(MetricPoints::from_matrix({{1, 1}, {1, 0}}), ContractViolation);
  EXPECT_THROW(MetricPoints::from_matrix({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), ContractViolation);
  MetricPoints ok = MetricPoints::from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  EXPECT_EQ(ok.distance(0, 2), 2.0);
}

TEST(Gonzalez, LineOfThree) {
  MetricPoints line = MetricPoints::from_coordinates({{0}, {1}, {2}});
  GonzalezResult r = gonzalez_fixed(line, {}, 1);
  EXPECT_EQ(r.centers, std::vector<std::size_t>{0});
  EXPECT_DOUBLE_EQ(r.radius, 2.0);
  EXPECT_LE(r.radius, 2.0 * oracle::exhaustive_kcenter_radius(line.matrix(), {}, 1));
}

TEST(Gonzalez, CoveredByFixedCenters) {
  MetricPoints line = MetricPoints::from_coordinates({{0}, {1}, {2}, {3}});
  double r0 = covering_radius(line, {1, 2});
  for (std::size_t s = 0; s <= 2; ++s) EXPECT_LE(gonzalez_fixed(line, {1, 2}, s).radius, r0);
  GonzalezResult clamped = gonzalez_fixed(line, {1, 2}, 5);
  EXPECT_TRUE(clamped.clamped);
  EXPECT_EQ(clamped.centers.size(), 2u);
  EXPECT_EQ(clamped.radius, 0.0);
}

TEST(Gonzalez, TwoApproximationWithFixedCenters) {
  std::mt19937_64 g(81);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = testing::pick(g, 3, 12);
    MetricPoints pts = random_points(g, n);
    std::size_t f = testing::pick(g, 0, std::min<std::size_t>(2, n - 1));
    std::vector<std::size_t> fixed = random_centers(g, n, f);
    std::size_t s = testing::pick(g, f == 0 ? 1 : 0, std::min<std::size_t>(3, n - f));
    GonzalezResult r = gonzalez_fixed(pts, fixed, s);
    double opt = oracle::exhaustive_kcenter_radius(pts.matrix(), fixed, s);
    EXPECT_LE(r.radius, 2.0 * opt + 1e-9);
    EXPECT_EQ(r.centers.size(), s);
    // The witness is a lower bound of twice the optimum.
    EXPECT_LE(r.witness, 2.0 * opt + 1e-9);
  }
}

TEST(StableKCenter, CandidateCount) {
  EXPECT_EQ(kcenter_candidate_count(1), 2u);
  EXPECT_EQ(kcenter_candidate_count(2), 4u);
  EXPECT_EQ(kcenter_candidate_count(3), 5u);
  EXPECT_EQ(kcenter_candidate_count(4), 12u);
  std::mt19937_64 g(82);
  for (std::size_t k = 1; k <= 6; ++k) {
    MetricPoints pts = random_points(g, 12);
    KCenterResult r = stable_kcenter(pts, random_centers(g, 12, k), k, 1.0);
    EXPECT_EQ(r.candidates, kcenter_candidate_count(k));
  }
}

TEST(StableKCenter, PriceEnds) {
  std::mt19937_64 g(83);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t n = testing::pick(g, 4, 12);
    std::size_t k = testing::pick(g, 1, 3);
    MetricPoints pts = random_points(g, n);
    std::vector<std::size_t> prev = random_centers(g, n, k);
    KCenterResult zero = stable_kcenter(pts, prev, k, 0.0);
    EXPECT_LE(zero.radius, gonzalez_fixed(pts, {}, k).radius + 1e-12);
    KCenterResult frozen = stable_kcenter(pts, prev, k, 1e9);
    EXPECT_EQ(frozen.centers, prev);
    EXPECT_EQ(frozen.changeout, 0u);
  }
}

TEST(StableKCenter, GuaranteeAgainstExhaustiveOptimum) {
  std::mt19937_64 g(84);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = testing::pick(g, 3, 10);
    std::size_t k = testing::pick(g, 1, std::min<std::size_t>(3, n));
    MetricPoints pts = random_points(g, n);
    std::vector<std::size_t> prev = random_centers(g, n, k);
    double a = testing::uniform(g, 0, 4);
    KCenterResult r = stable_kcenter(pts, prev, k, a);
    EXPECT_EQ(r.centers.size(), k);
    EXPECT_NEAR(r.objective, r.radius + a * static_cast<double>(r.changeout), 1e-12);
    EXPECT_NEAR(r.radius, covering_radius(pts, r.centers), 1e-12);
    std::vector<Key> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    double bound = kInfinity;
    for (const OutputSet& c : oracle::k_subsets(all, k)) {
      std::vector<std::size_t> cs(c.begin(), c.end());
      double radius = oracle::exhaustive_kcenter_radius(pts.matrix(), cs, 0);
      std::size_t change = 0;
      for (std::size_t v : cs) change += std::find(prev.begin(), prev.end(), v) == prev.end();
      bound = std::min(bound, 2.0 * radius + 2.0 * a * static_cast<double>(change));
    }
    EXPECT_LE(r.objective, bound + 1e-9);
  }
}

}  // namespace
}  // namespace stablex
