#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "generators.hpp"
#include "ubq/content.hpp"

namespace ubq {
namespace {

const double kLog2Log3 = std::log(2.0) / std::log(3.0);

RegionSet cells(int base, int level, std::initializer_list<std::int64_t> coords) {
  std::vector<BadicCube> cubes;
  for (auto c : coords) cubes.push_back(BadicCube{base, level, {c}});
  return RegionSet::from_cubes(base, 1, cubes);
}

// Explicit enumeration of every b-adic antichain cover of E (d = 1), returning
// the cheapest. Exponential; meant for max_level <= 4 in base 2.
std::vector<double> all_cover_costs(const BadicCube& node, const RegionSet& E, double s, int max_level) {
  bool inside = false, meets = false;
  for (const auto& c : E.cubes) {
    if (c.level <= node.level && (c == node || c.is_ancestor_of(node))) inside = true;
    if (c.level >= node.level && (c == node || node.is_ancestor_of(c))) meets = true;
  }
  if (!inside && !meets) return {0.0};
  std::vector<double> out{std::pow(node.diameter(), s)};
  if (node.level == max_level) return out;
  std::vector<double> sums{0.0};
  for (const auto& child : node.children()) {
    const auto sub = all_cover_costs(child, E, s, max_level);
    std::vector<double> next;
    for (double a : sums)
      for (double b : sub) next.push_back(a + b);
    sums = next;
  }
  out.insert(out.end(), sums.begin(), sums.end());
  return out;
}

double brute_force_content(const RegionSet& E, double s, int max_level) {
  const auto costs = all_cover_costs(BadicCube{E.base, 0, {0}}, E, s, max_level);
  return *std::min_element(costs.begin(), costs.end());
}

TEST(ContentUpper, UnitIntervalIsOne) {
  for (int base : {2, 3, 5})
    for (int level : {0, 3, 6}) EXPECT_DOUBLE_EQ(content_upper(RegionSet::unit(1, base), 1.0, level), 1.0);
}

TEST(ContentUpper, CantorIdentity) {
  for (int k = 1; k <= 8; ++k) EXPECT_NEAR(content_upper(cantor_set(k), kLog2Log3, k), 1.0, 1e-9);
}

TEST(ContentUpper, TwoDyadicCells) {
  EXPECT_NEAR(content_upper(cells(2, 2, {0, 2}), 1.0, 2), 0.5, 1e-15);
}

TEST(ContentUpper, NegativeExponentRejected) {
  EXPECT_THROW(content_upper(RegionSet::unit(1, 2), -0.1, 2), Error);
}

TEST(ContentUpper, MatchesExhaustiveCoverEnumeration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int level = 1 + trial % 4;
    const RegionSet E = testgen::random_cells(rng, 2, 1, level, testgen::uniform(rng, 0.1, 0.8));
    const double s = testgen::uniform(rng, 0.0, 1.2);
    EXPECT_NEAR(content_upper(E, s, 4), brute_force_content(E, s, 4), 1e-12);
  }
}

TEST(ContentUpper, MonotoneInExponent) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const RegionSet E = testgen::random_cells(rng, 2 + trial % 2, 1 + trial % 2, 3, 0.3);
    const double s = testgen::uniform(rng, 0.0, 2.0);
    const double s2 = s + testgen::uniform(rng, 0.0, 1.0);
    EXPECT_GE(content_upper(E, s, 5), content_upper(E, s2, 5));
  }
}

TEST(ContentUpper, MonotoneInSets) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const RegionSet F = testgen::random_cells(rng, 2, 1 + trial % 2, 4, 0.4);
    const RegionSet E = testgen::random_subset(rng, F, 0.5);
    const double s = testgen::uniform(rng, 0.0, 2.0);
    EXPECT_LE(content_upper(E, s, 5), content_upper(F, s, 5) + 1e-15);
  }
}

// Smallest b-adic cube containing every cube of E.
BadicCube badic_hull(const RegionSet& E) {
  int level = E.max_level();
  for (; level > 0; --level) {
    const BadicCube a = E.cubes.front().ancestor(std::min(level, E.cubes.front().level));
    bool same = true;
    for (const auto& c : E.cubes) same = same && c.level >= level && c.ancestor(level) == a;
    if (same) return a;
  }
  return BadicCube{E.base, 0, std::vector<std::int64_t>(E.dim, 0)};
}

TEST(ContentUpper, BoundedByHullAndLeafCosts) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    const RegionSet E = testgen::random_cells(rng, 3, 1 + trial % 2, 2, 0.3);
    const double s = testgen::uniform(rng, 0.0, 2.0);
    double leaves = 0.0;
    for (const auto& c : E.cubes) leaves += std::pow(c.diameter(), s);
    const double v = content_upper(E, s, 4);
    EXPECT_LE(v, std::pow(badic_hull(E).diameter(), s) + 1e-12);
    EXPECT_LE(v, leaves + 1e-12);
  }
}

TEST(ContentUpper, DiameterCapForcesSmallCubes) {
  EXPECT_NEAR(content_upper(RegionSet::unit(1, 2), 0.5, 4, 0.25), 4.0 * 0.5, 1e-12);
}

TEST(ContentEstimate, WitnessCostsTheUpperBound) {
  const auto est = content_estimate(cells(2, 2, {0, 2}), 1.0, 3, true);
  EXPECT_NEAR(est.witness.cost(), est.upper, 1e-15);
  EXPECT_EQ(est.witness_count, 2u);
  EXPECT_LE(est.lower, est.upper);
}

TEST(Frostman, UnitIntervalIsUniform) {
  const auto m = frostman_lower(RegionSet::unit(1, 2), 1.0, 5);
  EXPECT_DOUBLE_EQ(m.total(), 1.0);
  EXPECT_NEAR(m.cube_mass(BadicCube{2, 3, {5}}), 0.125, 1e-15);
  EXPECT_NEAR(m.box_mass(Box{{0.25}, {0.75}}), 0.5, 1e-12);
}

TEST(Frostman, CantorSplitsEvenly) {
  const auto m = frostman_lower(cantor_set(5), kLog2Log3, 5);
  EXPECT_NEAR(m.total(), 1.0, 1e-12);
  EXPECT_NEAR(m.cube_mass(BadicCube{3, 1, {0}}), 0.5, 1e-12);
  EXPECT_NEAR(m.cube_mass(BadicCube{3, 2, {6}}), 0.25, 1e-12);
  EXPECT_NEAR(m.cube_mass(BadicCube{3, 1, {1}}), 0.0, 1e-15);
}

TEST(Frostman, TwoCellsSplitEqually) {
  const auto m = frostman_lower(cells(2, 2, {0, 2}), 1.0, 2);
  EXPECT_NEAR(m.total(), 0.5, 1e-15);
  EXPECT_NEAR(m.cube_mass(BadicCube{2, 2, {0}}), 0.25, 1e-15);
  EXPECT_NEAR(m.cube_mass(BadicCube{2, 2, {2}}), 0.25, 1e-15);
}

TEST(Frostman, ZeroContentRejected) {
  try {
    frostman_lower(RegionSet::from_cubes(2, 1, {}), 1.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(Frostman, CertificateHoldsOnEveryCube) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const int base = 2 + trial % 2;
    const RegionSet E = testgen::random_cells(rng, base, 1, 4, 0.35);
    const double s = testgen::uniform(rng, 0.1, 1.0);
    const int max_level = 6;
    const auto m = frostman_lower(E, s, max_level);
    EXPECT_NEAR(m.total(), content_upper(E, s, max_level), 1e-12);
    std::int64_t side = 1;
    for (int k = 0; k <= max_level; ++k, side *= base)
      for (std::int64_t c = 0; c < side; ++c) {
        const BadicCube q{base, k, {c}};
        ASSERT_LE(m.cube_mass(q), std::pow(q.diameter(), s) * (1 + 1e-12));
      }
  }
}

TEST(GTau, Examples) {
  EXPECT_DOUBLE_EQ(g_tau({1.0, 1.0}, 0.7), 0.7);
  EXPECT_DOUBLE_EQ(g_tau({1.0, 2.0}, 1.5), 2.0);
  EXPECT_DOUBLE_EQ(g_tau({1.0, 2.0, 3.0}, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(g_tau({2.0, 4.0}, 1.5), 2.0);  // normalized by tau_1
  EXPECT_THROW(g_tau({2.0, 1.0}, 1.0), Error);
}

TEST(RectContentSlope, SquareScalesLinearly) {
  const auto rep = rect_content_slope({1.0, 1.0}, 1.0, geometric_radii(0.25, 0.5, 5), 2, 10);
  EXPECT_NEAR(rep.slope, 1.0, 0.05);
}

TEST(RectContentSlope, FirstCoordinateDominates) {
  // At r = 1/4 and 1/8 the rectangle straddles the grid centre and the content is the root value 1.
  const auto rep = rect_content_slope({1.0, 3.0}, 0.5, geometric_radii(1.0 / 16, 0.5, 5), 2, 12);
  EXPECT_NEAR(g_tau({1.0, 3.0}, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(rep.slope, 0.5, 0.05);
}

TEST(RectContentSlope, RejectsLargeRadii) {
  EXPECT_THROW(rect_content_slope({1.0, 2.0}, 1.0, {0.5, 0.25}, 2, 8), Error);
}

TEST(EssentialContent, LebesgueBallWithinConstant) {
  const auto mu = CylinderMeasure::lebesgue(1, 2, 10);
  const RegionSet A = region_cover(Ball{{0.5}, 0.25}, 2, 8);
  for (double s : {0.3, 0.6, 1.0}) {
    const auto est = essential_content(A, mu, s, 8);
    EXPECT_GE(est.upper, std::pow(0.5, s) - 1e-12);
    EXPECT_LE(est.upper, 2.0 * std::pow(0.5, s));
    EXPECT_GT(est.lower, 0.0);
    EXPECT_LE(est.lower, std::pow(0.5, s));
  }
  EXPECT_NEAR(essential_content(A, mu, 1.0, 8).upper, 0.5, 1e-12);
}

TEST(EssentialContent, CantorFirstCylinder) {
  const auto mu = CylinderMeasure::cantor(10);
  const auto est = essential_content(cells(3, 1, {0}), mu, kLog2Log3, 10);
  EXPECT_NEAR(est.upper, 0.5, 1e-12);
  EXPECT_GT(est.lower, 0.0);
}

TEST(EssentialContent, CantorGapIsNull) {
  const auto mu = CylinderMeasure::cantor(10);
  const auto est = essential_content(cells(3, 1, {1}), mu, kLog2Log3, 10);
  EXPECT_EQ(est.upper, 0.0);
  EXPECT_EQ(est.lower, 0.0);
}

TEST(EssentialContent, DecayCertificateAboveMeasureDimension) {
  const auto est = essential_content(RegionSet::unit(1, 3), CylinderMeasure::cantor(10), 0.9, 10);
  EXPECT_TRUE(est.decay_certificate);
  EXPECT_EQ(est.lower, 0.0);
  ASSERT_EQ(est.decay_uppers.size(), 3u);
  EXPECT_GT(est.decay_uppers[0], est.decay_uppers[2]);
}

TEST(EssentialContent, BelowPlainContentAndMonotoneUnderPruning) {
  std::mt19937_64 rng(36);
  const auto mu = CylinderMeasure::cantor(8);
  for (int trial = 0; trial < 100; ++trial) {
    const RegionSet A = testgen::random_cells(rng, 3, 1, 3, 0.5);
    const RegionSet sub = testgen::random_subset(rng, A, 0.6);
    const double s = testgen::uniform(rng, 0.1, kLog2Log3);
    const EssentialContent ea(A, mu, 8), es(sub, mu, 8);
    EXPECT_LE(ea.upper(s), content_upper(A, s, 8) + 1e-12);
    EXPECT_LE(es.upper(s), ea.upper(s) + 1e-12);
    EXPECT_LE(ea.lower(s), ea.upper(s) + 1e-12);
  }
}

TEST(Concavity, Examples) {
  const auto leb = CylinderMeasure::lebesgue(1, 2, 10);
  EXPECT_TRUE(concavity_check(RegionSet::unit(1, 2), leb, 1.0, 2.0, 8).pass);
  const auto cantor = CylinderMeasure::cantor(8);
  const auto c = concavity_check(cantor_set(6), cantor, kLog2Log3, 2.0, 8);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.upper_scaled, 1.0, 1e-12);
  const auto q = concavity_check(cells(2, 2, {0}), leb, 1.0, 2.0, 8);
  EXPECT_TRUE(q.pass);
  EXPECT_NEAR(q.upper_scaled, 0.5, 1e-12);
}

}  // namespace
}  // namespace ubq
