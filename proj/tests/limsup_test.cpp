#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "ubq/content.hpp"
#include "ubq/limsup.hpp"

namespace ubq {
namespace {

const double kLog2Log3 = std::log(2.0) / std::log(3.0);

// Direct cell marking: every level-k cell of [0,1]^d tested against every box.
std::uint64_t marked_cells(const std::vector<Box>& boxes, int base, int level, std::size_t d) {
  const std::int64_t side = ipow_int(base, level);
  std::int64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= side;
  std::uint64_t count = 0;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    BadicCube c{base, level, std::vector<std::int64_t>(d)};
    std::int64_t rest = idx;
    for (std::size_t i = 0; i < d; ++i) {
      c.coords[i] = rest % side;
      rest /= side;
    }
    for (const auto& b : boxes)
      if (c.box().interiors_intersect(b)) {
        ++count;
        break;
      }
  }
  return count;
}

TEST(RationalBalls, SmallEnumeration) {
  const auto f = rational_balls(2, 1.0);
  ASSERT_EQ(f.size(), 5u);
  const double centers[] = {0.0, 1.0, 0.0, 0.5, 1.0};
  const double radii[] = {1.0, 1.0, 0.25, 0.25, 0.25};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(f.balls[i].center[0], centers[i]);
    EXPECT_DOUBLE_EQ(f.balls[i].radius, radii[i]);
    EXPECT_EQ(f.indices[i], i);
  }
  const auto g = rational_balls(1, 2.0);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_DOUBLE_EQ(g.balls[1].radius, 1.0);
}

TEST(RationalBalls, CountAndIndex) {
  const auto f = rational_balls(100, 1.0);
  EXPECT_EQ(f.size(), 5150u);
  for (std::int64_t q : {1, 7, 100})
    for (std::int64_t p : {std::int64_t{0}, q / 2, q}) {
      const std::size_t i = rational_index(p, q);
      EXPECT_NEAR(f.balls[i].center[0], static_cast<double>(p) / q, 1e-15);
      EXPECT_NEAR(f.balls[i].radius, 1.0 / (q * q), 1e-15);
    }
}

TEST(RationalBalls, WindowKeepsGlobalIndices) {
  const auto w = rational_window(10, 12, 1.5);
  ASSERT_EQ(w.size(), 11u + 12u + 13u);
  EXPECT_EQ(w.indices.front(), rational_index(0, 10));
  EXPECT_EQ(w.indices.back(), rational_index(12, 12));
  EXPECT_NEAR(w.balls.back().radius, std::pow(12.0, -3.0), 1e-15);
}

TEST(ShrinkingTargets, MiddleThirdDepthTwo) {
  const auto f = shrinking_targets(IFS::middle_third(), {0.0}, 1.0, 2);
  ASSERT_EQ(f.size(), 6u);
  const double centers[] = {0.0, 2.0 / 3, 0.0, 2.0 / 9, 2.0 / 3, 8.0 / 9};
  const double radii[] = {1.0 / 3, 1.0 / 3, 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(f.balls[i].center[0], centers[i], 1e-15);
    EXPECT_NEAR(f.balls[i].radius, radii[i], 1e-15);
  }
}

TEST(ShrinkingTargets, DepthZeroAndSquaredRadii) {
  EXPECT_TRUE(shrinking_targets(IFS::middle_third(), {0.0}, 1.0, 0).empty());
  const auto a = shrinking_targets(IFS::middle_third(), {1.0}, 1.0, 3);
  const auto b = shrinking_targets(IFS::middle_third(), {1.0}, 2.0, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.balls[i].radius, a.balls[i].radius * a.balls[i].radius, 1e-15);
}

TEST(Mahler, GenerationAndExtraGenerations) {
  // q^{2 delta} = 9 at q = 3, delta = 1: floor(log_3 9) + 1 = 3.
  EXPECT_EQ(mahler_generation(3, 1.0), 3);
  EXPECT_EQ(mahler_generation(2, 1.0), 2);
  EXPECT_EQ(mahler_extra_generations(0, 5, 0.1), 0);
  // 3 / (5 + N) <= 0.25 first at N = 7.
  EXPECT_EQ(mahler_extra_generations(3, 5, 0.25), 7);
}

TEST(Mahler, NoDigitOneNeedsNoExtraGenerations) {
  const auto stage = mahler_targets(40, 1.3);
  bool seen = false;
  for (const auto& t : stage.targets)
    if (t.ones == 0) {
      seen = true;
      EXPECT_EQ(t.N, 0);
      EXPECT_EQ(t.emitted, 0);
      ASSERT_EQ(t.region.cubes.size(), 1u);
      EXPECT_EQ(t.region.cubes[0], t.T);
    }
  EXPECT_TRUE(seen);
}

TEST(Mahler, RegionsLieInTheirBalls) {
  const auto stage = mahler_targets(60, 1.3);
  EXPECT_GT(stage.targets.size(), 500u);
  for (const auto& t : stage.targets) {
    const Ball ball{{static_cast<double>(t.p) / t.q}, std::pow(static_cast<double>(t.q), -2.6)};
    const Box bb = ball.box();
    EXPECT_TRUE(bb.contains(t.T.box()));
    for (const auto& c : t.region.cubes) ASSERT_TRUE(bb.contains(c.box()));
  }
}

TEST(Mahler, DigitFrequencyBoundAtHorizon) {
  const auto spec = DigitFreqSpec::standard();
  const auto stage = mahler_targets(60, 1.3, spec, 10);
  std::size_t checked = 0;
  for (const auto& t : stage.targets) {
    EXPECT_NEAR(t.eps, 1.0 / std::log(3.0 + t.q), 1e-15);
    const auto head = cube_digits(t.T);
    int ones = 0;
    for (int dgt : head) ones += dgt == 1;
    EXPECT_EQ(ones, t.ones);
    for (const auto& c : t.region.cubes) {
      const auto digits = cube_digits(c);
      ASSERT_EQ(static_cast<int>(digits.size()), t.n_q + t.emitted);
      int total = 0;
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (static_cast<int>(i) >= t.n_q) ASSERT_NE(digits[i], 1);
        total += digits[i] == 1;
      }
      if (!t.truncated) ASSERT_LE(static_cast<double>(total) / (t.n_q + t.N), t.eps + 1e-15);
    }
    if (!t.truncated) ++checked;
  }
  EXPECT_GT(checked, 0u);
}

TEST(Mahler, ContentIsTwoToMinusGeneration) {
  const auto stage = mahler_targets(30, 1.3);
  for (const auto& t : stage.targets) {
    const double c = content_upper(t.region, kLog2Log3, t.T.level + t.emitted);
    EXPECT_NEAR(c, std::ldexp(1.0, -t.n_q), 1e-12 * c);
    EXPECT_GE(c, 0.01 / static_cast<double>(t.q * t.q));
  }
}

TEST(CountCells, MatchesDirectMarking) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const int base = 2 + trial % 2;
    const int level = 1 + trial % (d == 1 ? 6 : 4);
    std::vector<Box> boxes;
    for (int k = 0; k < 5; ++k) {
      Box b;
      for (std::size_t i = 0; i < d; ++i) {
        const double x = testgen::uniform(rng), w = testgen::uniform(rng, 0.0, 0.2);
        b.lo.push_back(x - w);
        b.hi.push_back(x + w);
      }
      boxes.push_back(b);
    }
    EXPECT_EQ(count_cells(boxes, base, level), marked_cells(boxes, base, level, d));
  }
}

TEST(BoxCount, UnitSquare) {
  const auto bc = boxcount_dimension(RegionSet::unit(2, 2), 2, 6);
  EXPECT_NEAR(bc.slope, 2.0, 0.02);
}

TEST(BoxCount, TriadicCantor) {
  const auto bc = boxcount_dimension(cantor_set(12), 4, 10);
  EXPECT_NEAR(bc.slope, kLog2Log3, 0.03);
  EXPECT_GT(bc.r2, 0.999);
}

TEST(BoxCount, SingleBallAtFineLevelsHasFullSlope) {
  const std::vector<Box> ball{Ball{{0.3, 0.6}, 0.05}.box()};
  const auto bc = boxcount_dimension(ball, 2, 8, 11);
  EXPECT_NEAR(bc.slope, 2.0, 0.05);
}

TEST(BoxCount, Errors) {
  EXPECT_THROW(boxcount_dimension(cantor_set(6), 2, 4), Error);
  EXPECT_THROW(boxcount_dimension(std::vector<Box>{}, 2, 1, 6), Error);
}

TEST(BoxCount, RationalWindowAtMatchedScale) {
  const std::int64_t Q = 64;
  const double delta = 2.0;
  const auto stage = rational_stage(Q, 2 * Q, delta);
  EXPECT_EQ(stage.generator_id, "rational_balls");
  const int level = matched_level(Q, delta, 2);
  EXPECT_EQ(level, static_cast<int>(std::lround(2 * delta * std::log2(64.0))));
  EXPECT_NEAR(matched_scale_dimension(stage.boxes(), 2, level), 1.0 / delta, 0.1);
}

}  // namespace
}  // namespace ubq
