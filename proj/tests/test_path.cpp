#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "ocone/path.hpp"

using namespace ocone;

namespace {

SkipFreePath sf(std::vector<int> v) { return SkipFreePath(std::move(v)); }
WalkPath wp(std::vector<int> v) { return WalkPath(std::move(v)); }

/// Reference mirror map written directly from the definition: v_k for
/// k <= T_a, 2a - v_k afterwards.
std::vector<int> oracle_reflect(const std::vector<int>& v, int a) {
  std::size_t t = v.size();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] == a) {
      t = k;
      break;
    }
  std::vector<int> out = v;
  for (std::size_t k = t + 1; k < v.size(); ++k) out[k] = 2 * a - v[k];
  return out;
}

/// All skip-free paths of horizon m, in base-3 order.
std::vector<SkipFreePath> all_skip_free(std::size_t m) {
  std::vector<SkipFreePath> out;
  std::size_t total = 1;
  for (std::size_t k = 0; k < m; ++k) total *= 3;
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<int> steps(m);
    std::size_t x = c;
    for (auto& d : steps) {
      d = static_cast<int>(x % 3) - 1;
      x /= 3;
    }
    out.push_back(SkipFreePath::from_increments(steps));
  }
  return out;
}

}  // namespace

TEST(HitTime, InfinityIsGreaterThanEveryIndex) {
  const HitTime inf = HitTime::infinity();
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_GT(inf, HitTime(1000000));
  EXPECT_GT(inf, std::size_t{123456789});
  EXPECT_EQ(inf, HitTime{});
  EXPECT_LT(HitTime(2), HitTime(3));
  EXPECT_EQ(HitTime(4), std::size_t{4});
  EXPECT_THROW((void)inf.index(), std::logic_error);
}

TEST(SkipFreePath, RejectsInvalidPaths) {
  EXPECT_THROW(sf({1, 2}), std::invalid_argument);
  EXPECT_THROW(sf({0, 2}), std::invalid_argument);
  EXPECT_THROW(sf({}), std::invalid_argument);
  EXPECT_NO_THROW(sf({0, 0, 1, 1, 0}));
}

TEST(WalkPath, RejectsFlatSteps) {
  EXPECT_THROW(wp({0, 0}), std::invalid_argument);
  EXPECT_THROW(wp({0, 1, 3}), std::invalid_argument);
}

TEST(WalkPath, BitEncodingRoundTrips) {
  for (std::size_t m = 0; m <= 10; ++m)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      const WalkPath w = WalkPath::from_bits(c, m);
      ASSERT_EQ(w.horizon(), m);
      ASSERT_EQ(w.to_bits(), c);
    }
  EXPECT_EQ(WalkPath::from_bits(0b011, 3), wp({0, 1, 2, 1}));
  EXPECT_THROW(WalkPath::from_bits(0b1000, 3), std::invalid_argument);
}

TEST(FirstPassage, Examples) {
  EXPECT_EQ(first_passage(sf({0, 1, 2, 3}), 2), HitTime(2));
  EXPECT_TRUE(first_passage(sf({0, -1, 0, -1}), 1).is_infinite());
  EXPECT_EQ(first_passage(sf({0, 1, 0, 1}), 0), HitTime(0));
}

TEST(Reflect, Examples) {
  EXPECT_EQ(reflect(sf({0, 1, 2, 3}), 2), sf({0, 1, 2, 1}));
  EXPECT_EQ(reflect(sf({0, -1, -2, -3}), 1), sf({0, -1, -2, -3}));
  const SkipFreePath once = reflect(sf({0, 1, 0, -1}), 0);
  EXPECT_EQ(once, sf({0, -1, 0, 1}));
  EXPECT_EQ(reflect(once, 0), sf({0, 1, 0, -1}));
  EXPECT_EQ(reflect(wp({0, 1, 2, 3}), 2), wp({0, 1, 2, 1}));
}

TEST(Reflect, AgreesWithOracleOnAllSkipFreePaths) {
  for (std::size_t m = 0; m <= 7; ++m)
    for (const auto& p : all_skip_free(m))
      for (int a = -3; a <= 4; ++a) ASSERT_EQ(reflect(p, a).values(), oracle_reflect(p.values(), a));
}

TEST(Reflect, InvolutionAndQvPreservationOnWalks) {
  for (std::size_t m = 0; m <= 12; ++m)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      const WalkPath s = WalkPath::from_bits(c, m);
      for (int a = -2; a <= 3; ++a) {
        const WalkPath r = reflect(s, a);
        ASSERT_EQ(reflect(r, a), s);
        ASSERT_EQ(quadratic_variation(r), quadratic_variation(s));
      }
    }
}

TEST(Reflect, FixedPointIffLevelNotHitBeforeLastStep) {
  for (std::size_t m = 1; m <= 10; ++m)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      const WalkPath s = WalkPath::from_bits(c, m);
      for (int a = -3; a <= 3; ++a) ASSERT_EQ(reflect(s, a) == s, first_passage(s, a) >= m) << c << " " << a;
    }
}

TEST(Reflect, QvPreservedOnSkipFreePaths) {
  for (std::size_t m = 0; m <= 8; ++m)
    for (const auto& p : all_skip_free(m))
      for (int a = -2; a <= 3; ++a) ASSERT_EQ(quadratic_variation(reflect(p, a)), quadratic_variation(p));
}

TEST(Reflect, CommutesWithTruncation) {
  for (std::size_t m = 0; m <= 6; ++m)
    for (const auto& p : all_skip_free(m))
      for (int a = -2; a <= 3; ++a)
        for (std::size_t j = 0; j <= m; ++j) ASSERT_EQ(truncate(reflect(p, a), j), reflect(truncate(p, j), a));
}

TEST(Reflect, ConjugationOfLevelZeroByLevelOneGivesMinusOne) {
  for (std::size_t m = 1; m <= 10; ++m)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      const WalkPath s = WalkPath::from_bits(c, m);
      ASSERT_EQ(reflect(reflect(reflect(s, 0), 1), 0), reflect(s, -1));
    }
  // The word 1,0,1 is not Theta^{-1}: on (0,-1) it returns (0,1).
  const WalkPath s = wp({0, -1});
  EXPECT_EQ(reflect(reflect(reflect(s, 1), 0), 1), wp({0, 1}));
  EXPECT_EQ(reflect(s, -1), s);
}

TEST(ExitReflect, Examples) {
  EXPECT_EQ(exit_reflect(sf({0, -1, 0, 1}), 1), sf({0, -1, -2, -3}));
  EXPECT_EQ(exit_reflect(sf({0, 1, 2, 3}), 2), reflect(sf({0, 1, 2, 3}), 2));
  EXPECT_EQ(exit_reflect(sf({0, 0, 0}), 1), sf({0, 0, 0}));
  EXPECT_THROW(exit_reflect(sf({0, 1}), -1), std::invalid_argument);
}

TEST(ExitReflect, MatchesReflectionAtTheLevelHitFirst) {
  for (std::size_t m = 0; m <= 7; ++m)
    for (const auto& p : all_skip_free(m))
      for (int a = 1; a <= 3; ++a) {
        const HitTime up = first_passage(p, a), down = first_passage(p, -a);
        const SkipFreePath expected = up < down ? reflect(p, a) : (down < up ? reflect(p, -a) : p);
        ASSERT_EQ(exit_reflect(p, a), expected);
      }
}

TEST(QuadraticVariation, Examples) {
  EXPECT_EQ(quadratic_variation(sf({0, 1, 2, 1})).values(), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(quadratic_variation(sf({0, 0, 1, 1})).values(), (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(quadratic_variation(reflect(sf({0, 1, 0, -1}), 1)).values(), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_THROW(QuadraticVariation({0, 2}), std::invalid_argument);
  EXPECT_THROW(QuadraticVariation({1}), std::invalid_argument);
}

TEST(EmbeddedWalk, Examples) {
  EXPECT_EQ(embedded_walk(sf({0, 0, 1, 1, 2})).walk, wp({0, 1, 2}));
  EXPECT_EQ(embedded_walk(sf({0, 1, 2, 3})).walk, wp({0, 1, 2, 3}));
  EXPECT_EQ(embedded_walk(reflect(sf({0, 0, 1, 0}), 1)).walk, wp({0, 1, 2}));
  EXPECT_EQ(reflect(embedded_walk(sf({0, 0, 1, 0})).walk, 1), wp({0, 1, 2}));
  EXPECT_EQ(embedded_walk(sf({0, 1, 1, 1})).stagnation_index, 1u);
  EXPECT_EQ(embedded_walk(sf({0, 0, 0})).walk, wp({0}));
}

TEST(EmbeddedWalk, CommutesWithReflection) {
  for (std::size_t m = 0; m <= 8; ++m)
    for (const auto& p : all_skip_free(m))
      for (int a = 0; a <= 2; ++a) ASSERT_EQ(embedded_walk(reflect(p, a)).walk, reflect(embedded_walk(p).walk, a));
}

TEST(PasteWalk, Examples) {
  EXPECT_EQ(paste_walk(sf({0, 1, 1, 1}), wp({0, -1, 0})), sf({0, 1, 0, 1}));
  EXPECT_EQ(paste_walk(sf({0, 1, 0, -1}), wp({0})), sf({0, 1, 0, -1}));
  const SkipFreePath x = paste_walk(sf({0, 1, 1, 1}), wp({0, -1, 0}));
  EXPECT_EQ(truncate(embedded_walk(x).walk, 1), embedded_walk(sf({0, 1, 1, 1})).walk);
}

TEST(PasteWalk, ShortAuxiliaryWalkIsAnError) {
  EXPECT_THROW(paste_walk(sf({0, 0, 0}), wp({0, 1})), InsufficientRandomness);
  EXPECT_THROW(paste_walk(sf({0, 0, 0}), wp({0, 1})), std::invalid_argument);
}

TEST(PasteWalk, PreservesPrefixAndRemovesStagnation) {
  for (std::size_t m = 0; m <= 6; ++m)
    for (const auto& p : all_skip_free(m)) {
      const WalkPath aux = WalkPath::from_bits(0b101101 & ((1u << m) - 1), m);
      const SkipFreePath x = paste_walk(p, aux);
      const std::size_t t = stagnation_index(quadratic_variation(p));
      ASSERT_EQ(truncate(x, t), truncate(p, t));
      for (std::size_t k = t + 1; k <= m; ++k) ASSERT_NE(x.increment(k), 0);
      const auto qx = quadratic_variation(x), qp = quadratic_variation(p);
      for (std::size_t k = 0; k <= t; ++k) ASSERT_EQ(qx[k], qp[k]);
    }
}
