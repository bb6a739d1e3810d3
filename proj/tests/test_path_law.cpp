#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ocone/path_io.hpp"
#include "ocone/path_law.hpp"

using namespace ocone;

namespace {

SkipFreePath sf(std::vector<int> v) { return SkipFreePath(std::move(v)); }
QuadraticVariation qv(std::vector<int> v) { return QuadraticVariation(std::move(v)); }
Rational q(long n, long d) { return Rational(n, d); }

/// Law as a text-keyed table, for compact expectations.
std::map<std::string, Rational> table(const PathLaw& law) {
  std::map<std::string, Rational> out;
  for (const auto& [p, w] : law.support()) out[to_text(p)] = w;
  return out;
}

/// Time change law with A_n advancing at each step independently with
/// probability 1/2, as an explicit finite law.
TimeChangeLaw coin_clock(std::size_t m) {
  TimeChangeLaw tc;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
    std::vector<int> a{0};
    for (std::size_t k = 0; k < m; ++k) a.push_back(a.back() + static_cast<int>((c >> k) & 1U));
    tc.emplace_back(qv(a), inverse_power_of_two(m));
  }
  return tc;
}

}  // namespace

TEST(Rational, TextForm) {
  EXPECT_EQ(to_string(q(1, 4)), "1/4");
  EXPECT_EQ(to_string(q(2, 1)), "2");
  EXPECT_EQ(inverse_power_of_two(5), q(1, 32));
}

TEST(PathLaw, Validation) {
  EXPECT_THROW(PathLaw(1, {{sf({0, 1}), q(1, 2)}}), std::invalid_argument);
  EXPECT_THROW(PathLaw(1, {{sf({0, 1}), q(3, 2)}, {sf({0, -1}), q(-1, 2)}}), std::invalid_argument);
  EXPECT_THROW(PathLaw(2, {{sf({0, 1}), q(1, 1)}}), std::invalid_argument);
  EXPECT_THROW(PathLaw::from_entries(1, {{sf({0, 1}), q(-1, 2)}}), std::invalid_argument);
  const PathLaw l = PathLaw::from_entries(1, {{sf({0, 1}), q(1, 2)}, {sf({0, 1}), q(1, 2)}, {sf({0, -1}), 0}});
  EXPECT_EQ(l.size(), 1u);
  EXPECT_EQ(l.mass(sf({0, 1})), 1);
  EXPECT_EQ(l.mass(sf({0, -1})), 0);
}

TEST(EnumerateLaw, BernoulliWalk) {
  const PathLaw l = enumerate_law(bernoulli_walk_spec(), 2);
  EXPECT_EQ(table(l), (std::map<std::string, Rational>{{"++", q(1, 4)}, {"+-", q(1, 4)}, {"-+", q(1, 4)}, {"--", q(1, 4)}}));
}

TEST(EnumerateLaw, OconeTimeChangeMatchesBruteForce) {
  // A = (0,1,1) or (0,1,2) with probability 1/2 each; masses frozen from a
  // brute force over (walk, A) pairs.
  const PathLaw l = enumerate_law(ocone_time_change_spec({{qv({0, 1, 1}), q(1, 2)}, {qv({0, 1, 2}), q(1, 2)}}), 2);
  EXPECT_EQ(table(l), (std::map<std::string, Rational>{{"+0", q(1, 4)},
                                                         {"-0", q(1, 4)},
                                                         {"++", q(1, 8)},
                                                         {"+-", q(1, 8)},
                                                         {"-+", q(1, 8)},
                                                         {"--", q(1, 8)}}));
}

TEST(EnumerateLaw, ZeroProcessAndCaps) {
  EXPECT_EQ(table(enumerate_law(zero_process_spec(), 3)), (std::map<std::string, Rational>{{"000", 1}}));
  EXPECT_THROW(enumerate_law(bernoulli_walk_spec(), 17), std::out_of_range);
  EXPECT_NO_THROW(enumerate_law(bernoulli_walk_spec(), 4, 4));
  EXPECT_THROW(enumerate_law(table_spec({{sf({0, 1}), q(1, 2)}}), 1), std::invalid_argument);
}

TEST(EnumerateLaw, DependentTimeChange) {
  EXPECT_EQ(table(enumerate_law(dependent_time_change_spec(), 3)),
            (std::map<std::string, Rational>{{"--0", q(1, 4)},
                                             {"-+0", q(1, 4)},
                                             {"+--", q(1, 8)},
                                             {"+-+", q(1, 8)},
                                             {"++-", q(1, 8)},
                                             {"+++", q(1, 8)}}));
}

TEST(PushforwardReflect, Examples) {
  const PathLaw b2 = enumerate_law(bernoulli_walk_spec(), 2);
  EXPECT_EQ(pushforward_reflect(b2, 1), b2);
  const PathLaw unit(3, {{sf({0, 1, 2, 3}), 1}});
  EXPECT_EQ(table(pushforward_reflect(unit, 2)), (std::map<std::string, Rational>{{"++-", 1}}));
  EXPECT_EQ(pushforward_reflect(unit, 5), unit);
}

TEST(PushforwardReflect, PreservesQvMarginalAndIsAnInvolution) {
  const std::vector<PathLaw> laws{enumerate_law(bernoulli_walk_spec(), 5), enumerate_law(dependent_time_change_spec(), 6),
                                  enumerate_law(ocone_time_change_spec(coin_clock(5)), 5)};
  for (const auto& l : laws)
    for (int a = -1; a <= 3; ++a) {
      const PathLaw r = pushforward_reflect(l, a);
      ASSERT_EQ(qv_marginal(r), qv_marginal(l));
      ASSERT_EQ(pushforward_reflect(r, a), l);
    }
}

TEST(LawsEqual, WitnessIsFirstDiscrepancy) {
  const PathLaw b4 = enumerate_law(bernoulli_walk_spec(), 4);
  EXPECT_TRUE(laws_equal(b4, b4).equal);
  EXPECT_TRUE(laws_equal(b4, pushforward_reflect(b4, 1)).equal);

  const PathLaw a(2, {{sf({0, 1, 2}), q(1, 2)}, {sf({0, -1, 0}), q(1, 2)}});
  const PathLaw b(2, {{sf({0, 1, 2}), q(1, 2)}, {sf({0, 1, 0}), q(1, 2)}});
  const LawComparison c = laws_equal(a, b);
  EXPECT_FALSE(c.equal);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_EQ(c.witness->path, sf({0, -1, 0}));
  EXPECT_EQ(c.witness->left, q(1, 2));
  EXPECT_EQ(c.witness->right, 0);
  EXPECT_THROW(laws_equal(b4, enumerate_law(bernoulli_walk_spec(), 3)), std::invalid_argument);
}

TEST(ConditionalEmbeddedLaw, BernoulliIsUniform) {
  const auto cond = conditional_embedded_law(enumerate_law(bernoulli_walk_spec(), 3));
  ASSERT_EQ(cond.size(), 1u);
  const auto& [k, cls] = *cond.begin();
  EXPECT_EQ(k, qv({0, 1, 2, 3}));
  EXPECT_TRUE(cls.is_uniform());
  EXPECT_EQ(cls.conditional.size(), 8u);
  for (const auto& [w, p] : cls.conditional) EXPECT_EQ(p, q(1, 8));
}

TEST(ConditionalEmbeddedLaw, OconeClassesAreUniform) {
  const PathLaw l = enumerate_law(ocone_time_change_spec({{qv({0, 1, 1}), q(1, 2)}, {qv({0, 1, 2}), q(1, 2)}}), 2);
  const auto cond = conditional_embedded_law(l);
  ASSERT_EQ(cond.size(), 2u);
  for (const auto& [k, cls] : cond) {
    EXPECT_EQ(cls.mass, q(1, 2));
    EXPECT_TRUE(cls.is_uniform());
  }
}

TEST(OconeCheck, BernoulliWalkPasses) {
  for (std::size_t m = 1; m <= 8; ++m) {
    const OconeReport r = ocone_check(enumerate_law(bernoulli_walk_spec(), m));
    EXPECT_TRUE(r.is_product);
    EXPECT_TRUE(r.embedded_uniform);
    EXPECT_FALSE(r.witness.has_value());
    EXPECT_EQ(r.stagnating_mass, 0);
  }
}

TEST(OconeCheck, OconeTimeChangePasses) {
  const PathLaw l = enumerate_law(ocone_time_change_spec({{qv({0, 1, 1}), q(1, 2)}, {qv({0, 1, 2}), q(1, 2)}}), 2);
  const OconeReport r = ocone_check(l);
  EXPECT_TRUE(r.is_ocone());
  EXPECT_EQ(r.stagnating_mass, q(1, 2));
  EXPECT_EQ(r.n_classes, 2u);
  for (std::size_t m = 1; m <= 6; ++m) {
    const PathLaw lm = enumerate_law(ocone_time_change_spec(coin_clock(m)), m);
    EXPECT_TRUE(ocone_check(lm).is_ocone()) << m;
    EXPECT_TRUE(ocone_check(lm, {.pasted = true}).is_ocone()) << m;
  }
}

TEST(OconeCheck, DependentTimeChangeFails) {
  const OconeReport r = ocone_check(enumerate_law(dependent_time_change_spec(), 3));
  EXPECT_FALSE(r.is_ocone());
  EXPECT_FALSE(r.is_product);
  EXPECT_FALSE(r.embedded_uniform);
  ASSERT_TRUE(r.witness.has_value());
  // Class [M] = (0,1,2,2): the embedded walk always starts with -1.
  EXPECT_EQ(r.witness->qv_class, qv({0, 1, 2, 2}));
  EXPECT_EQ(r.witness->kind, OconeWitness::Kind::reflection);
  EXPECT_EQ(r.witness->level, 0);
  EXPECT_EQ(r.witness->walk, WalkPath({0, 1, 2}));
  EXPECT_EQ(r.witness->mass, 0);
  EXPECT_EQ(r.witness->reference, q(1, 2));
}

TEST(OconeCheck, ClassDependentConditionalsBreakTheProduct) {
  // The two-step class is uniform; the one-step class only sees +1.
  const PathLaw l(2, {{sf({0, 1, 1}), q(1, 2)}, {sf({0, 1, 2}), q(1, 8)}, {sf({0, 1, 0}), q(1, 8)},
                      {sf({0, -1, 0}), q(1, 8)}, {sf({0, -1, -2}), q(1, 8)}});
  const OconeReport r = ocone_check(l);
  EXPECT_FALSE(r.embedded_uniform);
  EXPECT_FALSE(r.is_product);
}

TEST(PasteFairWalk, RemovesStagnationAndKeepsMass) {
  const PathLaw l = enumerate_law(ocone_time_change_spec(coin_clock(4)), 4);
  const PathLaw p = paste_fair_walk(l);
  Rational total = 0;
  for (const auto& [path, w] : p.support()) {
    total += w;
    ASSERT_EQ(stagnation_index(quadratic_variation(path)), 4u) << to_text(path);
  }
  EXPECT_EQ(total, 1);
  EXPECT_TRUE(ocone_check(p).is_ocone());
}

TEST(DefinitionOneLaws, InvariantUnderEveryLevel) {
  std::mt19937_64 gen(20240601);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial % 6;
    // Random clock law on the increasing skip-free paths of horizon m.
    TimeChangeLaw tc;
    std::uniform_int_distribution<int> weight(0, 5);
    long total = 0;
    std::vector<std::pair<QuadraticVariation, long>> raw;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      std::vector<int> a{0};
      for (std::size_t k = 0; k < m; ++k) a.push_back(a.back() + static_cast<int>((c >> k) & 1U));
      const int w = weight(gen);
      total += w;
      raw.emplace_back(qv(a), w);
    }
    if (total == 0) continue;
    for (const auto& [a, w] : raw) tc.emplace_back(a, Rational(w, total));
    const PathLaw l = enumerate_law(ocone_time_change_spec(tc), m);
    for (int a = -3; a <= 4; ++a) ASSERT_TRUE(laws_equal(l, pushforward_reflect(l, a)).equal) << trial << " " << a;
    ASSERT_TRUE(ocone_check(l).is_ocone());
  }
}
