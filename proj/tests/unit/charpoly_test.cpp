#include <gtest/gtest.h>

#include <cmath>

#include "skipfree/charpoly.hpp"
#include "support/random_chains.hpp"

namespace skipfree {
namespace {

using testing::ChainRng;

TEST(DiscreteCharpoly, BaseCase) {
  const auto seq = discrete_charpoly_seq(testing::geometric_chain());
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq[0], Polynomial{1.0});
  EXPECT_EQ(seq[1], (Polynomial{1.0, -0.5}));
}

TEST(DiscreteCharpoly, TwoStateExampleMatchesHandDeterminant) {
  // (1 - 0.2 s)(1 - 0.3 s) - 0.8 * 0.3 s^2
  const auto g = discrete_charpoly_seq(testing::example_d2()).back();
  ASSERT_EQ(g.degree(), 2u);
  EXPECT_EQ(g[0], 1.0);
  EXPECT_NEAR(g[1], -0.5, 1e-15);
  EXPECT_NEAR(g[2], -0.18, 1e-15);
}

TEST(DiscreteCharpoly, PureBirthIsConstantOne) {
  for (const auto& g : discrete_charpoly_seq(testing::pure_birth_discrete(5))) EXPECT_EQ(g, Polynomial{1.0});
}

TEST(ContinuousCharpoly, Examples) {
  EXPECT_EQ(continuous_charpoly_seq(ContinuousChain({2.0}, {{}})).back(), (Polynomial{2.0, 1.0}));
  EXPECT_EQ(continuous_charpoly_seq(testing::pure_birth_continuous({1.0, 2.0})).back(), (Polynomial{2.0, 3.0, 1.0}));
  // (s + 1)(s + 2) - beta_{1,0} alpha_0
  EXPECT_EQ(continuous_charpoly_seq(testing::back_jump_chain()).back(), (Polynomial{1.0, 3.0, 1.0}));
}

TEST(DirectDeterminant, Examples) {
  EXPECT_DOUBLE_EQ(direct_determinant((Matrix(1, 1) << 0.5).finished(), 1.0, TimeKind::discrete), 0.5);
  EXPECT_NEAR(direct_determinant((Matrix(2, 2) << 0.2, 0.8, 0.3, 0.3).finished(), 1.0, TimeKind::discrete), 0.32, 1e-15);
  EXPECT_DOUBLE_EQ(direct_determinant((Matrix(2, 2) << -1.0, 1.0, 0.0, -2.0).finished(), 0.0, TimeKind::continuous), 2.0);
  EXPECT_EQ(direct_determinant((Matrix(2, 2) << 1.0, 1.0, 1.0, 1.0).finished(), 0.0, TimeKind::continuous), 0.0);
}

// The recurrence polynomial agrees with elimination on every leading block.
TEST(CharpolyProperty, MatchesDirectDeterminantOnEveryBlock) {
  ChainRng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto dc = testing::random_discrete(rng, rng.integer(1, 10));
    const auto dseq = discrete_charpoly_seq(dc);
    const auto cc = testing::random_continuous(rng, rng.integer(1, 10));
    const auto cseq = continuous_charpoly_seq(cc);
    for (int k = 0; k < 20; ++k) {
      const double s = rng.uniform(-1.0, 1.0);
      for (std::size_t n = 0; n < dc.d(); ++n) {
        const double direct = direct_determinant(transient_block(dc, n), s, TimeKind::discrete);
        EXPECT_LE(std::abs(dseq[n + 1](s) - direct), 1e-10 * (1.0 + std::abs(direct)));
      }
      const double t = rng.uniform(0.0, 5.0);
      for (std::size_t n = 0; n < cc.d(); ++n) {
        const double direct = direct_determinant(transient_block(cc, n), t, TimeKind::continuous);
        EXPECT_LE(std::abs(cseq[n + 1](t) - direct), 1e-10 * (1.0 + std::abs(direct)));
      }
    }
  }
}

TEST(CharpolyProperty, ExactNormalisationAndDegrees) {
  ChainRng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const auto dseq = discrete_charpoly_seq(testing::random_discrete(rng, rng.integer(1, 12)));
    for (std::size_t n = 0; n < dseq.size(); ++n) {
      EXPECT_EQ(dseq[n][0], 1.0);
      EXPECT_LE(dseq[n].degree(), n);
    }
    const auto cseq = continuous_charpoly_seq(testing::random_continuous(rng, rng.integer(1, 12)));
    for (std::size_t n = 0; n < cseq.size(); ++n) {
      EXPECT_EQ(cseq[n].degree(), n);
      EXPECT_EQ(cseq[n].coeffs().back(), 1.0);
    }
  }
}

TEST(CharpolyProperty, ShiftedPolynomialMatchesSubstitution) {
  ChainRng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = testing::random_discrete(rng, rng.integer(1, 10));
    const auto shifted = discrete_charpoly_shifted(c);
    const Polynomial g = charpoly(c);
    double ups = 1.0;
    for (double p : c.up_probs()) ups *= p;
    EXPECT_LE(std::abs(static_cast<double>(shifted[0]) - ups), 1e-10 * ups);
    for (double u : {-0.7, -0.2, 0.3, 0.9}) {
      long double acc = 0.0L;
      for (std::size_t k = shifted.size(); k-- > 0;) acc = acc * u + shifted[k];
      EXPECT_NEAR(static_cast<double>(acc), g(1.0 + u), 1e-12);
    }
  }
}

}  // namespace
}  // namespace skipfree
