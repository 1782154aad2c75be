#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "skipfree/spectral.hpp"
#include "support/random_chains.hpp"

namespace skipfree {
namespace {

using cplx = std::complex<double>;
using testing::ChainRng;

TEST(Roots, QuadraticAgainstClosedForm) {
  const auto rep = find_roots(Polynomial{-0.18, -0.5, 1.0});
  ASSERT_EQ(rep.roots.size(), 2u);
  const double hi = (0.5 + std::sqrt(0.97)) / 2.0, lo = (0.5 - std::sqrt(0.97)) / 2.0;
  const double a = rep.roots[0].real(), b = rep.roots[1].real();
  EXPECT_NEAR(std::max(a, b), hi, 1e-14);
  EXPECT_NEAR(std::min(a, b), lo, 1e-14);
}

TEST(Roots, HighDegreeWithComplexRoots) {
  // (x^2 + 1)(x - 3)(x + 0.5)(x - 0.25)
  const auto p = from_roots({{0, 1}, {0, -1}, {3, 0}, {-0.5, 0}, {0.25, 0}});
  std::vector<double> c;
  for (const auto& z : p.coeffs()) c.push_back(z.real());
  const auto rep = find_roots(Polynomial(c));
  ASSERT_EQ(rep.roots.size(), 5u);
  EXPECT_FALSE(rep.companion_fallback);
  for (const cplx want : {cplx(0, 1), cplx(0, -1), cplx(3, 0), cplx(-0.5, 0), cplx(0.25, 0)}) {
    double best = 1e9;
    for (const auto& z : rep.roots) best = std::min(best, std::abs(z - want));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(Roots, ExhaustedBudgetFallsBackToCompanion) {
  RootOptions opt;
  opt.max_iterations = 1;
  const auto rep = find_roots(Polynomial{6.0, -5.0, 1.0}, opt);  // (x-2)(x-3)
  EXPECT_TRUE(rep.companion_fallback);
  EXPECT_LE(rep.max_residual, 1e-9);
}

TEST(EigenvaluesDiscrete, Examples) {
  const auto s1 = eigenvalues_discrete(testing::geometric_chain());
  ASSERT_EQ(s1.values.size(), 1u);
  EXPECT_NEAR(s1.values[0].real(), 0.5, 1e-15);
  EXPECT_EQ(s1.classification, Classification::RealNonnegative);

  const auto s2 = eigenvalues_discrete(testing::example_d2());
  ASSERT_EQ(s2.values.size(), 2u);
  EXPECT_NEAR(s2.values[0].real(), (0.5 + std::sqrt(0.97)) / 2.0, 1e-12);
  EXPECT_NEAR(s2.values[1].real(), (0.5 - std::sqrt(0.97)) / 2.0, 1e-12);
  EXPECT_EQ(s2.classification, Classification::RealMixedSign);

  const auto s3 = eigenvalues_discrete(testing::pure_birth_discrete(3));
  ASSERT_EQ(s3.values.size(), 3u);
  for (const auto& v : s3.values) EXPECT_EQ(v, cplx(0.0));
  EXPECT_EQ(s3.classification, Classification::RealNonnegative);
}

TEST(EigenvaluesDiscrete, DegreeDeficitAddsZeros) {
  // r_1 = 0 and no down-jumps: P_1 = [[0.5, 0.5], [0, 0]] has eigenvalues {0.5, 0}.
  const DiscreteChain c({0.5, 0.0}, {0.5, 1.0}, {{}, {0.0}});
  const auto s = eigenvalues_discrete(c);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0].real(), 0.5, 1e-15);
  EXPECT_EQ(s.values[1], cplx(0.0));
}

TEST(EigenvaluesContinuous, Examples) {
  const auto s1 = eigenvalues_continuous(ContinuousChain({2.0}, {{}}));
  EXPECT_NEAR(s1.values.at(0).real(), 2.0, 1e-15);

  const auto s2 = eigenvalues_continuous(testing::pure_birth_continuous({1.0, 2.0}));
  EXPECT_NEAR(s2.values.at(0).real(), 1.0, 1e-14);
  EXPECT_NEAR(s2.values.at(1).real(), 2.0, 1e-14);
  EXPECT_EQ(s2.classification, Classification::RealNonnegative);

  const auto s3 = eigenvalues_continuous(testing::back_jump_chain());
  EXPECT_NEAR(s3.values.at(0).real(), (3.0 - std::sqrt(5.0)) / 2.0, 1e-14);
  EXPECT_NEAR(s3.values.at(1).real(), (3.0 + std::sqrt(5.0)) / 2.0, 1e-14);
  EXPECT_EQ(s3.classification, Classification::RealNonnegative);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify({cplx(0.5)}, 1e-9), Classification::RealNonnegative);
  EXPECT_EQ(classify({cplx(0.742443), cplx(-0.242443)}, 1e-9), Classification::RealMixedSign);
  EXPECT_EQ(classify({cplx(0.3, 0.2), cplx(0.3, -0.2)}, 1e-9), Classification::Complex);
  EXPECT_EQ(classify({cplx(0.3, 1e-12)}, 1e-9), Classification::RealNonnegative);
  EXPECT_EQ(classify({cplx(-1e-12)}, 1e-9), Classification::RealNonnegative);
}

TEST(SpectrumProperty, ProductIdentitiesAndReconstruction) {
  ChainRng rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dc = testing::random_discrete(rng, rng.integer(1, 10));
    const auto ds = eigenvalues_discrete(dc);
    cplx prod = 1.0;
    double ups = 1.0;
    for (std::size_t i = 0; i < ds.values.size(); ++i) prod *= ds.complement(i);
    for (double p : dc.up_probs()) ups *= p;
    EXPECT_LE(std::abs(prod - ups), 1e-8 * ups);
    for (const auto& v : ds.values) EXPECT_LT(std::abs(v), 1.0 + 1e-9);
    // prod (1 - lambda_i s) has coefficients of g.
    const Polynomial g = charpoly(dc);
    ComplexPolynomial rebuilt{cplx(1.0)};
    for (const auto& v : ds.values) rebuilt = rebuilt * ComplexPolynomial{cplx(1.0), -v};
    for (std::size_t k = 0; k <= dc.d(); ++k)
      EXPECT_LE(std::abs(rebuilt[k] - g[k]), 1e-8 * std::max(1.0, std::abs(g[k])));

    const auto cc = testing::random_continuous(rng, rng.integer(1, 10));
    const auto cs = eigenvalues_continuous(cc);
    cplx lprod = 1.0;
    double alphas = 1.0;
    for (const auto& v : cs.values) lprod *= v;
    for (double a : cc.up_rates()) alphas *= a;
    EXPECT_LE(std::abs(lprod - alphas), 1e-8 * alphas);
    for (const auto& v : cs.values) EXPECT_GT(v.real(), -1e-9);
    const Polynomial h = charpoly(cc);
    const auto hr = from_roots([&] {
      std::vector<cplx> r;
      for (const auto& v : cs.values) r.push_back(-v);
      return r;
    }());
    for (std::size_t k = 0; k <= cc.d(); ++k)
      EXPECT_LE(std::abs(hr[k] - h[k]), 1e-8 * std::max(1.0, std::abs(h[k])));
  }
}

TEST(SpectrumProperty, ConjugatePairsAreExact) {
  ChainRng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = eigenvalues_discrete(testing::random_discrete(rng, rng.integer(2, 10)));
    for (const auto& v : s.values) {
      if (v.imag() == 0.0) continue;
      const auto partner = std::find(s.values.begin(), s.values.end(), std::conj(v));
      EXPECT_NE(partner, s.values.end());
    }
  }
}

TEST(SpectrumProperty, BirthDeathChainsAreRealNonnegative) {
  ChainRng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = eigenvalues_discrete(testing::random_lazy_birth_death(rng, rng.integer(1, 10)), 1e-7);
    EXPECT_EQ(ds.classification, Classification::RealNonnegative);
    const auto cs = eigenvalues_continuous(testing::random_continuous_birth_death(rng, rng.integer(1, 10)), 1e-7);
    EXPECT_EQ(cs.classification, Classification::RealNonnegative);
  }
}

}  // namespace
}  // namespace skipfree
