#include <gtest/gtest.h>

#include <string>

#include "skipfree/chain.hpp"
#include "skipfree/chain_io.hpp"
#include "support/random_chains.hpp"

namespace skipfree {
namespace {

using testing::ChainRng;

TEST(ParseChain, SmallestDiscreteChain) {
  const Chain c = parse_chain(R"({"type":"discrete","d":1,"rows":[{"r":0.5,"p":0.5}]})");
  const auto& dc = std::get<DiscreteChain>(c);
  EXPECT_EQ(dc.d(), 1u);
  EXPECT_EQ(dc.hold(0), 0.5);
  EXPECT_EQ(dc.up(0), 0.5);
}

TEST(ParseChain, DownJumpsAreAscendingInTarget) {
  const Chain c = parse_chain(
      R"({"type":"discrete","d":2,"rows":[{"r":0.2,"p":0.8},{"r":0.3,"p":0.4,"q":[0.3]}]})");
  const auto& dc = std::get<DiscreteChain>(c);
  EXPECT_EQ(dc.down(1, 0), 0.3);
  // Hand sums of each row.
  EXPECT_NEAR(dc.hold(0) + dc.up(0), 1.0, kRowSumTolerance);
  EXPECT_NEAR(dc.hold(1) + dc.up(1) + dc.down(1, 0), 1.0, kRowSumTolerance);
}

TEST(ParseChain, RowSumViolationReportsRowAndResidual) {
  try {
    parse_chain(R"({"type":"discrete","d":1,"rows":[{"r":0.6,"p":0.5}]})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.row(), 0u);
    EXPECT_NEAR(e.residual(), 0.1, 1e-12);
  }
}

TEST(ParseChain, ContinuousChainDerivesExitRates) {
  const Chain c = parse_chain(R"({"type":"continuous","d":2,"rows":[{"alpha":1},{"alpha":1,"beta":[1]}]})");
  const auto& cc = std::get<ContinuousChain>(c);
  EXPECT_EQ(cc.gamma(0), 1.0);
  EXPECT_EQ(cc.gamma(1), 2.0);
}

TEST(ParseChain, SchemaErrors) {
  EXPECT_THROW(parse_chain("{not json"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":1})"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":1,"rows":[{"r":0.5,"p":0.5}],"x":1})"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":1,"rows":[{"r":0.5,"p":0.5,"extra":0}]})"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":2,"rows":[{"r":0.5,"p":0.5}]})"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":2,"rows":[{"r":0.2,"p":0.8},{"r":0.3,"p":0.4,"q":[0.3,0]}]})"),
               SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":1,"rows":[{"r":"0.5","p":0.5}]})"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"markov","d":1,"rows":[{"r":0.5,"p":0.5}]})"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":0,"rows":[]})"), SchemaError);
  EXPECT_THROW(parse_chain(R"({"type":"continuous","d":1,"rows":[{"alpha":1,"beta":[]}, 1]})"), SchemaError);
}

TEST(ParseChain, ValidationErrors) {
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":1,"rows":[{"r":1.0,"p":0.0}]})"), ValidationError);
  EXPECT_THROW(parse_chain(R"({"type":"discrete","d":1,"rows":[{"r":-0.5,"p":1.5}]})"), ValidationError);
  EXPECT_THROW(parse_chain(R"({"type":"continuous","d":1,"rows":[{"alpha":0}]})"), ValidationError);
  EXPECT_THROW(parse_chain(R"({"type":"continuous","d":2,"rows":[{"alpha":1},{"alpha":1,"beta":[-1]}]})"),
               ValidationError);
}

TEST(ParseChain, BinaryRoundingWithinToleranceIsAccepted) {
  // 0.1 + 0.2 + 0.7 is not exactly 1 in binary.
  EXPECT_NO_THROW(parse_chain(R"({"type":"discrete","d":2,"rows":[{"r":0.5,"p":0.5},{"r":0.1,"p":0.2,"q":[0.7]}]})"));
}

TEST(TransientBlock, Examples) {
  EXPECT_EQ(transient_block(testing::geometric_chain(), 0), (Matrix(1, 1) << 0.5).finished());
  EXPECT_EQ(transient_block(testing::example_d2(), 1), (Matrix(2, 2) << 0.2, 0.8, 0.3, 0.3).finished());
  EXPECT_EQ(transient_block(testing::pure_birth_continuous({1.0, 2.0}), 1),
            (Matrix(2, 2) << -1.0, 1.0, 0.0, -2.0).finished());
}

TEST(TransientBlock, RangeChecked) {
  EXPECT_THROW(transient_block(testing::example_d2(), 2), RangeError);
  EXPECT_THROW(transient_block(testing::back_jump_chain(), 5), RangeError);
}

TEST(TransientBlock, LowerHessenbergAndStochasticRows) {
  ChainRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = testing::random_discrete(rng, rng.integer(1, 9));
    for (std::size_t n = 0; n < c.d(); ++n) {
      const Matrix m = transient_block(c, n);
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 2; j < m.cols(); ++j) EXPECT_EQ(m(i, j), 0.0);
        const double absorbed = static_cast<std::size_t>(i) == n ? c.up(n) : 0.0;
        EXPECT_NEAR(m.row(i).sum() + absorbed, 1.0, 1e-12);
      }
    }
    const auto cc = testing::random_continuous(rng, rng.integer(1, 9));
    const Matrix q = transient_block(cc, cc.d() - 1);
    for (Eigen::Index i = 0; i < q.rows(); ++i)
      for (Eigen::Index j = i + 2; j < q.cols(); ++j) EXPECT_EQ(q(i, j), 0.0);
  }
}

TEST(ReachesAbsorption, AlwaysTrueForValidChains) {
  EXPECT_TRUE(reaches_absorption(testing::geometric_chain()));
  ChainRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    EXPECT_TRUE(reaches_absorption(testing::random_discrete(rng, rng.integer(1, 8))));
    EXPECT_TRUE(reaches_absorption(testing::random_continuous(rng, rng.integer(1, 8))));
  }
}

TEST(Serialize, RoundTripIsBitExact) {
  ChainRng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Chain dc = testing::random_discrete(rng, rng.integer(1, 8));
    EXPECT_EQ(parse_chain(serialize_chain(dc)), dc);
    const Chain cc = testing::random_continuous(rng, rng.integer(1, 8));
    EXPECT_EQ(parse_chain(serialize_chain(cc)), cc);
  }
}

TEST(LoadChain, MissingFileIsIoError) { EXPECT_THROW(load_chain("/nonexistent/chain.json"), IoError); }

TEST(LoadChain, RepositoryExamplesParse) {
  for (const char* name : {"geometric_d1.json", "example_d2.json", "pure_birth_d3.json", "lazy_birth_death_d4.json",
                           "pure_birth_rates_1_2.json", "continuous_back_jump.json", "erlang_2.json",
                           "continuous_skip_down_d4.json"})
    EXPECT_NO_THROW(load_chain(std::string(SKIPFREE_DATA_DIR) + "/" + name)) << name;
}

TEST(Truncate, KeepsLowerRows) {
  const auto t = truncate(testing::example_d2(), 1);
  EXPECT_EQ(t.d(), 1u);
  EXPECT_EQ(t.hold(0), 0.2);
  EXPECT_EQ(t.up(0), 0.8);
}

}  // namespace
}  // namespace skipfree
