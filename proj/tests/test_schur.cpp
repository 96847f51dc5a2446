#include <gtest/gtest.h>

#include <cmath>

#include "hmvp/dense_oracle.hpp"
#include "hmvp/error.hpp"
#include "hmvp/generator.hpp"
#include "hmvp/schur.hpp"
#include "test_support.hpp"

namespace hmvp {
namespace {

using testing::matrix_relative_error;
using testing::random_instance;

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

TEST(Schur, FixtureMatchesExactRationals) {
  const auto s = schur_complement(paper_fixture()).to_dense();
  ASSERT_EQ(s.rows(), 6u);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const double expected = testing::kSchurSigma2[i][j].value();
      if (expected == 0.0)
        EXPECT_EQ(s(i, j), 0.0) << i << "," << j;
      else
        EXPECT_LE(testing::relative_error(s(i, j), expected), 1e-12) << i << "," << j;
    }
}

TEST(Schur, FixtureResultKeepsStrictPattern) {
  ValidationConfig cfg;
  cfg.strict_mask = true;
  const auto s = schur_complement(paper_fixture(), cfg);
  EXPECT_NO_THROW(validate_structure(s, cfg));
  EXPECT_TRUE(s.fill_t().empty());
}

TEST(Schur, FixtureGammaAndBase) {
  const auto chain = build_chain(paper_fixture());
  ASSERT_EQ(chain.top_level(), 2);
  ASSERT_EQ(chain.levels().size(), 3u);
  EXPECT_EQ(chain.levels()[0].sigma.level(), 2);
  EXPECT_EQ(chain.levels()[2].sigma.level(), 0);
  for (double g : chain.at(2).gamma.values) EXPECT_EQ(g, 1.0);
  const auto& g1 = chain.at(1).gamma.values;
  const auto& g0 = chain.at(0).gamma.values;
  ASSERT_EQ(g1.size(), 6u);
  ASSERT_EQ(g0.size(), 3u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(g1[i], testing::kGamma1[i], 1e-12);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(g0[i], testing::kGamma0[i], 1e-12);
  const Mat3& b = chain.at(0).sigma.base();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(b(i, j), testing::kSigma0[i][j], 1e-12);
  EXPECT_EQ(chain.inversion_count(), 4u);
}

class SchurLevels : public ::testing::TestWithParam<int> {};

TEST_P(SchurLevels, MatchesDenseOracle) {
  const int level = GetParam();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto cov = random_instance(level, seed, 0.6);
    const DenseMatrix dense = cov.to_dense();
    const auto s = schur_complement(cov);
    EXPECT_TRUE(s.fill_t().empty());
    const DenseMatrix expected =
        oracle::dense_schur(dense, cov.hierarchy().junction_count(level));
    EXPECT_LE(matrix_relative_error(s.to_dense(), expected), 1e-12) << "seed " << seed;
  }
}

TEST_P(SchurLevels, RhsMapsMatchDense) {
  const int level = GetParam();
  const auto cov = random_instance(level, 77, 0.5);
  const auto factors = invert_interior_blocks(cov, 1e-10);
  const std::size_t nj = cov.hierarchy().junction_count(level);
  const std::size_t n = cov.size();

  CounterRng rng(5);
  std::vector<double> y(n), v(nj);
  for (double& x : y) x = rng.uniform(-1, 1);
  for (double& x : v) x = rng.uniform(-1, 1);

  // Dense X^{-1}, J from the full matrix.
  const DenseMatrix d = cov.to_dense();
  DenseMatrix x(n - nj, n - nj);
  for (std::size_t i = nj; i < n; ++i)
    for (std::size_t j = nj; j < n; ++j) x(i - nj, j - nj) = d(i, j);
  const DenseMatrix xinv = oracle::dense_inverse(x);

  std::vector<double> r(n - nj);
  for (std::size_t i = nj; i < n; ++i) {
    r[i - nj] = y[i];
    for (std::size_t j = 0; j < nj; ++j) r[i - nj] -= d(i, j) * v[j];
  }
  const auto h_dense = multiply(xinv, r);
  const auto h = interior_solve(cov, factors, v, y);
  ASSERT_EQ(h.size(), n - nj);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(h[i], h_dense[i], 1e-12);

  const auto xy = multiply(xinv, std::span<const double>(y).subspan(nj));
  const auto g = reduce_rhs(cov, factors, y);
  ASSERT_EQ(g.size(), nj);
  for (std::size_t j = 0; j < nj; ++j) {
    double expected = y[j];
    for (std::size_t i = nj; i < n; ++i) expected -= d(i, j) * xy[i - nj];
    EXPECT_NEAR(g[j], expected, 1e-12);
  }
}

TEST_P(SchurLevels, ParallelIsBitwiseSerial) {
  const int level = GetParam();
  const auto cov = random_instance(level, 11, 0.4);
  ReductionOptions serial;
  ReductionOptions parallel;
  parallel.mode = ExecutionMode::Parallel;
  const auto a = build_chain(cov, serial);
  const auto b = build_chain(cov, parallel);
  for (int k = 0; k <= level; ++k) {
    EXPECT_EQ(a.at(k).sigma.to_dense(), b.at(k).sigma.to_dense()) << k;
    EXPECT_EQ(a.at(k).gamma.values, b.at(k).gamma.values) << k;
  }
}

TEST_P(SchurLevels, InversionCount) {
  const int level = GetParam();
  const auto chain = build_chain(random_instance(level, 2));
  std::size_t expected = 0;
  std::size_t clusters = 1;
  for (int k = 1; k <= level; ++k, clusters *= 3) expected += clusters;
  EXPECT_EQ(chain.inversion_count(), expected);
  for (int k = 1; k <= level; ++k)
    EXPECT_EQ(chain.factors(k).inverse_blocks.size(), chain.at(k).sigma.interior_blocks().size());
}

TEST_P(SchurLevels, StrictPatternPreservedDownTheChain) {
  const int level = GetParam();
  ReductionOptions opt;
  opt.validation.strict_mask = true;
  const auto chain = build_chain(random_instance(level, 21, 0.7, true), opt);
  for (int k = 1; k <= level; ++k) EXPECT_TRUE(chain.at(k).sigma.fill_t().empty());
}

INSTANTIATE_TEST_SUITE_P(Levels, SchurLevels, ::testing::Values(1, 2, 3, 4, 5));

TEST(Schur, SingularInteriorBlockIsReported) {
  DenseMatrix m = paper_fixture_matrix();
  // Make cluster 1's interior block rank deficient: a10 and a11 identical.
  m(9, 9) = 8;
  m(9, 10) = m(10, 9) = 8;
  m(9, 11) = m(11, 9) = -1;
  const auto cov = BlockCovariance::from_dense(m, testing::make_template(2), 2);
  try {
    invert_interior_blocks(cov, 1e-10);
    FAIL();
  } catch (const SingularInteriorBlock& e) {
    EXPECT_EQ(e.level, 2);
    EXPECT_EQ(e.cluster, 1u);
    EXPECT_EQ(e.category(), ErrorCategory::Singularity);
  }
  ReductionOptions opt;
  opt.check_positive_definite = false;
  EXPECT_THROW(build_chain(cov, opt), SingularInteriorBlock);
  EXPECT_THROW(build_chain(cov), NotPositiveDefinite);
}

TEST(Schur, RejectsLevelZeroInput) {
  const BlockCovariance base(testing::make_template(1), Mat3::identity());
  EXPECT_THROW(schur_complement(base), LevelOutOfRange);
  const auto chain = build_chain(base);
  EXPECT_EQ(chain.top_level(), 0);
  EXPECT_EQ(chain.inversion_count(), 0u);
}

TEST(Schur, ChainAccessorsCheckRange) {
  const auto chain = build_chain(paper_fixture());
  EXPECT_THROW(chain.at(3), LevelOutOfRange);
  EXPECT_THROW(chain.factors(0), LevelOutOfRange);
}

}  // namespace
}  // namespace hmvp
