#include <gtest/gtest.h>

#include <random>

#include "netcov/covariance.hpp"
#include "netcov/error.hpp"
#include "netcov/quantum.hpp"
#include "oracles.hpp"

using namespace netcov;

namespace {

DistributionTable ghz_table() {
  std::vector<double> p(8, 0.0);
  p[0] = p[7] = 0.5;
  return DistributionTable::joint({2, 2, 2}, p);
}

BlockMatrix direct_cov(const DistributionTable& d) {
  return covariance_from_distribution(d, FeatureMapSet::canonical(d));
}

}  // namespace

TEST(Covariance, GhzBlocks) {
  const auto c = direct_cov(ghz_table());
  Matrix expect(2, 2);
  expect << 0.25, -0.25, -0.25, 0.25;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) EXPECT_LT((c.block(a, b) - expect).norm(), 1e-15);
  }
}

TEST(Covariance, DeterministicIsZero) {
  std::vector<double> p(8, 0.0);
  p[0] = 1.0;
  EXPECT_EQ(direct_cov(DistributionTable::joint({2, 2, 2}, p)).data.norm(), 0.0);
}

TEST(Covariance, UniformProductIsBlockDiagonal) {
  const auto c = direct_cov(DistributionTable::joint({2, 2, 2}, std::vector<double>(8, 0.125)));
  Matrix diag(2, 2);
  diag << 0.25, -0.25, -0.25, 0.25;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const Matrix expect = a == b ? diag : Matrix::Zero(2, 2);
      EXPECT_LT((c.block(a, b) - expect).norm(), 1e-15);
    }
  }
}

TEST(Covariance, MatchesOracleAndIsPsd) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> outcomes{2, 3, 2};
    std::vector<double> p(12);
    double s = 0.0;
    for (double& v : p) s += (v = u(rng));
    for (double& v : p) v /= s;
    const auto d = DistributionTable::joint(outcomes, p);
    const auto c = direct_cov(d);
    EXPECT_LT((c.data - oracle::covariance(d)).norm(), 1e-14);
    EXPECT_GE(min_eigenvalue(c.data), -1e-10);
  }
}

TEST(Covariance, InvalidDistribution) {
  EXPECT_THROW(DistributionTable::joint({2, 2}, {0.5, 0.5, 0.5, -0.5}).validate(), Error);
  EXPECT_THROW(DistributionTable::joint({2, 2}, {0.5, 0.1, 0.1, 0.1}).validate(), Error);
  EXPECT_NO_THROW(DistributionTable::joint({2, 2}, {0.5, 0.2, 0.2, 0.1}).validate());
}

TEST(ObservableCovariance, SingleSettingMatchesJoint) {
  const auto d = ghz_table();
  const auto a = direct_cov(d);
  const auto b = observable_covariance(d, FeatureMapSet::canonical(d));
  EXPECT_TRUE(b.unobservable_mask.empty());
  EXPECT_LT((a.data - b.data).norm(), 1e-15);
}

TEST(ObservableCovariance, ChshLayoutAndMask) {
  const auto d = quantum::pr_box_mixture(0.8);
  const auto c = observable_covariance(d, FeatureMapSet::canonical(d));
  EXPECT_EQ(c.data.rows(), 8);
  ASSERT_EQ(c.unobservable_mask.size(), 2u);
  EXPECT_EQ(c.unobservable_mask[0], std::make_pair(0, 1));
  EXPECT_EQ(c.unobservable_mask[1], std::make_pair(2, 3));
  EXPECT_EQ(c.block(0, 1).norm(), 0.0);
  EXPECT_TRUE(c.masked(0, 2));
  EXPECT_FALSE(c.masked(0, 4));
}

// Off-setting cross blocks equal the covariance of the restricted joint table.
TEST(ObservableCovariance, CrossBlocksMatchRestriction) {
  const auto d = quantum::conditional_distribution(quantum::random_realization(triangle(), 3, 2));
  const auto c = observable_covariance(d, FeatureMapSet::canonical(d));
  const auto r = d.restrict_to({1, 0, 1});
  const Matrix o = oracle::covariance(r);
  const auto& l = c.layout;
  EXPECT_LT((c.block(l.block_index(0, 1), l.block_index(1, 0)) - o.block(0, 2, 2, 2)).norm(), 1e-12);
  EXPECT_LT((c.block(l.block_index(1, 0), l.block_index(2, 1)) - o.block(2, 4, 2, 2)).norm(), 1e-12);
  EXPECT_LT(d.signalling_deviation(), 1e-12);
}

TEST(PqFamily, Distribution) {
  const auto half = pq_distribution(3, 0.5, 0.5);
  for (int x = 0; x < 8; ++x) EXPECT_NEAR(half.at(0, x), (x == 0 || x == 7) ? 0.5 : 0.0, 1e-15);
  const auto eighth = pq_distribution(3, 0.125, 0.125);
  for (int x = 0; x < 8; ++x) EXPECT_NEAR(eighth.at(0, x), 0.125, 1e-15);
  const auto four = pq_distribution(4, 0.3, 0.2);
  EXPECT_NEAR(four.at(0, 5), 0.5 / 14, 1e-15);
  EXPECT_NEAR(four.at(0, 0), 0.3, 1e-15);
  EXPECT_NEAR(four.at(0, 15), 0.2, 1e-15);
  EXPECT_THROW(pq_distribution(3, 0.7, 0.5), Error);
}

TEST(PqFamily, DeltaChi) {
  EXPECT_NEAR(pq_delta(3, 0.5, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(pq_chi(3, 0.5, 0.5), 0.25, 1e-15);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double p = u(rng), q = (1 - p) * u(rng);
    const int n = 3 + k % 4;
    // Single-party variance a(1 - a) with a = (1 + p - q)/2.
    const double a = (1 + p - q) / 2;
    EXPECT_NEAR(pq_delta(n, p, q) + pq_chi(n, p, q), a * (1 - a), 1e-15);
  }
}

TEST(PqFamily, ClosedFormMatchesDirect) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {3, 4, 5}) {
    for (int k = 0; k < 20; ++k) {
      const double p = u(rng), q = (1 - p) * u(rng);
      const Matrix direct = oracle::covariance(pq_distribution(n, p, q));
      const auto closed = pq_covariance_closed_form(n, p, q);
      EXPECT_LT((oracle::reflect(direct) - closed.data).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Reflection, IsInvolutionAndCongruence) {
  const auto layout = BlockLayout::single_setting({2, 3});
  std::mt19937_64 rng(2);
  const Matrix m = oracle::random_psd(5, rng);
  const Matrix r = reflect_blocks(m, layout);
  EXPECT_LT((reflect_blocks(r, layout) - m).norm(), 1e-15);
  EXPECT_NEAR(min_eigenvalue(r), min_eigenvalue(m), 1e-12);
  EXPECT_DOUBLE_EQ(r(0, 1), -m(0, 1));
  EXPECT_DOUBLE_EQ(r(2, 4), m(2, 4));  // local indices 0 and 2 of the second block
}

TEST(Distribution, MixSettingsAndMarginals) {
  const auto d = quantum::pr_box_mixture(1.0);
  const auto mixed = d.mix_settings({{1.0, 0.0}, {0.0, 1.0}});
  const auto fixed = d.restrict_to({0, 1});
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(mixed.at(0, x), fixed.at(0, x), 1e-15);
  EXPECT_NEAR(d.marginal(0, 1)(0), 0.5, 1e-15);
  EXPECT_NEAR(d.pair_marginal(0, 1, 1, 1)(0, 1), 0.5, 1e-15);
}
