#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netcov/baselines.hpp"
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

DistributionTable product_table(double a, double b, double c) {
  std::vector<double> p(8);
  const double m[3] = {a, b, c};
  for (int x = 0; x < 8; ++x) {
    double v = 1.0;
    for (int j = 0; j < 3; ++j) {
      const int bit = (x >> (2 - j)) & 1;
      v *= bit ? 1 - m[j] : m[j];
    }
    p[x] = v;
  }
  return DistributionTable::joint({2, 2, 2}, p);
}

// Maximum of F^T M F over the delta grid with the given step.
double grid_max(const DistributionTable& d, double step) {
  const Matrix m = oracle::finner_matrix(d);
  const int n = static_cast<int>(std::lround(2.0 / step));
  std::vector<Eigen::VectorXd> f1(n + 1);
  double best = -1e300;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        const auto f = oracle::product_vector({-1 + i * step, -1 + j * step, -1 + k * step});
        best = std::max(best, f.dot(m * f));
      }
    }
  }
  return best;
}

}  // namespace

TEST(FinnerIndicator, Ghz) {
  const auto r = finner_indicator(ghz_table());
  EXPECT_TRUE(r.violated);
  EXPECT_NEAR(r.max_margin, 0.5 - std::sqrt(1.0 / 8), 1e-12);
  EXPECT_NEAR(r.max_margin, 0.14645, 1e-5);
}

TEST(FinnerIndicator, UniformAndDeterministic) {
  EXPECT_FALSE(finner_indicator(product_table(0.5, 0.5, 0.5)).violated);
  std::vector<double> p(8, 0.0);
  p[0] = 1.0;
  const auto r = finner_indicator(DistributionTable::joint({2, 2, 2}, p));
  EXPECT_FALSE(r.violated);
  EXPECT_NEAR(r.max_margin, 0.0, 1e-15);
}

TEST(FinnerQuadratic, MatchesExplicitMatrix) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& d : {ghz_table(), product_table(0.3, 0.6, 0.9), pq_distribution(3, 0.2, 0.5)}) {
    const Matrix m = oracle::finner_matrix(d);
    EXPECT_LT((FinnerQuadraticForm::build(d).M - m).norm(), 1e-14);
    for (int k = 0; k < 10; ++k) {
      const std::vector<double> deltas{u(rng), u(rng), u(rng)};
      const auto f = oracle::product_vector(deltas);
      EXPECT_LT((finner_product_vector(deltas) - f).norm(), 1e-15);
      EXPECT_NEAR(finner_dichotomic_value(d, deltas), f.dot(m * f), 1e-14);
    }
  }
}

// With all deltas zero F is the constant 1/8 vector and both terms of the
// form equal 1/64.
TEST(FinnerQuadratic, ZeroDeltas) {
  EXPECT_NEAR(finner_dichotomic_value(ghz_table(), {0, 0, 0}), 0.0, 1e-15);
  EXPECT_NEAR(finner_dichotomic_value(pq_distribution(3, 0.3, 0.1), {0, 0, 0}), 0.0, 1e-15);
}

TEST(FinnerOpt, ProductIsNotViolated) {
  const auto r = finner_dichotomic_opt(product_table(0.3, 0.6, 0.9));
  EXPECT_FALSE(r.violated);
  EXPECT_LE(r.best_value, 1e-10);
}

TEST(FinnerOpt, MatchesGridScan) {
  for (const auto& d : {ghz_table(), pq_distribution(3, 0.3, 0.3), pq_distribution(3, 0.05, 0.6)}) {
    const auto r = finner_dichotomic_opt(d);
    const double grid = grid_max(d, 0.01);
    EXPECT_GE(r.best_value, grid - 1e-6);
    EXPECT_NEAR(r.best_value, grid, 1e-6);
  }
  EXPECT_TRUE(finner_dichotomic_opt(ghz_table()).violated);
}

TEST(FinnerOpt, AtLeastTheCorners) {
  const auto d = pq_distribution(3, 0.4, 0.2);
  const auto r = finner_dichotomic_opt(d);
  for (int c = 0; c < 8; ++c) {
    const std::vector<double> deltas{c & 4 ? 1.0 : -1.0, c & 2 ? 1.0 : -1.0, c & 1 ? 1.0 : -1.0};
    EXPECT_GE(r.best_value, finner_dichotomic_value(d, deltas) - 1e-15);
  }
}

TEST(FinnerOpt, SeedDeterminism) {
  const auto d = pq_distribution(3, 0.1, 0.7);
  FinnerOptOptions o;
  o.seed = 99;
  const auto a = finner_dichotomic_opt(d, o);
  const auto b = finner_dichotomic_opt(d, o);
  EXPECT_EQ(a.best_value, b.best_value);
  EXPECT_EQ(a.best_deltas, b.best_deltas);
}

TEST(Entropy, Basics) {
  EXPECT_NEAR(entropy_bits({0.5, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(entropy_bits({1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(entropy_bits({0.25, 0.25, 0.5}), 1.5, 1e-15);
  Matrix j(2, 2);
  j << 0.5, 0, 0, 0.5;
  EXPECT_NEAR(mutual_information_bits(j), 1.0, 1e-15);
  j << 0.25, 0.25, 0.25, 0.25;
  EXPECT_NEAR(mutual_information_bits(j), 0.0, 1e-15);
}

TEST(Entropic, Ghz) {
  const auto checks = entropic_test(ghz_table());
  ASSERT_EQ(checks.size(), 3u);
  for (const auto& c : checks) {
    EXPECT_NEAR(c.i_first, 1.0, 1e-12);
    EXPECT_NEAR(c.i_second, 1.0, 1e-12);
    EXPECT_NEAR(c.lhs, 2.0, 1e-12);
    EXPECT_NEAR(c.rhs, 1.0, 1e-12);
    EXPECT_TRUE(c.violated);
  }
}

TEST(Entropic, ProductAndUniform) {
  for (const auto& d : {product_table(0.2, 0.7, 0.4), pq_distribution(3, 0.125, 0.125)}) {
    for (const auto& c : entropic_test(d)) {
      EXPECT_FALSE(c.violated);
      EXPECT_NEAR(c.lhs, 0.0, 1e-12);
    }
  }
}

// 0 <= I(A:B) <= min(H(A), H(B)), checked against a direct computation.
TEST(Entropic, MutualInformationBounds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix j(2, 3);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 3; ++b) j(a, b) = u(rng) < 0.2 ? 0.0 : u(rng);
    }
    j /= j.sum();
    const Eigen::VectorXd ra = j.rowwise().sum(), rb = j.colwise().sum().transpose();
    std::vector<double> flat(j.data(), j.data() + j.size());
    const double ha = oracle::entropy({ra(0), ra(1)});
    const double hb = oracle::entropy({rb(0), rb(1), rb(2)});
    const double i = mutual_information_bits(j);
    EXPECT_NEAR(i, ha + hb - oracle::entropy(flat), 1e-12);
    EXPECT_GE(i, -1e-12);
    EXPECT_LE(i, std::min(ha, hb) + 1e-12);
  }
}

TEST(Inflation, GhzAndUniform) {
  const auto g = inflation_test(ghz_table());
  EXPECT_NEAR(g.e1, 0.0, 1e-15);
  EXPECT_NEAR(g.e2, 1.0, 1e-15);
  EXPECT_NEAR(g.lhs, 4.0, 1e-12);
  EXPECT_NEAR(g.rhs, 2.0, 1e-12);
  EXPECT_TRUE(g.violated);
  const auto u = inflation_test(pq_distribution(3, 0.125, 0.125));
  EXPECT_NEAR(u.lhs, 1.0, 1e-12);
  EXPECT_NEAR(u.rhs, 2.0, 1e-12);
  EXPECT_FALSE(u.violated);
}

TEST(Inflation, PqCorrelators) {
  for (auto [p, q] : {std::pair{0.3, 0.1}, std::pair{0.05, 0.7}, std::pair{0.4, 0.4}}) {
    const auto d = pq_distribution(3, p, q);
    // Other strings are balanced per party; each pair agrees on 2 of the 6.
    const double rest = (1 - p - q) / 6;
    const double e2 = p + q + 2 * rest - 4 * rest;
    const auto r = inflation_test(d);
    EXPECT_NEAR(r.e1, p - q, 1e-12);
    EXPECT_NEAR(r.e2, e2, 1e-12);
  }
}

TEST(Inflation, RejectsAsymmetric) {
  try {
    inflation_test(product_table(0.2, 0.7, 0.4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AsymmetricDistribution);
  }
  EXPECT_THROW(inflation_test(quantum::pr_box_mixture(1.0)), Error);
}

TEST(Baselines, ProductRejectedByNone) {
  const auto d = product_table(0.3, 0.3, 0.3);
  EXPECT_FALSE(finner_indicator(d).violated);
  EXPECT_FALSE(finner_dichotomic_opt(d).violated);
  for (const auto& c : entropic_test(d)) EXPECT_FALSE(c.violated);
  EXPECT_FALSE(inflation_test(d).violated);
}
