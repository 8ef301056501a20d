#pragma once

// Independent reference computations used to freeze expected values. They
// are written from the definitions and deliberately share no code paths
// with the library beyond the table accessors.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "netcov/covariance.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXd;

// Cov over concatenated one-hot vectors, summed outcome by outcome.
inline Matrix covariance(const netcov::DistributionTable& d) {
  const auto& out = d.outcomes();
  int dim = 0;
  std::vector<int> off;
  for (int k : out) {
    off.push_back(dim);
    dim += k;
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  Matrix second = Matrix::Zero(dim, dim);
  for (int x = 0; x < d.num_outcome_tuples(); ++x) {
    const auto xs = d.decode_outcomes(x);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
    for (std::size_t m = 0; m < xs.size(); ++m) y(off[m] + xs[m]) = 1.0;
    const double p = d.at(0, x);
    mean += p * y;
    second += p * y * y.transpose();
  }
  return second - mean * mean.transpose();
}

// Per-child diag(1,-1) congruence for binary blocks.
inline Matrix reflect(const Matrix& m) {
  Eigen::VectorXd s(m.rows());
  for (int i = 0; i < m.rows(); ++i) s(i) = i % 2 == 0 ? 1.0 : -1.0;
  return s.asDiagonal() * m * s.asDiagonal();
}

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

// Explicit M_{x,x'} = P(x)P(x') - prod_j P_j(x_j) [x_j == x'_j].
inline Matrix finner_matrix(const netcov::DistributionTable& d) {
  const int n = d.num_outcome_tuples();
  const int k = d.num_children();
  std::vector<std::vector<double>> marg(k);
  for (int j = 0; j < k; ++j) marg[j].assign(d.outcomes()[j], 0.0);
  for (int x = 0; x < n; ++x) {
    const auto xs = d.decode_outcomes(x);
    for (int j = 0; j < k; ++j) marg[j][xs[j]] += d.at(0, x);
  }
  Matrix m(n, n);
  for (int a = 0; a < n; ++a) {
    const auto xa = d.decode_outcomes(a);
    for (int b = 0; b < n; ++b) {
      const auto xb = d.decode_outcomes(b);
      double prod = 1.0;
      for (int j = 0; j < k; ++j) prod *= xa[j] == xb[j] ? marg[j][xa[j]] : 0.0;
      m(a, b) = d.at(0, a) * d.at(0, b) - prod;
    }
  }
  return m;
}

inline Eigen::VectorXd product_vector(const std::vector<double>& deltas) {
  Eigen::VectorXd f = Eigen::VectorXd::Ones(1);
  for (double dj : deltas) {
    Eigen::VectorXd fj(2);
    fj << (1.0 + dj) / 2.0, (1.0 - dj) / 2.0;
    Eigen::VectorXd next(f.size() * 2);
    for (int a = 0; a < f.size(); ++a) next.segment(2 * a, 2) = f(a) * fj;
    f = next;
  }
  return f;
}

inline Matrix random_psd(int n, std::mt19937_64& rng, int rank = -1) {
  std::normal_distribution<double> g;
  if (rank < 0) rank = n;
  Matrix a(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) a(i, j) = g(rng);
  }
  return a * a.transpose() / n;
}

}  // namespace oracle
