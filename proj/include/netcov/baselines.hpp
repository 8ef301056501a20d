#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netcov/covariance.hpp"

namespace netcov {

/// M_{x, x'} = P(x) P(x') - prod_j P_j(x_j) delta_{x_j, x'_j} over outcome
/// tuples of a joint table, indexed like the table.
struct FinnerQuadraticForm {
  Matrix M;

  static FinnerQuadraticForm build(const DistributionTable& p);
  double value(const Vector& f) const { return f.dot(M * f); }
};

struct FinnerIndicatorResult {
  bool violated = false;
  double max_margin = 0.0;
  std::vector<int> argmax;  // outcome tuple attaining the margin
};

/// P(x) > sqrt(prod_i P_i(x_i)) for some outcome tuple.
FinnerIndicatorResult finner_indicator(const DistributionTable& p);

/// F = (x)_j f_j with f_j(x) = (1 + (-1)^x delta_j) / 2.
Vector finner_product_vector(const std::vector<double>& deltas);
/// F^T M F for product F, evaluated without forming M.
double finner_dichotomic_value(const DistributionTable& p, const std::vector<double>& deltas);

struct FinnerOptOptions {
  int restarts = 32;
  int sweeps = 50;
  std::uint64_t seed = 0;
};

struct FinnerOptResult {
  double best_value = 0.0;
  std::vector<double> best_deltas;
  bool violated = false;  // best_value > 1e-10
};

FinnerOptResult finner_dichotomic_opt(const DistributionTable& p, const FinnerOptOptions& options = {});

struct EntropicCheck {
  std::string center;  // party playing A in I(A:B) + I(A:C) <= H(A)
  double i_first = 0.0;
  double i_second = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool violated = false;
};

/// Shannon entropy in bits with 0 log 0 = 0.
double entropy_bits(const std::vector<double>& p);
double mutual_information_bits(const Matrix& joint);

/// The three relabelings of I(A:B) + I(A:C) <= H(A) for three children.
std::vector<EntropicCheck> entropic_test(const DistributionTable& p);

struct InflationResult {
  double e1 = 0.0;
  double e2 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool violated = false;
};

/// (1 + 2 E1 + E2)^2 <= 2 (1 + E1)^3 for symmetric binary triangle data.
InflationResult inflation_test(const DistributionTable& p);

}  // namespace netcov
