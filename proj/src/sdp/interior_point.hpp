#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace netcov::sdp::detail {

/// One entry of a symmetric coefficient matrix. block -1 addresses the
/// nonnegative orthant (row = coordinate, col ignored). For PSD blocks the
/// entry stands for val at (row, col) and (col, row); <A, X> sums
/// val * X_rc * (row == col ? 1 : 2).
struct Entry {
  int block;
  int row;
  int col;
  double val;
};

/// min <C, X>  s.t. <A_i, X> = b_i,  X in PSD blocks x orthant.
struct ConeProblem {
  std::vector<int> block_dims;
  int lp_dim = 0;
  std::vector<Entry> objective;
  std::vector<std::vector<Entry>> constraints;
  Eigen::VectorXd b;
};

enum class ConeStatus { Optimal, PrimalInfeasible, DualInfeasible, Stalled };

struct ConeSolution {
  ConeStatus status = ConeStatus::Stalled;
  std::vector<Eigen::MatrixXd> X;
  Eigen::VectorXd x_lp;
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> Z;
  Eigen::VectorXd z_lp;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;
};

struct ConeOptions {
  double tolerance = 1e-9;
  int max_iterations = 100;
};

/// Infeasible-start primal-dual path following with the HKM direction and
/// Mehrotra predictor-corrector steps. Dense linear algebra throughout.
ConeSolution solve_cone(const ConeProblem& problem, const ConeOptions& options);

/// Largest eigenvalue of A^T y over every block (orthant coordinates count
/// as 1x1 blocks). A Farkas certificate of primal infeasibility has this
/// nonpositive together with b^T y > 0.
double adjoint_max_eigenvalue(const ConeProblem& problem, const Eigen::VectorXd& y);

}  // namespace netcov::sdp::detail
