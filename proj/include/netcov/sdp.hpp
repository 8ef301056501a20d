#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace netcov::sdp {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kEpsPsd = 1e-7;
inline constexpr double kEpsEq = 1e-7;
inline constexpr double kTau = 1e-6;

enum class Field { Real, Hermitian };

/// Symmetric (or Hermitian) matrix variable living on a subset of the
/// ambient indices; entries outside the support are identically zero.
struct MatrixVariable {
  std::vector<int> support;  // ascending ambient indices
  bool psd = true;
  Field field = Field::Real;
};

struct Term {
  int variable = 0;
  double coefficient = 1.0;
};

/// sum_k c_k X_k + sum_l d_l s_l I = rhs + i rhs_imag on the listed pairs
/// (i <= j). An empty pair list means every pair. Imaginary parts are only
/// constrained when a Hermitian variable takes part.
struct MatrixEquality {
  std::vector<Term> terms;
  std::vector<Term> identity_terms;  // scalar variables times the identity
  Matrix rhs;
  Matrix rhs_imag;  // empty means zero
  std::vector<std::pair<int, int>> pairs;
};

enum class Relation { LessEqual, Equal, GreaterEqual };

/// Linear functional sum_k Tr(F_k X_k) + sum_l d_l s_l. F_k are ambient
/// sized and symmetric; for Hermitian variables only Re X enters.
struct LinearForm {
  std::vector<std::pair<int, Matrix>> matrix_terms;
  std::vector<Term> scalar_terms;
};

struct ScalarConstraint {
  LinearForm form;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// sum_k c_k X_k + constant restricted to support is PSD (or NSD).
struct MatrixInequality {
  std::vector<Term> terms;
  Matrix constant;  // ambient sized, empty means zero
  std::vector<int> support;
  bool negative = false;
};

enum class Sense { Minimize, Maximize };

struct Objective {
  Sense sense = Sense::Minimize;
  LinearForm form;
};

class SdpProblem {
 public:
  explicit SdpProblem(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int add_matrix_variable(std::vector<int> support, bool psd = true, Field field = Field::Real);
  /// Nonnegative scalar variable.
  int add_scalar_variable();
  void add_equality(MatrixEquality equality);
  void add_scalar_constraint(ScalarConstraint constraint);
  void add_matrix_inequality(MatrixInequality inequality);
  void set_objective(Objective objective) { objective_ = std::move(objective); }
  void clear_objective() { objective_.reset(); }

  const std::vector<MatrixVariable>& variables() const { return variables_; }
  int num_scalars() const { return num_scalars_; }
  const std::vector<MatrixEquality>& equalities() const { return equalities_; }
  const std::vector<ScalarConstraint>& scalar_constraints() const { return scalar_constraints_; }
  const std::vector<MatrixInequality>& matrix_inequalities() const { return inequalities_; }
  const std::optional<Objective>& objective() const { return objective_; }

  /// Throws Error{InvalidProblem} on out-of-range indices, unsorted or
  /// duplicated supports, mis-sized constants or free matrix variables.
  void validate() const;

 private:
  int dim_;
  std::vector<MatrixVariable> variables_;
  int num_scalars_ = 0;
  std::vector<MatrixEquality> equalities_;
  std::vector<ScalarConstraint> scalar_constraints_;
  std::vector<MatrixInequality> inequalities_;
  std::optional<Objective> objective_;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Numerical };

const char* to_string(SolveStatus status);

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 100;
  /// Reject answers whose re-checked residuals exceed these.
  double eps_psd = kEpsPsd;
  double eps_eq = kEpsEq;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Numerical;
  std::vector<ComplexMatrix> variable_values;  // ambient sized
  std::vector<double> scalar_values;
  std::optional<double> objective_value;
  /// Multipliers of each MatrixEquality as ambient symmetric matrices W with
  /// sum over constrained pairs of rhs_ij y_ij = Tr(W rhs); the imaginary
  /// parts belong to the Im constraints. Signs refer to the internal
  /// minimisation.
  std::vector<Matrix> equality_duals;
  std::vector<Matrix> equality_duals_imag;
  int iterations = 0;
  double max_psd_violation = 0.0;
  double max_equality_residual = 0.0;
  std::string message;
};

SolveOutcome solve(const SdpProblem& problem, const SolverOptions& options = {});

/// [[X, -Y], [Y, X]] for H = X + iY.
Matrix hermitian_real_embedding(const Matrix& real_part, const Matrix& imag_part);
Matrix hermitian_real_embedding(const ComplexMatrix& h);

}  // namespace netcov::sdp
