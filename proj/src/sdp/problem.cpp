#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "netcov/error.hpp"
#include "netcov/sdp.hpp"
#include "sdp/interior_point.hpp"

namespace netcov::sdp {

using detail::ConeProblem;
using detail::Entry;

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Numerical: return "numerical";
  }
  return "unknown";
}

int SdpProblem::add_matrix_variable(std::vector<int> support, bool psd, Field field) {
  variables_.push_back({std::move(support), psd, field});
  return static_cast<int>(variables_.size()) - 1;
}

int SdpProblem::add_scalar_variable() { return num_scalars_++; }

void SdpProblem::add_equality(MatrixEquality equality) {
  equalities_.push_back(std::move(equality));
}

void SdpProblem::add_scalar_constraint(ScalarConstraint constraint) {
  scalar_constraints_.push_back(std::move(constraint));
}

void SdpProblem::add_matrix_inequality(MatrixInequality inequality) {
  inequalities_.push_back(std::move(inequality));
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidProblem, what); }

void check_support(const std::vector<int>& support, int dim, const std::string& what) {
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] < 0 || support[k] >= dim) invalid(what + ": index out of range");
    if (k > 0 && support[k] <= support[k - 1]) invalid(what + ": support must be strictly ascending");
  }
}

void check_ambient(const Matrix& m, int dim, bool allow_empty, const std::string& what) {
  if (allow_empty && m.size() == 0) return;
  if (m.rows() != dim || m.cols() != dim) invalid(what + ": matrix must be ambient sized");
}

}  // namespace

void SdpProblem::validate() const {
  if (dim_ < 0) invalid("negative dimension");
  const int nv = static_cast<int>(variables_.size());
  for (const auto& v : variables_) {
    check_support(v.support, dim_, "variable");
    if (!v.psd) invalid("free matrix variables are not supported");
  }
  auto check_terms = [&](const std::vector<Term>& terms, int count, const std::string& what) {
    for (const auto& t : terms) {
      if (t.variable < 0 || t.variable >= count) invalid(what + ": unknown variable");
    }
  };
  auto check_form = [&](const LinearForm& form, const std::string& what) {
    for (const auto& [v, F] : form.matrix_terms) {
      if (v < 0 || v >= nv) invalid(what + ": unknown variable");
      check_ambient(F, dim_, false, what);
    }
    check_terms(form.scalar_terms, num_scalars_, what);
  };
  for (const auto& eq : equalities_) {
    check_terms(eq.terms, nv, "equality");
    check_terms(eq.identity_terms, num_scalars_, "equality");
    check_ambient(eq.rhs, dim_, false, "equality rhs");
    check_ambient(eq.rhs_imag, dim_, true, "equality rhs_imag");
    for (const auto& [i, j] : eq.pairs) {
      if (i < 0 || j >= dim_ || i > j) invalid("equality pair out of range or not i <= j");
    }
  }
  for (const auto& c : scalar_constraints_) check_form(c.form, "scalar constraint");
  for (const auto& q : inequalities_) {
    check_terms(q.terms, nv, "matrix inequality");
    check_ambient(q.constant, dim_, true, "matrix inequality constant");
    check_support(q.support, dim_, "matrix inequality");
  }
  if (objective_) check_form(objective_->form, "objective");
}

namespace {

struct StorageEntry {
  int row;
  int col;
  double val;
};

/// Storage-level representation of Re X_pq (local indices p, q).
void real_part(const MatrixVariable& v, int p, int q, double coef, std::vector<StorageEntry>& out) {
  const int k = static_cast<int>(v.support.size());
  const int a = std::min(p, q), b = std::max(p, q);
  if (v.field == Field::Real) {
    out.push_back({a, b, a == b ? coef : 0.5 * coef});
  } else if (a == b) {
    out.push_back({a, a, 0.5 * coef});
    out.push_back({k + a, k + a, 0.5 * coef});
  } else {
    out.push_back({a, b, 0.25 * coef});
    out.push_back({k + a, k + b, 0.25 * coef});
  }
}

/// Storage-level representation of Im X_pq for p < q.
void imag_part(const MatrixVariable& v, int p, int q, double coef, std::vector<StorageEntry>& out) {
  if (v.field == Field::Real || p == q) return;
  const int k = static_cast<int>(v.support.size());
  out.push_back({q, k + p, 0.25 * coef});
  out.push_back({p, k + q, -0.25 * coef});
}

int storage_dim(const MatrixVariable& v) {
  const int k = static_cast<int>(v.support.size());
  return v.field == Field::Real ? k : 2 * k;
}

/// Local position of each ambient index in a support, or -1.
std::vector<int> positions(const std::vector<int>& support, int dim) {
  std::vector<int> pos(dim, -1);
  for (std::size_t k = 0; k < support.size(); ++k) pos[support[k]] = static_cast<int>(k);
  return pos;
}

struct RowInfo {
  int equality = -1;  // index of MatrixEquality, or -1 for other rows
  int i = 0;
  int j = 0;
  bool imaginary = false;
};

struct Compiled {
  ConeProblem cone;
  std::vector<RowInfo> rows;
  std::vector<MatrixVariable> blocks;  // every PSD block incl. inequality slacks
  int num_user_variables = 0;
  int num_user_scalars = 0;
  bool trivially_infeasible = false;
  std::string trivial_reason;
};

Compiled compile(const SdpProblem& problem) {
  Compiled out;
  const int dim = problem.dim();
  out.blocks = problem.variables();
  out.num_user_variables = static_cast<int>(out.blocks.size());
  out.num_user_scalars = problem.num_scalars();
  int lp_dim = problem.num_scalars();

  std::vector<std::vector<int>> pos;
  for (const auto& v : out.blocks) pos.push_back(positions(v.support, dim));

  auto add_row = [&](std::vector<Entry> entries, double rhs, RowInfo info) {
    if (entries.empty()) {
      if (std::abs(rhs) > 0.0) {
        out.trivially_infeasible = true;
        out.trivial_reason = "constraint with no variables has nonzero right-hand side";
      }
      return;
    }
    out.cone.constraints.push_back(std::move(entries));
    out.rows.push_back(info);
    out.cone.b.conservativeResize(static_cast<int>(out.cone.constraints.size()));
    out.cone.b(out.cone.b.size() - 1) = rhs;
  };
  out.cone.b.resize(0);

  auto emit = [&](int block, const MatrixVariable& v, int i, int j, double coef, bool imag,
                  std::vector<Entry>& entries) {
    const int p = pos[block][i], q = pos[block][j];
    if (p < 0 || q < 0) return;
    std::vector<StorageEntry> se;
    if (imag) {
      imag_part(v, p, q, coef, se);
    } else {
      real_part(v, p, q, coef, se);
    }
    for (const auto& e : se) entries.push_back({block, e.row, e.col, e.val});
  };

  const auto& eqs = problem.equalities();
  for (int e = 0; e < static_cast<int>(eqs.size()); ++e) {
    const auto& eq = eqs[e];
    bool hermitian = false;
    for (const auto& t : eq.terms) hermitian |= out.blocks[t.variable].field == Field::Hermitian;
    std::vector<std::pair<int, int>> pairs = eq.pairs;
    if (pairs.empty()) {
      for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) pairs.emplace_back(i, j);
      }
    }
    for (const auto& [i, j] : pairs) {
      std::vector<Entry> re;
      for (const auto& t : eq.terms) emit(t.variable, out.blocks[t.variable], i, j, t.coefficient, false, re);
      if (i == j) {
        for (const auto& t : eq.identity_terms) re.push_back({-1, t.variable, 0, t.coefficient});
      }
      add_row(std::move(re), eq.rhs(i, j), {e, i, j, false});
      if (hermitian && i < j) {
        std::vector<Entry> im;
        for (const auto& t : eq.terms) emit(t.variable, out.blocks[t.variable], i, j, t.coefficient, true, im);
        const double rhs = eq.rhs_imag.size() ? eq.rhs_imag(i, j) : 0.0;
        add_row(std::move(im), rhs, {e, i, j, true});
      }
    }
  }

  auto form_entries = [&](const LinearForm& form, double sign) {
    std::vector<Entry> entries;
    for (const auto& [vi, F] : form.matrix_terms) {
      const auto& v = out.blocks[vi];
      const int k = static_cast<int>(v.support.size());
      for (int p = 0; p < k; ++p) {
        for (int q = p; q < k; ++q) {
          const double f = sign * 0.5 * (F(v.support[p], v.support[q]) + F(v.support[q], v.support[p]));
          if (f == 0.0) continue;
          if (v.field == Field::Real) {
            entries.push_back({vi, p, q, f});
          } else {
            entries.push_back({vi, p, q, 0.5 * f});
            entries.push_back({vi, k + p, k + q, 0.5 * f});
          }
        }
      }
    }
    for (const auto& t : form.scalar_terms) entries.push_back({-1, t.variable, 0, sign * t.coefficient});
    return entries;
  };

  for (const auto& c : problem.scalar_constraints()) {
    auto entries = form_entries(c.form, 1.0);
    if (c.relation != Relation::Equal) {
      entries.push_back({-1, lp_dim++, 0, c.relation == Relation::LessEqual ? 1.0 : -1.0});
    }
    add_row(std::move(entries), c.rhs, {});
  }

  for (const auto& q : problem.matrix_inequalities()) {
    bool hermitian = false;
    for (const auto& t : q.terms) hermitian |= out.blocks[t.variable].field == Field::Hermitian;
    const int slack = static_cast<int>(out.blocks.size());
    out.blocks.push_back({q.support, true, hermitian ? Field::Hermitian : Field::Real});
    pos.push_back(positions(q.support, dim));
    const double sign = q.negative ? -1.0 : 1.0;
    const int k = static_cast<int>(q.support.size());
    for (int p = 0; p < k; ++p) {
      for (int r = p; r < k; ++r) {
        const int i = q.support[p], j = q.support[r];
        std::vector<Entry> re;
        for (const auto& t : q.terms) emit(t.variable, out.blocks[t.variable], i, j, sign * t.coefficient, false, re);
        emit(slack, out.blocks[slack], i, j, -1.0, false, re);
        add_row(std::move(re), q.constant.size() ? -sign * q.constant(i, j) : 0.0, {});
        if (hermitian && i < j) {
          std::vector<Entry> im;
          for (const auto& t : q.terms) emit(t.variable, out.blocks[t.variable], i, j, sign * t.coefficient, true, im);
          emit(slack, out.blocks[slack], i, j, -1.0, true, im);
          add_row(std::move(im), 0.0, {});
        }
      }
    }
  }

  out.cone.lp_dim = lp_dim;
  for (const auto& v : out.blocks) out.cone.block_dims.push_back(storage_dim(v));

  if (problem.objective()) {
    const double sign = problem.objective()->sense == Sense::Maximize ? -1.0 : 1.0;
    out.cone.objective = form_entries(problem.objective()->form, sign);
  } else {
    // Trace regulariser: keeps the iterates bounded and lets a diverging dual
    // certify infeasibility.
    for (int b = 0; b < static_cast<int>(out.blocks.size()); ++b) {
      for (int r = 0; r < out.cone.block_dims[b]; ++r) out.cone.objective.push_back({b, r, r, 1.0});
    }
    for (int s = 0; s < lp_dim; ++s) out.cone.objective.push_back({-1, s, 0, 1.0});
  }
  return out;
}

ComplexMatrix extract(const MatrixVariable& v, const Matrix& Z, int dim) {
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  const int k = static_cast<int>(v.support.size());
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k; ++q) {
      std::complex<double> value;
      if (v.field == Field::Real) {
        value = Z(p, q);
      } else {
        value = {0.5 * (Z(p, q) + Z(k + p, k + q)), 0.5 * (Z(k + p, q) - Z(k + q, p))};
      }
      out(v.support[p], v.support[q]) = value;
    }
  }
  return out;
}

double min_eig(const ComplexMatrix& m, const std::vector<int>& support) {
  if (support.empty()) return 0.0;
  const int k = static_cast<int>(support.size());
  ComplexMatrix sub(k, k);
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k; ++q) sub(p, q) = m(support[p], support[q]);
  }
  sub = 0.5 * (sub + sub.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double evaluate(const LinearForm& form, const SolveOutcome& out) {
  double value = 0.0;
  for (const auto& [v, F] : form.matrix_terms) {
    value += (F.cwiseProduct(out.variable_values[v].real())).sum();
  }
  for (const auto& t : form.scalar_terms) value += t.coefficient * out.scalar_values[t.variable];
  return value;
}

/// Direct re-check of every constraint on the extracted values.
void recheck(const SdpProblem& problem, SolveOutcome& out) {
  const int dim = problem.dim();
  double psd = 0.0;
  double eq = 0.0;
  const auto& vars = problem.variables();
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (vars[v].psd) psd = std::max(psd, -min_eig(out.variable_values[v], vars[v].support));
  }
  for (double s : out.scalar_values) psd = std::max(psd, -s);
  for (const auto& e : problem.equalities()) {
    ComplexMatrix lhs = ComplexMatrix::Zero(dim, dim);
    bool hermitian = false;
    for (const auto& t : e.terms) {
      lhs += t.coefficient * out.variable_values[t.variable];
      hermitian |= vars[t.variable].field == Field::Hermitian;
    }
    for (const auto& t : e.identity_terms) {
      lhs.diagonal().array() += t.coefficient * out.scalar_values[t.variable];
    }
    auto check = [&](int i, int j) {
      eq = std::max(eq, std::abs(lhs(i, j).real() - e.rhs(i, j)));
      if (hermitian && i != j) {
        const double target = e.rhs_imag.size() ? e.rhs_imag(i, j) : 0.0;
        eq = std::max(eq, std::abs(lhs(i, j).imag() - target));
      }
    };
    if (e.pairs.empty()) {
      for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) check(i, j);
      }
    } else {
      for (const auto& [i, j] : e.pairs) check(i, j);
    }
  }
  for (const auto& c : problem.scalar_constraints()) {
    const double diff = evaluate(c.form, out) - c.rhs;
    switch (c.relation) {
      case Relation::Equal: eq = std::max(eq, std::abs(diff)); break;
      case Relation::LessEqual: eq = std::max(eq, diff); break;
      case Relation::GreaterEqual: eq = std::max(eq, -diff); break;
    }
  }
  for (const auto& q : problem.matrix_inequalities()) {
    ComplexMatrix lhs = ComplexMatrix::Zero(dim, dim);
    for (const auto& t : q.terms) lhs += t.coefficient * out.variable_values[t.variable];
    if (q.constant.size()) lhs += q.constant.cast<std::complex<double>>();
    if (q.negative) lhs = -lhs;
    psd = std::max(psd, -min_eig(lhs, q.support));
  }
  out.max_psd_violation = psd;
  out.max_equality_residual = eq;
}

}  // namespace

SolveOutcome solve(const SdpProblem& problem, const SolverOptions& options) {
  problem.validate();
  const Compiled compiled = compile(problem);
  SolveOutcome out;
  if (compiled.trivially_infeasible) {
    out.status = SolveStatus::Infeasible;
    out.message = compiled.trivial_reason;
    return out;
  }

  const auto sol = detail::solve_cone(compiled.cone, {options.tolerance, options.max_iterations});
  out.iterations = sol.iterations;
  out.message = sol.message;

  if (sol.status == detail::ConeStatus::PrimalInfeasible) {
    const double bty = compiled.cone.b.dot(sol.y);
    const double lmax = detail::adjoint_max_eigenvalue(compiled.cone, sol.y);
    if (bty > 0.0 && lmax <= 1e-7 * bty) {
      out.status = SolveStatus::Infeasible;
    } else {
      out.status = SolveStatus::Numerical;
      out.message = "infeasibility certificate rejected";
    }
    return out;
  }
  if (sol.status == detail::ConeStatus::DualInfeasible) {
    out.status = SolveStatus::Numerical;
    out.message = "objective unbounded";
    return out;
  }

  const int dim = problem.dim();
  for (int v = 0; v < compiled.num_user_variables; ++v) {
    out.variable_values.push_back(extract(compiled.blocks[v], sol.X[v], dim));
  }
  for (int s = 0; s < compiled.num_user_scalars; ++s) out.scalar_values.push_back(sol.x_lp(s));

  out.equality_duals.assign(problem.equalities().size(), Matrix::Zero(dim, dim));
  out.equality_duals_imag.assign(problem.equalities().size(), Matrix::Zero(dim, dim));
  for (std::size_t r = 0; r < compiled.rows.size(); ++r) {
    const auto& row = compiled.rows[r];
    if (row.equality < 0) continue;
    Matrix& W = row.imaginary ? out.equality_duals_imag[row.equality] : out.equality_duals[row.equality];
    const double y = sol.y(static_cast<int>(r));
    if (row.i == row.j) {
      W(row.i, row.i) += y;
    } else {
      W(row.i, row.j) += 0.5 * y;
      W(row.j, row.i) += 0.5 * y;
    }
  }

  if (problem.objective()) {
    out.objective_value = evaluate(problem.objective()->form, out);
  }
  recheck(problem, out);

  const bool converged = sol.status == detail::ConeStatus::Optimal ||
                         (sol.relative_gap <= 1e-7 && sol.primal_infeasibility <= 1e-7 &&
                          sol.dual_infeasibility <= 1e-7);
  const bool accurate = converged || !problem.objective();
  if (out.max_psd_violation <= options.eps_psd && out.max_equality_residual <= options.eps_eq &&
      accurate) {
    out.status = problem.objective() ? SolveStatus::Optimal : SolveStatus::Feasible;
  } else {
    out.status = SolveStatus::Numerical;
    if (sol.status == detail::ConeStatus::Optimal) out.message = "re-check rejected the solution";
  }
  return out;
}

}  // namespace netcov::sdp
