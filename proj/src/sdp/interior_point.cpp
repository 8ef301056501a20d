#include "sdp/interior_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netcov::sdp::detail {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct BlockEntry {
  int cons;
  int row;
  int col;
  double val;
};

struct Point {
  std::vector<MatrixXd> X;
  std::vector<MatrixXd> Z;
  VectorXd x;
  VectorXd z;
  VectorXd y;
};

struct Direction {
  std::vector<MatrixXd> dX;
  std::vector<MatrixXd> dZ;
  VectorXd dx;
  VectorXd dz;
  VectorXd dy;
};

class Operator {
 public:
  explicit Operator(const ConeProblem& problem)
      : dims_(problem.block_dims),
        m_(static_cast<int>(problem.constraints.size())),
        lp_dim_(problem.lp_dim),
        per_block_(problem.block_dims.size()),
        lp_(MatrixXd::Zero(m_, problem.lp_dim)),
        norms_(VectorXd::Zero(m_)) {
    for (int i = 0; i < m_; ++i) {
      for (const Entry& e : problem.constraints[i]) {
        if (e.block < 0) {
          lp_(i, e.row) += e.val;
        } else {
          const int r = std::min(e.row, e.col);
          const int c = std::max(e.row, e.col);
          per_block_[e.block].push_back({i, r, c, e.val});
        }
      }
    }
    for (const auto& entries : per_block_) {
      for (const auto& e : entries) norms_(e.cons) += e.val * e.val * (e.row == e.col ? 1.0 : 2.0);
    }
    for (int i = 0; i < m_; ++i) norms_(i) = std::sqrt(norms_(i) + lp_.row(i).squaredNorm());
  }

  int m() const { return m_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  const VectorXd& norms() const { return norms_; }

  /// <A_i, G> for possibly unsymmetric G.
  VectorXd apply(const std::vector<MatrixXd>& G, const VectorXd& g) const {
    VectorXd out = lp_ * g;
    for (int k = 0; k < num_blocks(); ++k) {
      const MatrixXd& Gk = G[k];
      for (const auto& e : per_block_[k]) {
        out(e.cons) += e.row == e.col ? e.val * Gk(e.row, e.row)
                                      : e.val * (Gk(e.row, e.col) + Gk(e.col, e.row));
      }
    }
    return out;
  }

  void adjoint(const VectorXd& y, std::vector<MatrixXd>& S, VectorXd& s) const {
    S.resize(dims_.size());
    for (int k = 0; k < num_blocks(); ++k) {
      S[k] = MatrixXd::Zero(dims_[k], dims_[k]);
      for (const auto& e : per_block_[k]) {
        const double v = y(e.cons) * e.val;
        S[k](e.row, e.col) += v;
        if (e.row != e.col) S[k](e.col, e.row) += v;
      }
    }
    s = lp_.transpose() * y;
  }

  /// M_ij = <A_i, X A_j Z^-1> (symmetric).
  MatrixXd schur(const std::vector<MatrixXd>& X, const std::vector<MatrixXd>& Zinv,
                 const VectorXd& x, const VectorXd& z) const {
    MatrixXd M = lp_ * (x.array() / z.array()).matrix().asDiagonal() * lp_.transpose();
    for (int k = 0; k < num_blocks(); ++k) {
      const MatrixXd& Xk = X[k];
      const MatrixXd& Zi = Zinv[k];
      const auto& entries = per_block_[k];
      for (const auto& e1 : entries) {
        const int a1 = e1.row, b1 = e1.col;
        for (const auto& e2 : entries) {
          if (e2.cons < e1.cons) continue;
          const int c2 = e2.row, d2 = e2.col;
          // Tr(S1 X S2 Zi) with S = E_rc + E_cr (single term on the diagonal).
          double t = Xk(b1, c2) * Zi(d2, a1);
          if (c2 != d2) t += Xk(b1, d2) * Zi(c2, a1);
          if (a1 != b1) {
            t += Xk(a1, c2) * Zi(d2, b1);
            if (c2 != d2) t += Xk(a1, d2) * Zi(c2, b1);
          }
          const double v = e1.val * e2.val * t;
          M(e1.cons, e2.cons) += v;
          if (e1.cons != e2.cons) M(e2.cons, e1.cons) += v;
        }
      }
    }
    return M;
  }

 private:
  std::vector<int> dims_;
  int m_;
  int lp_dim_;
  std::vector<std::vector<BlockEntry>> per_block_;
  MatrixXd lp_;
  VectorXd norms_;
};

double inner(const std::vector<MatrixXd>& A, const VectorXd& a, const std::vector<MatrixXd>& B,
             const VectorXd& b) {
  double s = a.dot(b);
  for (std::size_t k = 0; k < A.size(); ++k) s += A[k].cwiseProduct(B[k]).sum();
  return s;
}

double frobenius(const std::vector<MatrixXd>& A, const VectorXd& a) {
  double s = a.squaredNorm();
  for (const auto& Ak : A) s += Ak.squaredNorm();
  return std::sqrt(s);
}

MatrixXd sym(const MatrixXd& A) { return 0.5 * (A + A.transpose()); }

bool inverse_spd(const MatrixXd& A, MatrixXd& inv) {
  Eigen::LLT<MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) return false;
  inv = llt.solve(MatrixXd::Identity(A.rows(), A.cols()));
  inv = sym(inv);
  return inv.allFinite();
}

/// Largest alpha with A + alpha dA PSD (infinity if unbounded).
double max_step(const MatrixXd& A, const MatrixXd& dA) {
  if (A.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::LLT<MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd L = llt.matrixL();
  MatrixXd T = L.triangularView<Eigen::Lower>().solve(dA);
  T = L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(T), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (!std::isfinite(lmin)) return 0.0;
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_lp(const VectorXd& a, const VectorXd& da) {
  double alpha = std::numeric_limits<double>::infinity();
  for (int k = 0; k < a.size(); ++k) {
    if (da(k) < 0.0) alpha = std::min(alpha, -a(k) / da(k));
  }
  return alpha;
}

double max_eigenvalue(const MatrixXd& A) {
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool solve_schur(MatrixXd M, const VectorXd& rhs, VectorXd& out) {
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() == Eigen::Success) {
    out = llt.solve(rhs);
    if (out.allFinite()) return true;
  }
  Eigen::LDLT<MatrixXd> ldlt(M);
  if (ldlt.info() == Eigen::Success) {
    out = ldlt.solve(rhs);
    if (out.allFinite() && (M * out - rhs).norm() <= 1e-8 * (1.0 + rhs.norm())) return true;
  }
  const double scale = 1.0 + M.diagonal().cwiseAbs().maxCoeff();
  for (double reg = 1e-12; reg <= 1e-6; reg *= 100.0) {
    MatrixXd Mr = M;
    Mr.diagonal().array() += reg * scale;
    Eigen::LDLT<MatrixXd> l2(Mr);
    if (l2.info() != Eigen::Success) continue;
    out = l2.solve(rhs);
    if (out.allFinite()) return true;
  }
  return false;
}

}  // namespace

ConeSolution solve_cone(const ConeProblem& problem, const ConeOptions& options) {
  const Operator A(problem);
  const int nb = A.num_blocks();
  const int m = A.m();
  const auto& dims = problem.block_dims;

  std::vector<MatrixXd> C(nb);
  for (int k = 0; k < nb; ++k) C[k] = MatrixXd::Zero(dims[k], dims[k]);
  VectorXd c = VectorXd::Zero(problem.lp_dim);
  for (const Entry& e : problem.objective) {
    if (e.block < 0) {
      c(e.row) += e.val;
    } else {
      C[e.block](e.row, e.col) += e.val;
      if (e.row != e.col) C[e.block](e.col, e.row) += e.val;
    }
  }
  const VectorXd& b = problem.b;
  const double norm_b = b.norm();
  const double norm_c = frobenius(C, c);

  int total_dim = problem.lp_dim;
  for (int d : dims) total_dim += d;

  ConeSolution sol;
  if (total_dim == 0) {
    sol.status = ConeStatus::Stalled;
    sol.message = "empty cone";
    return sol;
  }

  // Starting point scaled to the data.
  const double n_sqrt = std::sqrt(static_cast<double>(std::max(1, total_dim)));
  double ratio = 0.0;
  double max_norm = 0.0;
  for (int i = 0; i < m; ++i) {
    ratio = std::max(ratio, (1.0 + std::abs(b(i))) / (1.0 + A.norms()(i)));
    max_norm = std::max(max_norm, A.norms()(i));
  }
  int max_dim = problem.lp_dim > 0 ? 1 : 0;
  for (int d : dims) max_dim = std::max(max_dim, d);
  const double xi = std::max({10.0, n_sqrt, max_dim * ratio});
  const double eta = std::max({10.0, n_sqrt, max_norm, norm_c});

  Point pt;
  pt.X.resize(nb);
  pt.Z.resize(nb);
  for (int k = 0; k < nb; ++k) {
    pt.X[k] = xi * MatrixXd::Identity(dims[k], dims[k]);
    pt.Z[k] = eta * MatrixXd::Identity(dims[k], dims[k]);
  }
  pt.x = VectorXd::Constant(problem.lp_dim, xi);
  pt.z = VectorXd::Constant(problem.lp_dim, eta);
  pt.y = VectorXd::Zero(m);

  std::vector<MatrixXd> Zinv(nb), Rd(nb), AtY;
  VectorXd rd, aty;
  int stall = 0;

  auto finish = [&](ConeStatus status, const std::string& msg) {
    sol.status = status;
    sol.X = pt.X;
    sol.Z = pt.Z;
    sol.x_lp = pt.x;
    sol.z_lp = pt.z;
    sol.y = pt.y;
    sol.message = msg;
    return sol;
  };

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    sol.iterations = iter;
    const VectorXd Ax = A.apply(pt.X, pt.x);
    const VectorXd rp = b - Ax;
    A.adjoint(pt.y, AtY, aty);
    for (int k = 0; k < nb; ++k) Rd[k] = C[k] - pt.Z[k] - AtY[k];
    rd = c - pt.z - aty;

    const double pobj = inner(C, c, pt.X, pt.x);
    const double dobj = b.dot(pt.y);
    const double gap = inner(pt.X, pt.x, pt.Z, pt.z);
    const double mu = gap / total_dim;
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    sol.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    sol.dual_infeasibility = frobenius(Rd, rd) / (1.0 + norm_c);

    if (sol.relative_gap <= options.tolerance && sol.primal_infeasibility <= options.tolerance &&
        sol.dual_infeasibility <= options.tolerance) {
      return finish(ConeStatus::Optimal, "converged");
    }

    // Diverging dual objective: look for a Farkas ray certifying primal infeasibility.
    if (dobj > 1e6 * (1.0 + norm_c)) {
      const VectorXd ray = pt.y / dobj;
      std::vector<MatrixXd> S;
      VectorXd s;
      A.adjoint(ray, S, s);
      double worst = s.size() ? s.maxCoeff() : -std::numeric_limits<double>::infinity();
      for (const auto& Sk : S) worst = std::max(worst, max_eigenvalue(Sk));
      if (worst <= 1e-8) {
        finish(ConeStatus::PrimalInfeasible, "dual ray found");
        sol.y = ray;
        return sol;
      }
    }
    if (-pobj > 1e6 * (1.0 + norm_b)) {
      const double scale = -pobj;
      if ((Ax / scale).norm() <= 1e-8) {
        return finish(ConeStatus::DualInfeasible, "primal ray found");
      }
    }
    if (iter == options.max_iterations) break;

    bool ok = true;
    for (int k = 0; k < nb && ok; ++k) ok = inverse_spd(pt.Z[k], Zinv[k]);
    if (!ok) return finish(ConeStatus::Stalled, "dual iterate lost definiteness");
    const VectorXd zinv = pt.z.cwiseInverse();

    const MatrixXd M = A.schur(pt.X, Zinv, pt.x, pt.z);

    // A(X Rd Z^-1) and A(Z^-1).
    std::vector<MatrixXd> G(nb);
    for (int k = 0; k < nb; ++k) G[k] = pt.X[k] * Rd[k] * Zinv[k];
    const VectorXd a_xrz = A.apply(G, pt.x.cwiseProduct(rd).cwiseProduct(zinv));
    const VectorXd a_zinv = A.apply(Zinv, zinv);

    auto direction = [&](double sigma, const Direction* pred, Direction& d) -> bool {
      VectorXd rhs = b - sigma * mu * a_zinv + a_xrz;
      std::vector<MatrixXd> corr(nb);
      VectorXd corr_lp = VectorXd::Zero(problem.lp_dim);
      if (pred != nullptr) {
        for (int k = 0; k < nb; ++k) corr[k] = pred->dX[k] * pred->dZ[k] * Zinv[k];
        corr_lp = pred->dx.cwiseProduct(pred->dz).cwiseProduct(zinv);
        rhs += A.apply(corr, corr_lp);
      }
      if (!solve_schur(M, rhs, d.dy)) return false;
      std::vector<MatrixXd> S;
      VectorXd s;
      A.adjoint(d.dy, S, s);
      d.dZ.resize(nb);
      d.dX.resize(nb);
      for (int k = 0; k < nb; ++k) {
        d.dZ[k] = Rd[k] - S[k];
        MatrixXd T = pt.X[k] * d.dZ[k] * Zinv[k];
        if (pred != nullptr) T += corr[k];
        d.dX[k] = sigma * mu * Zinv[k] - pt.X[k] - sym(T);
      }
      d.dz = rd - s;
      d.dx = sigma * mu * zinv - pt.x - pt.x.cwiseProduct(d.dz).cwiseProduct(zinv) - corr_lp;
      return d.dy.allFinite();
    };

    auto steps = [&](const Direction& d, double& ap, double& ad) {
      ap = max_step_lp(pt.x, d.dx);
      ad = max_step_lp(pt.z, d.dz);
      for (int k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(pt.X[k], d.dX[k]));
        ad = std::min(ad, max_step(pt.Z[k], d.dZ[k]));
      }
    };

    Direction pred;
    if (!direction(0.0, nullptr, pred)) return finish(ConeStatus::Stalled, "Schur system singular");
    double ap = 0.0, ad = 0.0;
    steps(pred, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double gap_aff = 0.0;
    {
      std::vector<MatrixXd> Xa(nb), Za(nb);
      for (int k = 0; k < nb; ++k) {
        Xa[k] = pt.X[k] + ap * pred.dX[k];
        Za[k] = pt.Z[k] + ad * pred.dZ[k];
      }
      gap_aff = inner(Xa, pt.x + ap * pred.dx, Za, pt.z + ad * pred.dz);
    }
    double sigma = gap > 0.0 ? std::pow(std::max(0.0, gap_aff) / gap, 3.0) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    Direction corr;
    if (!direction(sigma, &pred, corr)) return finish(ConeStatus::Stalled, "Schur system singular");
    steps(corr, ap, ad);
    const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);

    for (int k = 0; k < nb; ++k) {
      pt.X[k] = sym(pt.X[k] + ap * corr.dX[k]);
      pt.Z[k] = sym(pt.Z[k] + ad * corr.dZ[k]);
    }
    pt.x += ap * corr.dx;
    pt.z += ad * corr.dz;
    pt.y += ad * corr.dy;

    stall = (ap < 1e-8 && ad < 1e-8) ? stall + 1 : 0;
    if (stall >= 3) return finish(ConeStatus::Stalled, "step length collapsed");
  }
  return finish(ConeStatus::Stalled, "iteration limit reached");
}

double adjoint_max_eigenvalue(const ConeProblem& problem, const Eigen::VectorXd& y) {
  const Operator A(problem);
  std::vector<MatrixXd> S;
  VectorXd s;
  A.adjoint(y, S, s);
  double worst = s.size() ? s.maxCoeff() : -std::numeric_limits<double>::infinity();
  for (const auto& Sk : S) worst = std::max(worst, max_eigenvalue(Sk));
  return worst;
}

}  // namespace netcov::sdp::detail
