#include <algorithm>
#include <cmath>

#include "netcov/error.hpp"
#include "netcov/quantum.hpp"

namespace netcov::quantum {

namespace {

/// Operators of the realization in parent-major order
/// H = H^{p_1} (x) ... (x) H^{p_N}.
struct ParentMajor {
  std::vector<int> subsystem_dims;
  std::vector<int> parent_dims;
  CMatrix rho;
  BlockLayout layout;
  std::vector<CMatrix> q;  // Q^j for every coordinate j of V
};

ParentMajor setup(const NetworkRealization& r, int cap) {
  validate(r);
  const auto& t = r.topology;
  long long total = 1;
  ParentMajor pm;
  std::vector<std::vector<int>> sid(t.num_parents());
  for (int n = 0; n < t.num_parents(); ++n) {
    int d = 1;
    for (std::size_t k = 0; k < t.children_of[n].size(); ++k) {
      sid[n].push_back(static_cast<int>(pm.subsystem_dims.size()));
      pm.subsystem_dims.push_back(r.subsystem_dims[n][k]);
      d *= r.subsystem_dims[n][k];
    }
    pm.parent_dims.push_back(d);
    total *= d;
    if (total > cap) throw Error(ErrorCode::DimensionCapExceeded, "total Hilbert dimension exceeds the cap");
  }
  pm.rho = kron_all(r.parent_states);

  const auto parents = t.parents_of();
  std::vector<int> settings, outcomes;
  for (int m = 0; m < t.num_children(); ++m) {
    settings.push_back(static_cast<int>(r.child_povms[m].size()));
    int o = 0;
    for (const auto& povm : r.child_povms[m]) o = std::max(o, static_cast<int>(povm.size()));
    outcomes.push_back(o);
  }
  pm.layout = BlockLayout::uniform(settings, outcomes);
  for (int m = 0; m < t.num_children(); ++m) {
    std::vector<int> targets;
    for (int n : parents[m]) {
      const auto& kids = t.children_of[n];
      targets.push_back(sid[n][std::find(kids.begin(), kids.end(), m) - kids.begin()]);
    }
    for (int s = 0; s < settings[m]; ++s) {
      const auto& povm = r.child_povms[m][s];
      for (int x = 0; x < outcomes[m]; ++x) {
        if (x < static_cast<int>(povm.size())) {
          pm.q.push_back(pm.subsystem_dims.empty() ? povm[x] : embed(povm[x], pm.subsystem_dims, targets));
        } else {
          pm.q.push_back(CMatrix::Zero(total, total));
        }
      }
    }
  }
  return pm;
}

/// <A, B>_F = Tr(A^dag B).
std::complex<double> frob(const CMatrix& a, const CMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

/// C_n[j, j'] = Tr[D^j D^{j' dag} sigma_n] with D^j = T_{n-1}^j - 1 (x) T_n^j.
std::vector<ComplexMatrix> telescope(const NetworkRealization& r, const ParentMajor& pm) {
  const int nv = static_cast<int>(pm.q.size());
  const int np = r.topology.num_parents();
  std::vector<CMatrix> t_prev = pm.q;
  std::vector<ComplexMatrix> out;
  for (int n = 0; n < np; ++n) {
    CMatrix sigma = CMatrix::Identity(1, 1);
    for (int k = n; k < np; ++k) sigma = kron(sigma, r.parent_states[k]);
    const int dn = pm.parent_dims[n];
    std::vector<CMatrix> t_next(nv), d(nv), sd(nv);
    for (int j = 0; j < nv; ++j) {
      t_next[j] = contract_front(t_prev[j], r.parent_states[n], dn);
      d[j] = t_prev[j] - kron(CMatrix::Identity(dn, dn), t_next[j]);
      sd[j] = sigma * d[j];
    }
    ComplexMatrix c(nv, nv);
    for (int j = 0; j < nv; ++j) {
      for (int jp = 0; jp < nv; ++jp) c(j, jp) = frob(d[jp], sd[j]);
    }
    out.push_back(c);
    t_prev = std::move(t_next);
  }
  return out;
}

struct Moments {
  ComplexMatrix second;  // Tr(Q^j Q^{j' dag} rho)
  Eigen::VectorXcd mean; // Tr(Q^j rho)
};

Moments moments(const ParentMajor& pm) {
  const int nv = static_cast<int>(pm.q.size());
  Moments mo{ComplexMatrix(nv, nv), Eigen::VectorXcd(nv)};
  std::vector<CMatrix> rq(nv);
  for (int j = 0; j < nv; ++j) {
    rq[j] = pm.rho * pm.q[j];
    mo.mean(j) = rq[j].trace();
  }
  for (int j = 0; j < nv; ++j) {
    for (int jp = 0; jp < nv; ++jp) mo.second(j, jp) = frob(pm.q[jp], rq[j]);
  }
  return mo;
}

double min_eig(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double leak_outside(const ComplexMatrix& m, const std::vector<int>& support) {
  std::vector<char> in(m.rows(), 0);
  for (int i : support) in[i] = 1;
  double worst = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!(in[i] && in[j])) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

}  // namespace

Lemma1Report lemma1_check(const NetworkRealization& r, int cap) {
  for (const auto& settings : r.child_povms) {
    if (settings.size() != 1) throw Error(ErrorCode::InvalidRealization, "lemma1_check needs a single setting per child");
  }
  const ParentMajor pm = setup(r, cap);
  Lemma1Report report;
  report.C = telescope(r, pm);
  const Moments mo = moments(pm);
  const int nv = static_cast<int>(pm.q.size());
  report.sum_identity_lhs = ComplexMatrix::Zero(nv, nv);
  report.min_eigenvalue = 0.0;
  for (int n = 0; n < static_cast<int>(report.C.size()); ++n) {
    report.sum_identity_lhs += report.C[n];
    report.min_eigenvalue = std::min(report.min_eigenvalue, min_eig(report.C[n]));
    report.support_leak = std::max(report.support_leak,
                                   leak_outside(report.C[n], parent_support(r.topology, pm.layout, n)));
  }
  report.sum_identity_rhs = mo.second - mo.mean * mo.mean.adjoint();
  report.identity_residual = (report.sum_identity_lhs - report.sum_identity_rhs).cwiseAbs().maxCoeff();
  report.ok = report.identity_residual <= 1e-10 && report.min_eigenvalue >= -1e-10 &&
              report.support_leak <= 1e-12;
  return report;
}

Lemma2Report lemma2_completion(const NetworkRealization& r, int cap) {
  const ParentMajor pm = setup(r, cap);
  const int nv = static_cast<int>(pm.q.size());
  const auto& layout = pm.layout;
  Lemma2Report report;
  const DistributionTable table = conditional_distribution(r, cap);
  report.observable = observable_covariance(table, FeatureMapSet::canonical(table));

  auto& cert = report.certificate;
  cert.C = telescope(r, pm);
  const Moments mo = moments(pm);
  const ComplexMatrix centered = mo.second - mo.mean * mo.mean.adjoint();
  cert.R = ComplexMatrix::Zero(nv, nv);
  cert.completion = ComplexMatrix::Zero(nv, nv);
  const auto& owner = layout.owner();
  for (int i = 0; i < nv; ++i) {
    for (int j = 0; j < nv; ++j) {
      if (owner[i] == owner[j]) {
        // Canonical features: sum_x Tr(A_x rho) Y_x Y_x^dag = diag(mean).
        cert.R(i, j) = (i == j ? mo.mean(i) : 0.0) - mo.second(i, j);
      } else if (report.observable.masked(i, j)) {
        cert.completion(i, j) = centered(i, j);
      }
    }
  }

  for (int n = 0; n < static_cast<int>(cert.C.size()); ++n) {
    report.c_min_eigenvalue = std::min(report.c_min_eigenvalue, min_eig(cert.C[n]));
  }
  report.r_min_eigenvalue = min_eig(cert.R);
  report.completion_hermiticity = (cert.completion - cert.completion.adjoint()).cwiseAbs().maxCoeff();
  for (int i = 0; i < nv; ++i) {
    for (int j = 0; j < nv; ++j) {
      if (!report.observable.masked(i, j)) {
        report.completion_leak = std::max(report.completion_leak, std::abs(cert.completion(i, j)));
      }
    }
  }
  const ComplexMatrix completed = report.observable.data.cast<std::complex<double>>() + cert.completion;
  report.completed_min_eigenvalue = min_eig(completed);
  report.check = verify_certificate(cert, report.observable, r.topology, 1e-12, 1e-10, 1e-10);
  report.ok = report.check.ok && report.completed_min_eigenvalue >= -1e-10 &&
              report.r_min_eigenvalue >= -1e-10 && report.c_min_eigenvalue >= -1e-10 &&
              report.completion_hermiticity <= 1e-10 && report.completion_leak == 0.0;
  return report;
}

}  // namespace netcov::quantum
