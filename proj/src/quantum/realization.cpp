#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "netcov/error.hpp"
#include "netcov/quantum.hpp"

namespace netcov::quantum {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidRealization, what); }

double hermiticity(const CMatrix& m) {
  return m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
}

double min_eig(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

int share_dim(const NetworkRealization& r, int n, int m) {
  const auto& kids = r.topology.children_of[n];
  const auto it = std::find(kids.begin(), kids.end(), m);
  return r.subsystem_dims[n][it - kids.begin()];
}

int checked_total(const NetworkRealization& r, int cap) {
  long long total = 1;
  for (const auto& dims : r.subsystem_dims) {
    for (int d : dims) {
      total *= d;
      if (total > cap) {
        throw Error(ErrorCode::DimensionCapExceeded,
                    "total Hilbert dimension exceeds the cap of " + std::to_string(cap));
      }
    }
  }
  return static_cast<int>(total);
}

}  // namespace

void validate(const NetworkRealization& r) {
  validate(r.topology);
  const auto& t = r.topology;
  if (static_cast<int>(r.subsystem_dims.size()) != t.num_parents() ||
      static_cast<int>(r.parent_states.size()) != t.num_parents()) {
    bad("need subsystem dimensions and a state for every parent");
  }
  for (int n = 0; n < t.num_parents(); ++n) {
    if (r.subsystem_dims[n].size() != t.children_of[n].size()) {
      bad("parent " + t.parents[n] + ": one subsystem dimension per child required");
    }
    long long d = 1;
    for (int x : r.subsystem_dims[n]) {
      if (x < 1) bad("subsystem dimensions must be positive");
      d *= x;
      if (d > (1 << 24)) bad("parent " + t.parents[n] + ": dimension too large");
    }
    const CMatrix& rho = r.parent_states[n];
    if (rho.rows() != d || rho.cols() != d) bad("parent " + t.parents[n] + ": state has wrong dimension");
    if (hermiticity(rho) > 1e-10) bad("parent " + t.parents[n] + ": state is not Hermitian");
    if (std::abs(rho.trace() - std::complex<double>(1.0)) > 1e-12) bad("parent " + t.parents[n] + ": trace differs from 1");
    if (min_eig(rho) < -1e-10) bad("parent " + t.parents[n] + ": state is not PSD");
  }
  if (static_cast<int>(r.child_povms.size()) != t.num_children()) bad("need POVMs for every child");
  const auto dims = child_dims(r);
  for (int m = 0; m < t.num_children(); ++m) {
    if (r.child_povms[m].empty()) bad("child " + t.children[m] + ": needs at least one setting");
    for (const auto& povm : r.child_povms[m]) {
      if (povm.empty()) bad("child " + t.children[m] + ": empty POVM");
      CMatrix sum = CMatrix::Zero(dims[m], dims[m]);
      for (const auto& a : povm) {
        if (a.rows() != dims[m] || a.cols() != dims[m]) bad("child " + t.children[m] + ": POVM element has wrong dimension");
        if (hermiticity(a) > 1e-10) bad("child " + t.children[m] + ": POVM element not Hermitian");
        if (min_eig(a) < -1e-10) bad("child " + t.children[m] + ": POVM element not PSD");
        sum += a;
      }
      if ((sum - CMatrix::Identity(dims[m], dims[m])).cwiseAbs().maxCoeff() > 1e-10) {
        bad("child " + t.children[m] + ": POVM does not sum to the identity");
      }
    }
  }
}

std::vector<int> child_dims(const NetworkRealization& r) {
  const auto parents = r.topology.parents_of();
  std::vector<int> dims;
  for (int m = 0; m < r.topology.num_children(); ++m) {
    int d = 1;
    for (int n : parents[m]) d *= share_dim(r, n, m);
    dims.push_back(d);
  }
  return dims;
}

int total_dim(const NetworkRealization& r) { return checked_total(r, 1 << 30); }

CMatrix global_state(const NetworkRealization& r, int cap) {
  checked_total(r, cap);
  const auto& t = r.topology;
  // Parent-major subsystem list (n, m) and its child-major permutation.
  std::vector<int> pm_dims;
  std::vector<std::pair<int, int>> pm_labels;
  for (int n = 0; n < t.num_parents(); ++n) {
    for (std::size_t k = 0; k < t.children_of[n].size(); ++k) {
      pm_dims.push_back(r.subsystem_dims[n][k]);
      pm_labels.emplace_back(n, t.children_of[n][k]);
    }
  }
  std::vector<int> perm;
  const auto parents = t.parents_of();
  for (int m = 0; m < t.num_children(); ++m) {
    for (int n : parents[m]) {
      const auto it = std::find(pm_labels.begin(), pm_labels.end(), std::make_pair(n, m));
      perm.push_back(static_cast<int>(it - pm_labels.begin()));
    }
  }
  const CMatrix rho = kron_all(r.parent_states);
  if (pm_dims.empty()) return rho;
  return permute_subsystems(rho, pm_dims, perm);
}

namespace {

/// Outcome probabilities for one setting tuple, child 0 most significant.
std::vector<double> probabilities(const CMatrix& rho, const std::vector<int>& dims,
                                  const std::vector<const Povm*>& povms,
                                  const std::vector<int>& outcomes) {
  std::vector<CMatrix> level{rho};
  for (std::size_t m = 0; m < dims.size(); ++m) {
    std::vector<CMatrix> next;
    next.reserve(level.size() * outcomes[m]);
    for (const auto& x : level) {
      for (int k = 0; k < outcomes[m]; ++k) {
        if (k < static_cast<int>(povms[m]->size())) {
          next.push_back(contract_front(x, (*povms[m])[k], dims[m]));
        } else {
          const int rest = static_cast<int>(x.rows()) / dims[m];
          next.push_back(CMatrix::Zero(rest, rest));
        }
      }
    }
    level = std::move(next);
  }
  std::vector<double> p;
  p.reserve(level.size());
  for (const auto& x : level) p.push_back(std::max(0.0, x(0, 0).real()));
  return p;
}

DistributionTable tabulate(const NetworkRealization& r, int cap) {
  validate(r);
  const CMatrix rho = global_state(r, cap);
  const auto dims = child_dims(r);
  const int children = r.topology.num_children();
  std::vector<int> settings(children), outcomes(children, 0);
  for (int m = 0; m < children; ++m) {
    settings[m] = static_cast<int>(r.child_povms[m].size());
    for (const auto& povm : r.child_povms[m]) {
      outcomes[m] = std::max(outcomes[m], static_cast<int>(povm.size()));
    }
  }
  DistributionTable table(settings, outcomes);
  for (int st = 0; st < table.num_setting_tuples(); ++st) {
    const auto s = table.decode_settings(st);
    std::vector<const Povm*> chosen;
    for (int m = 0; m < children; ++m) chosen.push_back(&r.child_povms[m][s[m]]);
    const auto p = probabilities(rho, dims, chosen, outcomes);
    for (int x = 0; x < table.num_outcome_tuples(); ++x) table.at(st, x) = p[x];
  }
  return table;
}

}  // namespace

DistributionTable distribution(const NetworkRealization& r, int cap) {
  for (const auto& settings : r.child_povms) {
    if (settings.size() != 1) bad("distribution needs a single setting per child");
  }
  return tabulate(r, cap);
}

DistributionTable conditional_distribution(const NetworkRealization& r, int cap) {
  return tabulate(r, cap);
}

double chsh_value(const DistributionTable& dist) {
  if (dist.num_children() != 2 || dist.settings() != std::vector<int>{2, 2} ||
      dist.outcomes() != std::vector<int>{2, 2}) {
    throw Error(ErrorCode::WrongArity, "CHSH needs two binary parties with two settings each");
  }
  auto corr = [&](int s1, int s2) {
    double e = 0.0;
    for (int x1 = 0; x1 < 2; ++x1) {
      for (int x2 = 0; x2 < 2; ++x2) e += ((x1 + x2) % 2 ? -1.0 : 1.0) * dist({s1, s2}, {x1, x2});
    }
    return e;
  };
  return corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1);
}

}  // namespace netcov::quantum
