#include <cmath>
#include <complex>

#include "netcov/error.hpp"
#include "netcov/quantum.hpp"

namespace netcov::quantum {

namespace {

void check_visibility(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::ParameterRange, "visibility must lie in [0, 1]");
}

CMatrix projector(const CVector& psi) { return psi * psi.adjoint(); }

}  // namespace

NetworkRealization ghz_state() {
  NetworkRealization r;
  r.topology = star(3);
  r.subsystem_dims = {{2, 2, 2}};
  CVector psi = CVector::Zero(8);
  psi(0) = psi(7) = 1.0 / std::sqrt(2.0);
  r.parent_states = {projector(psi)};
  r.child_povms.assign(3, {pauli_povm('z')});
  return r;
}

CVector w_state_vector() {
  CVector psi = CVector::Zero(8);
  psi(1) = psi(2) = psi(4) = 1.0 / std::sqrt(3.0);  // |001>, |010>, |100>
  return psi;
}

NetworkRealization w_state(double visibility) {
  check_visibility(visibility);
  NetworkRealization r;
  r.topology = star(3);
  r.subsystem_dims = {{2, 2, 2}};
  r.parent_states = {visibility * projector(w_state_vector()) +
                     (1.0 - visibility) / 8.0 * CMatrix::Identity(8, 8)};
  r.child_povms.assign(3, {pauli_povm('x'), pauli_povm('z')});
  return r;
}

NetworkRealization singlet() {
  NetworkRealization r;
  r.topology = star(2);
  r.subsystem_dims = {{2, 2}};
  CVector psi = CVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  r.parent_states = {projector(psi)};
  const double h = 1.0 / std::sqrt(2.0);
  r.child_povms = {{pauli_povm('z'), pauli_povm('x')},
                   {bloch_povm(-h, 0.0, -h), bloch_povm(h, 0.0, -h)}};
  return r;
}

DistributionTable pr_box_mixture(double visibility) {
  check_visibility(visibility);
  DistributionTable table({2, 2}, {2, 2});
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
          const double pr = ((x1 ^ x2) == (s1 & s2)) ? 0.5 : 0.0;
          table.set({s1, s2}, {x1, x2}, visibility * pr + (1.0 - visibility) * 0.25);
        }
      }
    }
  }
  return table;
}

NetworkRealization random_realization(const NetworkTopology& topology, std::uint64_t seed,
                                      int settings, int outcomes) {
  validate(topology);
  if (settings < 1 || outcomes < 1) throw Error(ErrorCode::ParameterRange, "settings and outcomes must be positive");
  Rng rng(seed);
  NetworkRealization r;
  r.topology = topology;
  for (int n = 0; n < topology.num_parents(); ++n) {
    const int k = static_cast<int>(topology.children_of[n].size());
    r.subsystem_dims.emplace_back(k, 2);
    r.parent_states.push_back(random_density(1 << k, rng));
  }
  const auto parents = topology.parents_of();
  for (int m = 0; m < topology.num_children(); ++m) {
    const int dim = 1 << parents[m].size();
    std::vector<Povm> povms;
    for (int s = 0; s < settings; ++s) povms.push_back(random_projective_povm(dim, outcomes, rng));
    r.child_povms.push_back(std::move(povms));
  }
  return r;
}

}  // namespace netcov::quantum
