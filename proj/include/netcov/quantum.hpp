#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "netcov/covariance.hpp"
#include "netcov/net_tests.hpp"
#include "netcov/topology.hpp"

namespace netcov::quantum {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Povm = std::vector<CMatrix>;
using Rng = std::mt19937_64;

inline constexpr int kDefaultDimensionCap = 1 << 12;

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(const std::vector<CMatrix>& factors);

/// Reorders tensor factors of an operator on (x)_k H_k with dims[k]: output
/// factor k is input factor perm[k].
CMatrix permute_subsystems(const CMatrix& op, const std::vector<int>& dims,
                           const std::vector<int>& perm);

/// Operator acting as op on the listed subsystems (in that order) and as
/// the identity elsewhere.
CMatrix embed(const CMatrix& op, const std::vector<int>& dims, const std::vector<int>& targets);

/// Tr_1[X (W (x) 1)] for X on C^{d1} (x) C^{d2}.
CMatrix contract_front(const CMatrix& x, const CMatrix& w, int d1);

CMatrix pauli(char axis);
/// Projectors (1 + n.sigma)/2 and (1 - n.sigma)/2; outcome 0 is the +1
/// eigenspace.
Povm pauli_povm(char axis);
Povm bloch_povm(double nx, double ny, double nz);

CMatrix random_density(int dim, Rng& rng);
CMatrix random_unitary(int dim, Rng& rng);
/// Rank-one projectors onto a Haar-random basis, grouped round-robin into
/// the requested number of outcomes.
Povm random_projective_povm(int dim, int outcomes, Rng& rng);

struct NetworkRealization {
  NetworkTopology topology;
  /// subsystem_dims[n][k]: dimension of the share of parent n held by
  /// child topology.children_of[n][k].
  std::vector<std::vector<int>> subsystem_dims;
  std::vector<CMatrix> parent_states;
  /// child_povms[m][s][x]; orphan children act on a one-dimensional space.
  std::vector<std::vector<Povm>> child_povms;
};

/// Throws Error{InvalidRealization} when states or POVMs break their
/// invariants.
void validate(const NetworkRealization& r);

/// Dimension of H_{c_m} for each child.
std::vector<int> child_dims(const NetworkRealization& r);
int total_dim(const NetworkRealization& r);

/// Global state in child-major order (x)_m H_{c_m}.
CMatrix global_state(const NetworkRealization& r, int cap = kDefaultDimensionCap);

DistributionTable distribution(const NetworkRealization& r, int cap = kDefaultDimensionCap);
DistributionTable conditional_distribution(const NetworkRealization& r,
                                           int cap = kDefaultDimensionCap);

struct Lemma1Report {
  std::vector<ComplexMatrix> C;  // per parent, ambient over V
  ComplexMatrix sum_identity_lhs;  // sum_n C_n
  ComplexMatrix sum_identity_rhs;  // Tr(QQ^dag rho) - Tr(Q rho) Tr(Q^dag rho)
  double identity_residual = 0.0;
  double min_eigenvalue = 0.0;     // smallest over all C_n
  double support_leak = 0.0;       // largest entry outside P^(n) support
  bool ok = false;
};

/// Telescoping decomposition for a single-setting realization with
/// canonical feature maps.
Lemma1Report lemma1_check(const NetworkRealization& r, int cap = kDefaultDimensionCap);

struct Lemma2Report {
  FeasibilityCertificate certificate;  // R_q, C_n, completion
  BlockMatrix observable;             // from the realization's conditional table
  double completed_min_eigenvalue = 0.0;
  double r_min_eigenvalue = 0.0;
  double c_min_eigenvalue = 0.0;
  double completion_hermiticity = 0.0;
  double completion_leak = 0.0;  // largest entry outside the masked blocks
  CertificateCheck check;
  bool ok = false;
};

Lemma2Report lemma2_completion(const NetworkRealization& r, int cap = kDefaultDimensionCap);

// Builders.
NetworkRealization ghz_state();
/// Noisy W state on a three-child star; setting 0 measures sigma_x,
/// setting 1 sigma_z on every child.
NetworkRealization w_state(double visibility);
CVector w_state_vector();
/// Singlet on a two-child star with the CHSH-optimal settings.
NetworkRealization singlet();
DistributionTable pr_box_mixture(double visibility);
/// Qubit shares, Hilbert-Schmidt random parent states and Haar-random
/// projective POVMs.
NetworkRealization random_realization(const NetworkTopology& topology, std::uint64_t seed,
                                      int settings = 1, int outcomes = 2);

/// E[(-1)^(x1 + x2)] combination S = E00 + E01 + E10 - E11.
double chsh_value(const DistributionTable& dist);

}  // namespace netcov::quantum
