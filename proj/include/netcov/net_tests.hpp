#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netcov/covariance.hpp"
#include "netcov/sdp.hpp"
#include "netcov/topology.hpp"

namespace netcov {

using ComplexMatrix = Eigen::MatrixXcd;

/// R + sum_n C_n = C_observable + completion. Matrices are ambient sized;
/// they are real in the joint case and Hermitian once a completion enters.
struct FeasibilityCertificate {
  ComplexMatrix R;
  std::vector<ComplexMatrix> C;  // one per parent
  ComplexMatrix completion;
};

enum class VerdictKind { Compatible, Incompatible, Inconclusive };

const char* to_string(VerdictKind kind);

struct TestVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  /// Tr(W C), the optimal shift t of the scaled problem. Zero when the
  /// route gives no number.
  double value = 0.0;
  std::optional<FeasibilityCertificate> certificate;
  Matrix witness;  // empty unless available
  std::string reason;
};

struct TestOptions {
  double tau = sdp::kTau;
  sdp::Field completion_field = sdp::Field::Hermitian;
  sdp::SolverOptions solver;
};

/// Decides C = sum_m P_m R P_m + sum_n P^(n) C_n P^(n) by minimising the
/// identity shift needed to make C decomposable. One solve gives both the
/// certificate and the witness.
TestVerdict primal_feasibility(const BlockMatrix& c, const NetworkTopology& topology,
                               const BlockLayout& layout, const TestOptions& options = {});

struct DualWitness {
  Matrix w;
  double value = 0.0;
  bool ok = false;
  std::string reason;
};

/// max Tr(W C) s.t. sum_m P_m W P_m <= 0, P^(n) W P^(n) <= 0, Tr W >= -1.
DualWitness dual_witness(const BlockMatrix& c, const NetworkTopology& topology,
                         const BlockLayout& layout, const TestOptions& options = {});

/// Test with unobservable blocks completed by free (Hermitian by default)
/// entries.
TestVerdict inputs_feasibility(const BlockMatrix& c_obs, const NetworkTopology& topology,
                               const BlockLayout& layout, const TestOptions& options = {});

/// Independent route: pure feasibility search for the decomposition with
/// no objective shift. Incompatible verdicts carry no witness.
TestVerdict find_decomposition(const BlockMatrix& c, const NetworkTopology& topology,
                               const BlockLayout& layout, const TestOptions& options = {});

/// One primal_feasibility verdict per setting tuple, indexed like the
/// table's setting tuples.
std::vector<TestVerdict> selection_test(const DistributionTable& dist,
                                        const NetworkTopology& topology,
                                        const FeatureMapSet& maps,
                                        const TestOptions& options = {});

TestVerdict random_selection_test(const DistributionTable& dist, const NetworkTopology& topology,
                                  const FeatureMapSet& maps,
                                  const std::vector<std::vector<double>>& q,
                                  const TestOptions& options = {});

/// Convenience front end: joint tables go through primal_feasibility,
/// conditional ones through inputs_feasibility.
TestVerdict test_distribution(const DistributionTable& dist, const NetworkTopology& topology,
                              const FeatureMapSet& maps, const TestOptions& options = {});

struct CertificateCheck {
  bool ok = false;
  double psd_violation = 0.0;
  double residual = 0.0;
  double support_violation = 0.0;
  double hermiticity = 0.0;
};

/// Direct arithmetic check of the certificate invariants. Off-support
/// entries must not exceed support_tol.
CertificateCheck verify_certificate(const FeasibilityCertificate& cert, const BlockMatrix& c,
                                    const NetworkTopology& topology, double support_tol = 0.0,
                                    double eps_psd = sdp::kEpsPsd, double eps_eq = sdp::kEpsEq);

struct BisectionResult {
  double threshold = 0.0;
  bool ok = false;
  int evaluations = 0;
  int retries = 0;
};

/// Smallest x in [lo, hi] at which the predicate turns Incompatible,
/// assuming monotonicity. Inconclusive points are retried at x +- 1e-6, at
/// most three times. If hi itself is not Incompatible the result is hi.
BisectionResult bisect_threshold(const std::function<VerdictKind(double)>& verdict_at, double lo,
                                 double hi, double tol = 1e-3);

}  // namespace netcov
