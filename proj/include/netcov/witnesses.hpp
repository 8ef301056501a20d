#pragma once

#include <string>

#include "netcov/covariance.hpp"
#include "netcov/topology.hpp"

namespace netcov {

/// Direct: orthonormal canonical feature vectors. Reflected: the same
/// with the second basis vector of every binary block negated.
enum class Convention { Direct, Reflected };

const char* to_string(Convention convention);

struct Witness {
  Matrix matrix;
  BlockLayout layout;
  NetworkTopology topology;
  std::string topology_name;
  Convention convention = Convention::Direct;
};

/// Largest eigenvalue among sum_m P_m W P_m and every P^(n) W P^(n).
double witness_violation(const Matrix& w, const NetworkTopology& topology,
                         const BlockLayout& layout);
bool validate_witness(const Matrix& w, const NetworkTopology& topology, const BlockLayout& layout,
                      double tol = 1e-10);
inline bool validate_witness(const Witness& w, double tol = 1e-10) {
  return validate_witness(w.matrix, w.topology, w.layout, tol);
}

/// Triangle witness for the GHZ distribution, direct convention, scaled to
/// unit trace norm of the diagonal (Tr W = -1).
Witness w_ghz();
/// 2N x 2N witness for the all-bipartite-sources N-party network.
Witness w_2n(int parties);

double kappa(int parties);
double analytic_boundary(int parties, double p);
double q0(int parties);
/// Strict membership of (p, q) in the incompatible region detected by w_2n;
/// symmetric under p <-> q.
bool in_analytic_region(int parties, double p, double q);
/// Tr[w_2n(N) C^N_pq] in closed form.
double w2n_trace_formula(int parties, double p, double q);

/// Tr(W C); throws on shape mismatch.
double evaluate(const Matrix& w, const Matrix& c);

}  // namespace netcov
