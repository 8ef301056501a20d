#include "netcov/witnesses.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "netcov/error.hpp"

namespace netcov {

const char* to_string(Convention convention) {
  return convention == Convention::Direct ? "direct" : "reflected";
}

namespace {

Matrix principal(const Matrix& m, const std::vector<int>& idx) {
  Matrix out(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = m(idx[a], idx[b]);
  }
  return out;
}

}  // namespace

double witness_violation(const Matrix& w, const NetworkTopology& topology,
                         const BlockLayout& layout) {
  validate(topology);
  if (w.rows() != layout.total_dim() || w.cols() != layout.total_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "witness does not match layout dimension");
  }
  if (layout.num_children() != topology.num_children()) {
    throw Error(ErrorCode::DimensionMismatch, "layout and topology disagree on children");
  }
  // sum_m P_m W P_m keeps the diagonal child blocks.
  Matrix diag = Matrix::Zero(w.rows(), w.cols());
  for (int m = 0; m < layout.num_children(); ++m) {
    const auto idx = layout.child_indices(m);
    for (int a : idx) {
      for (int b : idx) diag(a, b) = w(a, b);
    }
  }
  double worst = max_eigenvalue(diag);
  for (int n = 0; n < topology.num_parents(); ++n) {
    worst = std::max(worst, max_eigenvalue(principal(w, parent_support(topology, layout, n))));
  }
  return worst;
}

bool validate_witness(const Matrix& w, const NetworkTopology& topology, const BlockLayout& layout,
                      double tol) {
  return witness_violation(w, topology, layout) <= tol;
}

namespace {

/// Integer pattern (J - 2I) (x) (1 - sigma_x): the literal ladder expression.
Matrix ladder_pattern(int parties) {
  const int d = 2 * parties;
  Matrix w(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (r == c) {
        w(r, c) = -1.0;
      } else if (r / 2 == c / 2) {
        w(r, c) = 1.0;
      } else {
        w(r, c) = (std::abs(r - c) % 2 == 0) ? 1.0 : -1.0;
      }
    }
  }
  return w;
}

}  // namespace

Witness w_ghz() {
  Witness w;
  w.topology = triangle();
  w.topology_name = "triangle";
  w.layout = BlockLayout::single_setting({2, 2, 2});
  w.matrix = ladder_pattern(3) / 6.0;
  w.convention = Convention::Direct;
  return w;
}

Witness w_2n(int parties) {
  if (parties < 3) throw Error(ErrorCode::ParameterRange, "w_2n needs at least 3 parties");
  if (parties > 16) throw Error(ErrorCode::ParameterRange, "w_2n limited to 16 parties");
  Witness w;
  w.topology = all_bipartite(parties);
  w.topology_name = "all-bipartite-" + std::to_string(parties);
  w.layout = BlockLayout::single_setting(std::vector<int>(parties, 2));
  w.matrix = reflect_blocks(ladder_pattern(parties), w.layout);
  w.convention = Convention::Reflected;
  return w;
}

double kappa(int parties) {
  if (parties < 3) throw Error(ErrorCode::ParameterRange, "kappa needs at least 3 parties");
  const double n = parties;
  return (n - 1.0) * std::ldexp(1.0, parties - 2) /
         ((n - 2.0) * (std::ldexp(1.0, parties - 1) - 1.0));
}

double analytic_boundary(int parties, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::ParameterRange, "p must lie in [0, 1]");
  const double k = kappa(parties);
  return p + k - std::sqrt(4.0 * k * p + (k - 1.0) * (k - 1.0));
}

double q0(int parties) {
  const double k = kappa(parties);
  return k - std::abs(k - 1.0);
}

bool in_analytic_region(int parties, double p, double q) {
  const double k = kappa(parties);
  return (q - p) * (q - p) < 1.0 - 2.0 * k * (1.0 - p - q);
}

double w2n_trace_formula(int parties, double p, double q) {
  return 4.0 * parties * (pq_chi(parties, p, q) * (parties - 2) - pq_delta(parties, p, q));
}

double evaluate(const Matrix& w, const Matrix& c) {
  if (w.rows() != c.rows() || w.cols() != c.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "witness and covariance shapes differ");
  }
  return w.cwiseProduct(c.transpose()).sum();
}

}  // namespace netcov
