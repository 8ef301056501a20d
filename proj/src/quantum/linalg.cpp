#include <cmath>
#include <complex>
#include <numeric>

#include "netcov/error.hpp"
#include "netcov/quantum.hpp"

namespace netcov::quantum {

using cd = std::complex<double>;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix kron_all(const std::vector<CMatrix>& factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

namespace {

/// idx_out -> idx_in for a factor permutation.
std::vector<int> permutation_index(const std::vector<int>& dims, const std::vector<int>& perm) {
  const int s = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != s) {
    throw Error(ErrorCode::DimensionMismatch, "permutation length differs from number of subsystems");
  }
  std::vector<char> seen(s, 0);
  for (int p : perm) {
    if (p < 0 || p >= s || seen[p]) throw Error(ErrorCode::InvalidRealization, "not a permutation");
    seen[p] = 1;
  }
  const int total = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
  std::vector<int> out_dims(s), in_stride(s);
  for (int k = 0; k < s; ++k) out_dims[k] = dims[perm[k]];
  int stride = 1;
  for (int k = s - 1; k >= 0; --k) {
    in_stride[k] = stride;
    stride *= dims[k];
  }
  std::vector<int> map(total);
  std::vector<int> digit(s, 0);
  for (int idx = 0; idx < total; ++idx) {
    int in = 0;
    for (int k = 0; k < s; ++k) in += digit[k] * in_stride[perm[k]];
    map[idx] = in;
    for (int k = s - 1; k >= 0; --k) {
      if (++digit[k] < out_dims[k]) break;
      digit[k] = 0;
    }
  }
  return map;
}

}  // namespace

CMatrix permute_subsystems(const CMatrix& op, const std::vector<int>& dims,
                           const std::vector<int>& perm) {
  const auto map = permutation_index(dims, perm);
  const int total = static_cast<int>(map.size());
  if (op.rows() != total || op.cols() != total) {
    throw Error(ErrorCode::DimensionMismatch, "operator size does not match subsystem dimensions");
  }
  CMatrix out(total, total);
  for (int c = 0; c < total; ++c) {
    for (int r = 0; r < total; ++r) out(r, c) = op(map[r], map[c]);
  }
  return out;
}

CMatrix embed(const CMatrix& op, const std::vector<int>& dims, const std::vector<int>& targets) {
  const int s = static_cast<int>(dims.size());
  std::vector<char> is_target(s, 0);
  std::vector<int> order;
  int target_dim = 1;
  for (int t : targets) {
    if (t < 0 || t >= s || is_target[t]) throw Error(ErrorCode::IndexOutOfRange, "bad target subsystem");
    is_target[t] = 1;
    order.push_back(t);
    target_dim *= dims[t];
  }
  if (op.rows() != target_dim || op.cols() != target_dim) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not match target subsystems");
  }
  int rest = 1;
  for (int k = 0; k < s; ++k) {
    if (!is_target[k]) {
      order.push_back(k);
      rest *= dims[k];
    }
  }
  const CMatrix full = kron(op, CMatrix::Identity(rest, rest));
  std::vector<int> in_dims(s), perm(s);
  for (int k = 0; k < s; ++k) {
    in_dims[k] = dims[order[k]];
    perm[order[k]] = k;
  }
  return permute_subsystems(full, in_dims, perm);
}

CMatrix contract_front(const CMatrix& x, const CMatrix& w, int d1) {
  if (d1 <= 0 || x.rows() % d1 != 0 || w.rows() != d1 || w.cols() != d1) {
    throw Error(ErrorCode::DimensionMismatch, "contract_front: incompatible dimensions");
  }
  const int d2 = static_cast<int>(x.rows()) / d1;
  CMatrix out = CMatrix::Zero(d2, d2);
  for (int a = 0; a < d1; ++a) {
    for (int b = 0; b < d1; ++b) {
      const cd weight = w(b, a);
      if (weight != cd(0.0)) out += weight * x.block(a * d2, b * d2, d2, d2);
    }
  }
  return out;
}

CMatrix pauli(char axis) {
  CMatrix p(2, 2);
  switch (axis) {
    case 'x': p << 0, 1, 1, 0; break;
    case 'y': p << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'z': p << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::ParameterRange, "pauli axis must be x, y or z");
  }
  return p;
}

Povm bloch_povm(double nx, double ny, double nz) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (std::abs(norm - 1.0) > 1e-12) throw Error(ErrorCode::ParameterRange, "Bloch vector must be a unit vector");
  const CMatrix s = nx * pauli('x') + ny * pauli('y') + nz * pauli('z');
  const CMatrix id = CMatrix::Identity(2, 2);
  return {0.5 * (id + s), 0.5 * (id - s)};
}

Povm pauli_povm(char axis) {
  switch (axis) {
    case 'x': return bloch_povm(1, 0, 0);
    case 'y': return bloch_povm(0, 1, 0);
    case 'z': return bloch_povm(0, 0, 1);
    default: throw Error(ErrorCode::ParameterRange, "pauli axis must be x, y or z");
  }
}

namespace {

CMatrix gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = n(rng);
      const double im = n(rng);
      g(r, c) = cd(re, im);
    }
  }
  return g;
}

}  // namespace

CMatrix random_density(int dim, Rng& rng) {
  const CMatrix g = gaussian(dim, dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

CMatrix random_unitary(int dim, Rng& rng) {
  const CMatrix g = gaussian(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const cd d = r(k, k);
    const double a = std::abs(d);
    if (a > 0.0) q.col(k) *= d / a;
  }
  return q;
}

Povm random_projective_povm(int dim, int outcomes, Rng& rng) {
  if (outcomes < 1) throw Error(ErrorCode::ParameterRange, "need at least one outcome");
  Povm povm(outcomes, CMatrix::Zero(dim, dim));
  if (dim == 1) {
    // One-dimensional space: a random probability vector.
    std::exponential_distribution<double> e(1.0);
    double total = 0.0;
    std::vector<double> w(outcomes);
    for (auto& x : w) total += (x = e(rng));
    for (int k = 0; k < outcomes; ++k) povm[k](0, 0) = w[k] / total;
    return povm;
  }
  const CMatrix u = random_unitary(dim, rng);
  for (int k = 0; k < dim; ++k) povm[k % outcomes] += u.col(k) * u.col(k).adjoint();
  return povm;
}

}  // namespace netcov::quantum
