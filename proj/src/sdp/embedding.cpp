#include "netcov/error.hpp"
#include "netcov/sdp.hpp"

namespace netcov::sdp {

Matrix hermitian_real_embedding(const Matrix& real_part, const Matrix& imag_part) {
  const auto n = real_part.rows();
  if (real_part.cols() != n || imag_part.rows() != n || imag_part.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "real and imaginary parts must be square of equal size");
  }
  Matrix out(2 * n, 2 * n);
  out << real_part, -imag_part, imag_part, real_part;
  return out;
}

Matrix hermitian_real_embedding(const ComplexMatrix& h) {
  return hermitian_real_embedding(h.real(), h.imag());
}

}  // namespace netcov::sdp
