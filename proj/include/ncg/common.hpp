#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

#ifndef LAPACK_COMPLEX_CPP
#define LAPACK_COMPLEX_CPP
#endif
#include <lapacke.h>

namespace ncg {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx iu{0.0, 1.0};

/// Fermi level fell inside an eigenvalue cluster; carries the measured gap.
struct gap_closed_error : std::runtime_error {
  double gap;
  explicit gap_closed_error(double g)
      : std::runtime_error("spectral gap below threshold: " + std::to_string(g)), gap(g) {}
};

struct numerical_inconsistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ambiguous_kernel_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct HermitianEig {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns
};

/// Full Hermitian eigendecomposition (LAPACK zheevd, deterministic).
inline HermitianEig hermitian_eig(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
  const int n = static_cast<int>(h.rows());
  HermitianEig out;
  out.vectors = h;
  out.values.resize(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                            reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
                            out.values.data());
  if (info != 0)
    throw numerical_inconsistency_error("zheevd failed, info=" + std::to_string(info));
  return out;
}

}  // namespace ncg
