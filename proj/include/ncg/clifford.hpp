#pragma once

#include "ncg/common.hpp"

#include <vector>

namespace ncg {

/// Concrete matrix representation of the even Clifford algebra Cl_d:
/// d Hermitian unitary generators with gamma_i gamma_j + gamma_j gamma_i = 2 delta_ij,
/// plus the grading gamma_0 = -i^{d/2} gamma_1 ... gamma_d.
struct CliffordRep {
  int d = 0;
  int dim = 0;  // 2^{d/2}
  std::vector<Matrix> generators;
  Matrix grading;
};

/// Recursive doubling with a fixed generator ordering, so every build is
/// bit-identical: Cl_2 uses the standard real/imaginary off-diagonal pair,
/// and Cl_{d+2} = {sigma_x (x) gamma_i, sigma_y (x) 1, sigma_z (x) 1}.
inline CliffordRep build_clifford(int d) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("build_clifford: d must be even, >= 2");
  if (d > 8) throw std::invalid_argument("build_clifford: d > 8 not supported");

  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;

  std::vector<Matrix> gen = {sx, sy};
  for (int cur = 2; cur < d; cur += 2) {
    const int m = 1 << (cur / 2);
    std::vector<Matrix> next;
    next.reserve(cur + 2);
    for (const Matrix& g : gen) next.push_back(kron(sx, g));
    next.push_back(kron(sy, Matrix::Identity(m, m)));
    next.push_back(kron(sz, Matrix::Identity(m, m)));
    gen = std::move(next);
  }

  CliffordRep rep;
  rep.d = d;
  rep.dim = 1 << (d / 2);
  rep.generators = std::move(gen);

  Matrix prod = Matrix::Identity(rep.dim, rep.dim);
  for (const Matrix& g : rep.generators) prod = prod * g;
  // -i^{d/2}, exact
  static const cplx ipow[4] = {1.0, iu, -1.0, -iu};
  rep.grading = -ipow[(d / 2) % 4] * prod;
  return rep;
}

/// Normalized trace on Cl_d: (matrix trace) / 2^{d/2}.
inline cplx clifford_trace(const CliffordRep& rep, const Matrix& m) {
  if (m.rows() != rep.dim || m.cols() != rep.dim)
    throw std::invalid_argument("clifford_trace: dimension mismatch");
  return m.trace() / static_cast<double>(rep.dim);
}

}  // namespace ncg
