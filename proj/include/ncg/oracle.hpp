#pragma once

#include "ncg/lattice.hpp"

#include <cmath>
#include <vector>

namespace ncg {

/// Bloch symbol h(k) = sum_q A_q e^{-i k.q} of a clean model.
inline Matrix bloch_hamiltonian(const HoppingModel& model, const std::vector<double>& k) {
  Matrix h = Matrix::Zero(model.Q, model.Q);
  for (const auto& hop : model.hoppings) {
    double phase = 0.0;
    for (int j = 0; j < model.d; ++j) phase -= k[j] * hop.q[j];
    h += std::exp(iu * phase) * hop.A;
  }
  return h;
}

/// Chern number of the bands below fermi_level via the discretized Berry
/// curvature (link-variable plaquette field strength) on an N x N Brillouin
/// zone grid. Exact integer output for N above a model-dependent threshold;
/// self-check is stability under N-doubling.
///
/// Orientation convention: axes 1,2 ordered as the lattice axes; the sign
/// matches the real-space antisymmetrized cocycle of this library.
inline int momentum_oracle_chern(const HoppingModel& model, double fermi_level, int grid,
                                 double gap_threshold = 1e-8) {
  if (model.d != 2) throw std::invalid_argument("momentum_oracle_chern: d = 2 required");
  for (const auto& h : model.hoppings)
    if (h.W != 0.0)
      throw std::invalid_argument("momentum_oracle_chern: clean model required (W = 0)");
  model.validate();

  const int N = grid;
  // occupied frames at each grid point
  std::vector<Matrix> frames(static_cast<size_t>(N) * N);
  int nocc = -1;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const std::vector<double> k = {2.0 * pi * i / N, 2.0 * pi * j / N};
      HermitianEig eig = hermitian_eig(bloch_hamiltonian(model, k));
      int m = 0;
      double gap = std::numeric_limits<double>::infinity();
      for (int b = 0; b < model.Q; ++b) {
        if (eig.values[b] <= fermi_level) m = b + 1;
        gap = std::min(gap, std::abs(eig.values[b] - fermi_level));
      }
      if (gap < gap_threshold) throw gap_closed_error(gap);
      if (nocc < 0) nocc = m;
      if (m != nocc) throw gap_closed_error(0.0);
      frames[static_cast<size_t>(i) * N + j] = eig.vectors.leftCols(m);
    }
  if (nocc == 0 || nocc == model.Q) return 0;

  auto link = [&](int i1, int j1, int i2, int j2) {
    const Matrix ov = frames[static_cast<size_t>(i1 % N) * N + (j1 % N)].adjoint() *
                      frames[static_cast<size_t>(i2 % N) * N + (j2 % N)];
    const cplx det = ov.determinant();
    if (std::abs(det) < 1e-12) throw gap_closed_error(std::abs(det));
    return det / std::abs(det);
  };

  double total = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const cplx plaq = link(i, j, i + 1, j) * link(i + 1, j, i + 1, j + 1) /
                        (link(i, j + 1, i + 1, j + 1) * link(i, j, i, j + 1));
      total += std::arg(plaq);
    }
  const double chern = total / (2.0 * pi);
  const double rounded = std::round(chern);
  if (std::abs(chern - rounded) > 0.01)
    throw numerical_inconsistency_error("momentum_oracle_chern: non-integer field strength sum " +
                                        std::to_string(chern));
  return static_cast<int>(rounded);
}

}  // namespace ncg
