#pragma once

#include "ncg/lattice.hpp"

#include <map>
#include <ostream>
#include <vector>

namespace ncg {

/// Hopping-diagonal decomposition of a torus operator: for each minimal-image
/// q, the per-site list of blocks a_{x,x-q}.
struct FourierFamily {
  Geometry geometry;
  int Q = 1;
  std::map<std::vector<int>, std::vector<Matrix>> coefficients;
};

namespace detail {

inline void require_torus(const CovariantOperator& op, const char* what) {
  if (op.geometry.kind() != GeometryKind::torus)
    throw unsupported_geometry_error(std::string(what) + ": torus geometry required");
}

/// Visit every block pair (x, y) with its minimal-image displacement q = x-y.
template <class F>
void for_each_block(const CovariantOperator& op, F&& f) {
  const Geometry& g = op.geometry;
  const int n = g.site_count();
  for (int x = 0; x < n; ++x) {
    const auto cx = g.coord(x);
    for (int y = 0; y < n; ++y) {
      const auto q = g.min_image(cx, g.coord(y));
      f(x, y, q);
    }
  }
}

}  // namespace detail

inline FourierFamily fourier_decompose(const CovariantOperator& op) {
  detail::require_torus(op, "fourier_decompose");
  const int Q = op.Q;
  const int n = op.geometry.site_count();
  FourierFamily fam{op.geometry, Q, {}};
  detail::for_each_block(op, [&](int x, int y, const std::vector<int>& q) {
    Matrix blk = op.mat.block(x * Q, y * Q, Q, Q);
    if (blk.cwiseAbs().maxCoeff() == 0.0) return;
    auto it = fam.coefficients.find(q);
    if (it == fam.coefficients.end())
      it = fam.coefficients.emplace(q, std::vector<Matrix>(n, Matrix::Zero(Q, Q))).first;
    it->second[x] = std::move(blk);
  });
  return fam;
}

inline CovariantOperator fourier_assemble(const FourierFamily& fam) {
  const Geometry& g = fam.geometry;
  const int Q = fam.Q;
  const int n = g.site_count();
  CovariantOperator op{Matrix::Zero(n * Q, n * Q), g, Q, std::nullopt};
  for (const auto& [q, blocks] : fam.coefficients) {
    for (int x = 0; x < n; ++x) {
      auto c = g.coord(x);
      for (int j = 0; j < g.dim(); ++j) c[j] -= q[j];
      const int y = g.index(c);
      op.mat.block(x * Q, y * Q, Q, Q) += blocks[x];
    }
  }
  return op;
}

/// Fejer-weighted truncation: keep |q_j| <= N with weight prod(1 - |q_j|/(N+1)).
inline CovariantOperator cesaro_sum(const CovariantOperator& op, int N) {
  detail::require_torus(op, "cesaro_sum");
  if (N < 0) throw std::invalid_argument("cesaro_sum: N must be >= 0");
  const int Q = op.Q;
  CovariantOperator out{Matrix::Zero(op.mat.rows(), op.mat.cols()), op.geometry, op.Q,
                        std::vector<int>(op.geometry.dim(), N)};
  detail::for_each_block(op, [&](int x, int y, const std::vector<int>& q) {
    double w = 1.0;
    for (int v : q) {
      if (std::abs(v) > N) {
        w = 0.0;
        break;
      }
      w *= 1.0 - std::abs(v) / (N + 1.0);
    }
    if (w != 0.0) out.mat.block(x * Q, y * Q, Q, Q) = w * op.mat.block(x * Q, y * Q, Q, Q);
  });
  return out;
}

/// Noncommutative partial derivative: the q-block is scaled by i*q_j with q the
/// minimal-image representative. For even torus sizes the ambiguous boundary
/// mode q_j = L_j/2 gets coefficient 0, which keeps the *-derivation identity
/// exact on every operator.
inline CovariantOperator derivation(const CovariantOperator& op, int axis) {
  detail::require_torus(op, "derivation");
  const Geometry& g = op.geometry;
  if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("derivation: bad axis");
  if (op.band && 2 * (*op.band)[axis] >= g.sizes()[axis])
    throw std::invalid_argument("derivation: band width exceeds minimal-image bound");
  const int Q = op.Q;
  const int L = g.sizes()[axis];
  CovariantOperator out{Matrix::Zero(op.mat.rows(), op.mat.cols()), g, Q, op.band};
  detail::for_each_block(op, [&](int x, int y, const std::vector<int>& q) {
    const int qa = q[axis];
    if (qa == 0 || 2 * qa == L) return;
    out.mat.block(x * Q, y * Q, Q, Q) = (iu * static_cast<double>(qa)) * op.mat.block(x * Q, y * Q, Q, Q);
  });
  return out;
}

/// Trace per unit volume: (1/#sites) sum_x tr a_{xx}, optionally averaged over
/// an ensemble of realizations.
inline cplx trace_T(const CovariantOperator& op) {
  detail::require_torus(op, "trace_T");
  return op.mat.trace() / static_cast<double>(op.geometry.site_count());
}

inline cplx trace_T(const std::vector<CovariantOperator>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("trace_T: empty ensemble");
  cplx acc = 0.0;
  for (const auto& op : ensemble) {
    if (!same_geometry(op.geometry, ensemble.front().geometry))
      throw std::invalid_argument("trace_T: ensemble members must share geometry");
    acc += trace_T(op);
  }
  return acc / static_cast<double>(ensemble.size());
}

/// Decay table sup_x ||a_{x,x-q}|| by hopping length, with a least-squares
/// exponential fit log(norm) ~ log C + |q| log alpha.
struct LocalityProfile {
  std::vector<std::pair<double, double>> sup_norms;  // (|q|, sup norm), sorted by |q|
  double alpha = 0.0;
  bool fitted = false;
};

inline LocalityProfile locality_profile(const CovariantOperator& op) {
  detail::require_torus(op, "locality_profile");
  const int Q = op.Q;
  std::map<double, double> by_len;
  detail::for_each_block(op, [&](int x, int y, const std::vector<int>& q) {
    double len2 = 0;
    for (int v : q) len2 += static_cast<double>(v) * v;
    const double len = std::sqrt(len2);
    Eigen::JacobiSVD<Matrix> svd(op.mat.block(x * Q, y * Q, Q, Q));
    const double norm = svd.singularValues()(0);
    auto [it, inserted] = by_len.emplace(len, norm);
    if (!inserted) it->second = std::max(it->second, norm);
  });

  LocalityProfile prof;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (const auto& [len, norm] : by_len) {
    prof.sup_norms.emplace_back(len, norm);
    if (norm > 1e-14 && len > 0) {
      const double ln = std::log(norm);
      sx += len;
      sy += ln;
      sxx += len * len;
      sxy += len * ln;
      ++npts;
    }
  }
  if (npts >= 2) {
    const double denom = npts * sxx - sx * sx;
    if (denom > 0) {
      prof.alpha = std::exp((npts * sxy - sx * sy) / denom);
      prof.fitted = true;
    }
  }
  return prof;
}

inline void write_csv(const LocalityProfile& prof, std::ostream& os) {
  os << "q_len,sup_norm\n";
  for (const auto& [len, norm] : prof.sup_norms) os << len << "," << norm << "\n";
}

}  // namespace ncg
