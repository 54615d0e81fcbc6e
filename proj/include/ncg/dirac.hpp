#pragma once

#include "ncg/clifford.hpp"
#include "ncg/lattice.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace ncg {

/// Operator on the Clifford-extended space, dimension 2^{d/2} * Q * #sites.
/// Layout is site-major: index = (site * cdim + clifford) * Q + internal.
struct ExtendedOperator {
  Matrix mat;
  Geometry geometry;
  int Q = 1;
  int cdim = 1;

  int block_dim() const { return cdim * Q; }
};

/// F_{x0} = sign(gamma . (X + x0)): per-site block gamma.(x+x0)/|x+x0| (x) I_Q.
/// Self-adjoint unitary, anticommutes with the grading.
struct DiracPhase {
  std::vector<double> x0;
  CliffordRep clifford;
  Geometry geometry;
  Matrix F;
};

inline DiracPhase dirac_phase(const Geometry& geometry, const CliffordRep& clifford,
                              const std::vector<double>& x0, int Q) {
  if (geometry.kind() != GeometryKind::box)
    throw unsupported_geometry_error("dirac_phase: box geometry required");
  const int d = geometry.dim();
  if (clifford.d != d) throw std::invalid_argument("dirac_phase: Clifford dimension mismatch");
  if (static_cast<int>(x0.size()) != d) throw std::invalid_argument("dirac_phase: bad shift");

  const int cdim = clifford.dim;
  const int n = geometry.site_count();
  const int bd = cdim * Q;
  DiracPhase ph{x0, clifford, geometry, Matrix::Zero(n * bd, n * bd)};
  const Matrix idq = Matrix::Identity(Q, Q);
  for (int x = 0; x < n; ++x) {
    const auto c = geometry.coord(x);
    double r2 = 0;
    for (int j = 0; j < d; ++j) {
      const double v = c[j] + x0[j];
      r2 += v * v;
    }
    const double r = std::sqrt(r2);
    if (r < 1e-12)
      throw std::invalid_argument("dirac_phase: shift places a site at the origin");
    Matrix g = Matrix::Zero(cdim, cdim);
    for (int j = 0; j < d; ++j) g += ((c[j] + x0[j]) / r) * clifford.generators[j];
    ph.F.block(x * bd, x * bd, bd, bd) = kron(g, idq);
  }
  return ph;
}

/// Kronecker extension by the Clifford identity factor:
/// block (x,y) of the lift is I_cdim (x) a_{xy}.
inline ExtendedOperator lift(const CovariantOperator& op, const CliffordRep& clifford) {
  if (op.geometry.kind() != GeometryKind::box)
    throw unsupported_geometry_error("lift: box geometry required");
  const int cdim = clifford.dim;
  const int Q = op.Q;
  const int n = op.geometry.site_count();
  const int bd = cdim * Q;
  ExtendedOperator eop{Matrix::Zero(n * bd, n * bd), op.geometry, Q, cdim};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& blk = op.mat.block(x * Q, y * Q, Q, Q);
      for (int c = 0; c < cdim; ++c)
        eop.mat.block((x * cdim + c) * Q, (y * cdim + c) * Q, Q, Q) = blk;
    }
  return eop;
}

/// Grading gamma = gamma_0 (x) I on the extended space.
inline Matrix grading_matrix(const CliffordRep& clifford, const Geometry& geometry, int Q) {
  const int cdim = clifford.dim;
  const int n = geometry.site_count();
  const int bd = cdim * Q;
  Matrix g = Matrix::Zero(n * bd, n * bd);
  const Matrix blk = kron(clifford.grading, Matrix::Identity(Q, Q));
  for (int x = 0; x < n; ++x) g.block(x * bd, x * bd, bd, bd) = blk;
  return g;
}

namespace detail {

inline bool in_interior(const Geometry& g, int site, int interior_radius) {
  const auto c = g.coord(site);
  for (int v : c)
    if (std::abs(v) > interior_radius) return false;
  return true;
}

}  // namespace detail

/// Lattice-summed trace Tr_gamma (x) tr_Q of the site-diagonal blocks,
/// restricted to the interior window ||x||_inf <= interior_radius. Neither
/// factor is normalized; with this convention the index below counts kernel
/// dimensions directly.
inline cplx trace_That(const ExtendedOperator& eop, int interior_radius) {
  if (interior_radius > eop.geometry.radius())
    throw std::invalid_argument("trace_That: interior exceeds the box");
  const int bd = eop.block_dim();
  cplx acc = 0.0;
  for (int x = 0; x < eop.geometry.site_count(); ++x) {
    if (!detail::in_interior(eop.geometry, x, interior_radius)) continue;
    acc += eop.mat.block(x * bd, x * bd, bd, bd).trace();
  }
  return acc;
}

/// Per-site decay of an extended operator's diagonal blocks against
/// |x + x0|, with a log-log least-squares slope.
struct DecayRecord {
  std::vector<std::pair<double, double>> samples;  // (|x+x0|, block norm)
  double slope = 0.0;
  bool fitted = false;
};

/// The log-log fit uses sites with 1 < |x+x0| <= fit_r_max; on an open box the
/// outermost shells are corrupted by the boundary and should be excluded.
inline DecayRecord diagonal_decay(const ExtendedOperator& eop, const std::vector<double>& x0,
                                  double fit_r_max = std::numeric_limits<double>::infinity()) {
  const int bd = eop.block_dim();
  DecayRecord rec;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (int x = 0; x < eop.geometry.site_count(); ++x) {
    const auto c = eop.geometry.coord(x);
    double r2 = 0;
    for (int j = 0; j < eop.geometry.dim(); ++j) {
      const double v = c[j] + x0[j];
      r2 += v * v;
    }
    const double r = std::sqrt(r2);
    Eigen::JacobiSVD<Matrix> svd(eop.mat.block(x * bd, x * bd, bd, bd));
    const double norm = svd.singularValues()(0);
    rec.samples.emplace_back(r, norm);
    if (norm > 1e-14 && r > 1.0 && r <= fit_r_max) {
      const double lx = std::log(r), ly = std::log(norm);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++npts;
    }
  }
  if (npts >= 2) {
    const double denom = npts * sxx - sx * sx;
    if (denom > 0) {
      rec.slope = (npts * sxy - sx * sy) / denom;
      rec.fitted = true;
    }
  }
  return rec;
}

/// Decay of the diagonal blocks of [F, lift(p)]^k.
inline DecayRecord summability_diagnostic(const SpectralProjector& p, const DiracPhase& F, int k,
                                          double fit_r_max =
                                              std::numeric_limits<double>::infinity()) {
  ExtendedOperator P = lift(p.p, F.clifford);
  Matrix C = F.F * P.mat - P.mat * F.F;
  Matrix acc = C;
  for (int i = 1; i < k; ++i) acc = (acc * C).eval();
  ExtendedOperator powk{std::move(acc), P.geometry, P.Q, P.cdim};
  return diagonal_decay(powk, F.x0, fit_r_max);
}

/// Generalized Fedosov index of f = pi^-(p) F pi^+(p), evaluated as
///   -That{ gamma lift(p) [F, lift(p)]^{2n} }
/// over the interior window. Throws when the imaginary residual of the trace
/// exceeds the tolerance.
inline double fedosov_tindex(const SpectralProjector& p, const DiracPhase& F, int n,
                             int interior_radius, double imag_tol = 1e-6) {
  const int d = F.geometry.dim();
  if (2 * n <= d + 1) throw std::invalid_argument("fedosov_tindex: need 2n > d+1");
  ExtendedOperator P = lift(p.p, F.clifford);
  Matrix C = F.F * P.mat - P.mat * F.F;
  Matrix C2 = C * C;
  C.resize(0, 0);
  Matrix Cpow = C2;  // [F,P]^{2n}
  for (int i = 1; i < n; ++i) Cpow = (Cpow * C2).eval();
  C2.resize(0, 0);

  // trace needs only the interior diagonal blocks of gamma * P * Cpow
  const Matrix gblk = kron(F.clifford.grading, Matrix::Identity(P.Q, P.Q));
  const int bd = P.block_dim();
  cplx acc = 0.0;
  for (int x = 0; x < P.geometry.site_count(); ++x) {
    if (!detail::in_interior(P.geometry, x, interior_radius)) continue;
    const Matrix blk = P.mat.middleRows(x * bd, bd) * Cpow.middleCols(x * bd, bd);
    acc += (gblk * blk).trace();
  }
  const double value = -acc.real();
  const double resid = std::abs(acc.imag());
  if (resid > imag_tol * std::max(1.0, std::abs(value)))
    throw numerical_inconsistency_error("fedosov_tindex: imaginary residual " +
                                        std::to_string(resid));
  return value;
}

/// Kernel dimensions of the compression f = pi^+(p) F pi^-(p) between the
/// graded ranges of lift(p). Small singular values are attributed to a kernel
/// only when their singular vector carries most of its weight in the interior
/// window; boundary-localized near-zero modes are finite-size artifacts of the
/// open box and are discarded. Throws when no clear gap in the singular
/// spectrum separates kernel from bulk around tol.
inline std::pair<int, int> kernel_dims(const SpectralProjector& p, const DiracPhase& F,
                                       double tol, int interior_radius,
                                       double interior_mass = 0.5) {
  const CliffordRep& cl = F.clifford;
  const int cdim = cl.dim;
  const int Q = p.p.Q;
  const int n = p.p.geometry.site_count();
  const int r = static_cast<int>(p.occupied.cols());

  // Eigenbases of the grading on the Clifford factor.
  HermitianEig geig = hermitian_eig(cl.grading);
  std::vector<int> plus_idx, minus_idx;
  for (int i = 0; i < cdim; ++i)
    (geig.values[i] > 0 ? plus_idx : minus_idx).push_back(i);
  const int half = cdim / 2;

  // Basis of ran(pi^+-(p)) = span{ w_a (x) v_i } in the site (x) Cl (x) Q layout.
  auto build_basis = [&](const std::vector<int>& cols) {
    Matrix B = Matrix::Zero(n * cdim * Q, static_cast<Eigen::Index>(half) * r);
    for (int a = 0; a < half; ++a) {
      const auto w = geig.vectors.col(cols[a]);
      for (int i = 0; i < r; ++i) {
        auto dst = B.col(static_cast<Eigen::Index>(a) * r + i);
        for (int x = 0; x < n; ++x)
          for (int c = 0; c < cdim; ++c)
            dst.segment((static_cast<Eigen::Index>(x) * cdim + c) * Q, Q) =
                w(c) * p.occupied.col(i).segment(static_cast<Eigen::Index>(x) * Q, Q);
      }
    }
    return B;
  };
  const Matrix Bplus = build_basis(plus_idx);
  const Matrix Bminus = build_basis(minus_idx);
  const Matrix M = Bplus.adjoint() * (F.F * Bminus);

  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();

  // demand a gap around tol in the singular spectrum
  double below = 0.0, above = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < tol)
      below = std::max(below, sv(i));
    else
      above = std::min(above, sv(i));
  }
  if (std::isfinite(above) && below > 0.0 && above / below < 10.0)
    throw ambiguous_kernel_error("kernel_dims: no singular-value gap around tol");

  auto interior_fraction = [&](const Eigen::VectorXcd& vec_in_range, const Matrix& B) {
    Eigen::VectorXcd full = B * vec_in_range;
    double tot = 0.0, in = 0.0;
    const int bd = cdim * Q;
    for (int x = 0; x < n; ++x) {
      const double w = full.segment(static_cast<Eigen::Index>(x) * bd, bd).squaredNorm();
      tot += w;
      if (detail::in_interior(p.p.geometry, x, interior_radius)) in += w;
    }
    return tot > 0 ? in / tot : 0.0;
  };

  int ker = 0, coker = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= tol) continue;
    if (interior_fraction(svd.matrixV().col(i), Bminus) > interior_mass) ++ker;
    if (interior_fraction(svd.matrixU().col(i), Bplus) > interior_mass) ++coker;
  }
  // rectangular deficits (cannot occur here since both ranges have dim half*r,
  // but keep the count honest)
  ker += static_cast<int>(Bminus.cols() - sv.size());
  coker += static_cast<int>(Bplus.cols() - sv.size());
  return {ker, coker};
}

}  // namespace ncg
