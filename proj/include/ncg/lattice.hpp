#pragma once

#include "ncg/common.hpp"
#include "ncg/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace ncg {

/// One hopping term: Q x Q block attached to the displacement q, with an
/// optional disorder coupling strength W >= 0.
struct Hopping {
  std::vector<int> q;
  Matrix A;
  double W = 0.0;
};

/// Covariant lattice Hamiltonian specification. Self-adjointness requires
/// A_{-q} = A_q^dagger (and W_{-q} = W_q) for every hopping present.
struct HoppingModel {
  int d = 0;
  int Q = 1;
  std::vector<Hopping> hoppings;

  const Hopping* find(const std::vector<int>& q) const {
    for (const auto& h : hoppings)
      if (h.q == q) return &h;
    return nullptr;
  }

  void validate() const {
    for (const auto& h : hoppings) {
      if (static_cast<int>(h.q.size()) != d) throw std::invalid_argument("hopping q has wrong dimension");
      if (h.A.rows() != Q || h.A.cols() != Q) throw std::invalid_argument("hopping block has wrong size");
      if (h.W < 0) throw std::invalid_argument("disorder coupling must be >= 0");
      std::vector<int> mq(h.q);
      for (int& v : mq) v = -v;
      const Hopping* partner = find(mq);
      if (!partner || (partner->A - h.A.adjoint()).cwiseAbs().maxCoeff() > 1e-12 ||
          partner->W != h.W)
        throw std::invalid_argument("model is not self-adjoint: missing or mismatched A_{-q}");
    }
  }
};

/// Per-site i.i.d. uniform[-1/2,1/2] scalars, bit-reproducible from the seed.
struct DisorderConfig {
  Geometry geometry;
  std::uint64_t seed = 0;
  std::vector<double> omega;
};

inline DisorderConfig sample_disorder(const Geometry& geometry, std::uint64_t seed) {
  DisorderConfig cfg{geometry, seed, {}};
  cfg.omega.resize(geometry.site_count());
  std::mt19937_64 eng(seed);
  for (double& w : cfg.omega) {
    // explicit 53-bit mapping; uniform_real_distribution is not portable bit-wise
    w = static_cast<double>(eng() >> 11) * 0x1.0p-53 - 0.5;
  }
  return cfg;
}

/// Finite-volume matrix realization of a crossed-product element.
/// Blocks are site-major: entry ((x,i),(y,j)) at (x*Q+i, y*Q+j).
struct CovariantOperator {
  Matrix mat;
  Geometry geometry;
  int Q = 1;
  /// Per-axis band width (max |q_j| with a nonzero block), when known at
  /// construction time.
  std::optional<std::vector<int>> band;

  int dim() const { return static_cast<int>(mat.rows()); }

  static CovariantOperator identity(const Geometry& g, int Q) {
    CovariantOperator op{Matrix::Identity(g.site_count() * Q, g.site_count() * Q), g, Q,
                         std::vector<int>(g.dim(), 0)};
    return op;
  }

  /// Elementary shift u_q (torus): block(x, x-q) = I_Q.
  static CovariantOperator shift(const Geometry& g, int Q, const std::vector<int>& q) {
    const int n = g.site_count() * Q;
    CovariantOperator op{Matrix::Zero(n, n), g, Q, std::nullopt};
    std::vector<int> b(g.dim());
    for (int j = 0; j < g.dim(); ++j) b[j] = std::abs(g.min_image(q[j], j));
    op.band = b;
    for (int x = 0; x < g.site_count(); ++x) {
      auto c = g.coord(x);
      for (int j = 0; j < g.dim(); ++j) c[j] -= q[j];
      const int y = g.index(c);
      if (y < 0) continue;
      op.mat.block(x * Q, y * Q, Q, Q) = Matrix::Identity(Q, Q);
    }
    return op;
  }
};

inline CovariantOperator build_hamiltonian(const HoppingModel& model, const Geometry& geometry,
                                           const DisorderConfig& disorder) {
  model.validate();
  if (model.d != geometry.dim()) throw std::invalid_argument("model/geometry dimension mismatch");
  if (!same_geometry(geometry, disorder.geometry))
    throw std::invalid_argument("disorder geometry does not match");
  if (geometry.kind() == GeometryKind::torus) {
    for (const auto& h : model.hoppings)
      for (int j = 0; j < model.d; ++j)
        if (2 * std::abs(h.q[j]) >= geometry.sizes()[j])
          throw std::invalid_argument("hopping range exceeds minimal-image bound on torus");
  }

  const int Q = model.Q;
  const int nsites = geometry.site_count();
  CovariantOperator H{Matrix::Zero(nsites * Q, nsites * Q), geometry, Q, std::nullopt};
  std::vector<int> band(model.d, 0);
  for (const auto& h : model.hoppings)
    for (int j = 0; j < model.d; ++j) band[j] = std::max(band[j], std::abs(h.q[j]));
  H.band = band;

  const bool on_torus = geometry.kind() == GeometryKind::torus;
  for (int x = 0; x < nsites; ++x) {
    const auto cx = geometry.coord(x);
    for (const auto& h : model.hoppings) {
      auto cy = cx;
      for (int j = 0; j < model.d; ++j) cy[j] -= h.q[j];
      const int y = geometry.index(cy);
      if (y < 0) continue;  // open boundary drops out-of-range targets
      bool onsite = true;
      for (int v : h.q) onsite = onsite && v == 0;
      // Bond-symmetric disorder sampling keeps H manifestly Hermitian for
      // off-diagonal couplings; reduces to W*omega_x on site.
      const double lam =
          onsite ? h.W * disorder.omega[x] : h.W * 0.5 * (disorder.omega[x] + disorder.omega[y]);
      H.mat.block(x * Q, y * Q, Q, Q) += (1.0 + lam) * h.A;
    }
  }
  (void)on_torus;
  return H;
}

/// Fermi projector with its gap certificate and the occupied eigenbasis.
struct SpectralProjector {
  CovariantOperator p;
  double fermi_level = 0.0;
  double gap = 0.0;
  Matrix occupied;  // orthonormal columns spanning ran(p)
  Eigen::VectorXd spectrum;
};

inline SpectralProjector fermi_projector(const CovariantOperator& h, double fermi_level,
                                         double gap_threshold = 1e-6) {
  if ((h.mat - h.mat.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("fermi_projector: input is not Hermitian");
  HermitianEig eig = hermitian_eig(h.mat);
  const int n = h.dim();
  int nocc = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (eig.values[i] <= fermi_level) nocc = i + 1;
    gap = std::min(gap, std::abs(eig.values[i] - fermi_level));
  }
  if (gap < gap_threshold) throw gap_closed_error(gap);

  SpectralProjector sp;
  sp.occupied = eig.vectors.leftCols(nocc);
  sp.p = CovariantOperator{sp.occupied * sp.occupied.adjoint(), h.geometry, h.Q, std::nullopt};
  sp.fermi_level = fermi_level;
  sp.gap = gap;
  sp.spectrum = std::move(eig.values);
  return sp;
}

// ---------------------------------------------------------------------------
// Built-in model library (test fixtures, verified by the momentum oracle).

namespace models {

inline Matrix pauli(int i) {
  Matrix m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Two-band 2D model with Bloch symbol
///   h(k) = sin k1 sx + sin k2 sy + (m + cos k1 + cos k2) sz,
/// topological for 0 < |m| < 2. Disorder (strength W) couples on-site.
inline HoppingModel chern2d(double m, double W = 0.0) {
  HoppingModel mod;
  mod.d = 2;
  mod.Q = 2;
  const Matrix sx = pauli(1), sy = pauli(2), sz = pauli(3);
  mod.hoppings.push_back({{0, 0}, m * sz, W});
  mod.hoppings.push_back({{1, 0}, 0.5 * (sz + iu * sx), 0.0});
  mod.hoppings.push_back({{-1, 0}, 0.5 * (sz - iu * sx), 0.0});
  mod.hoppings.push_back({{0, 1}, 0.5 * (sz + iu * sy), 0.0});
  mod.hoppings.push_back({{0, -1}, 0.5 * (sz - iu * sy), 0.0});
  return mod;
}

/// Strictly on-site two-band insulator; both Chern numbers vanish.
inline HoppingModel atomic2d(double W = 0.0) {
  HoppingModel mod;
  mod.d = 2;
  mod.Q = 2;
  mod.hoppings.push_back({{0, 0}, pauli(3), W});
  return mod;
}

/// Random-looking but gapped trivial model: atomic insulator plus weak
/// hoppings that do not close the gap.
inline HoppingModel trivial2d(double t, double W = 0.0) {
  HoppingModel mod;
  mod.d = 2;
  mod.Q = 2;
  const Matrix sz = pauli(3);
  mod.hoppings.push_back({{0, 0}, pauli(3), W});
  mod.hoppings.push_back({{1, 0}, t * sz, 0.0});
  mod.hoppings.push_back({{-1, 0}, t * sz, 0.0});
  mod.hoppings.push_back({{0, 1}, t * sz, 0.0});
  mod.hoppings.push_back({{0, -1}, t * sz, 0.0});
  return mod;
}

/// 3D stack of 2D Chern layers perpendicular to axis 3, with interlayer
/// hopping t3 (scalar, spin-diagonal).
inline HoppingModel stack3d(double m, double t3, double W = 0.0) {
  HoppingModel mod;
  mod.d = 3;
  mod.Q = 2;
  const Matrix sx = pauli(1), sy = pauli(2), sz = pauli(3), id = pauli(0);
  mod.hoppings.push_back({{0, 0, 0}, m * sz, W});
  mod.hoppings.push_back({{1, 0, 0}, 0.5 * (sz + iu * sx), 0.0});
  mod.hoppings.push_back({{-1, 0, 0}, 0.5 * (sz - iu * sx), 0.0});
  mod.hoppings.push_back({{0, 1, 0}, 0.5 * (sz + iu * sy), 0.0});
  mod.hoppings.push_back({{0, -1, 0}, 0.5 * (sz - iu * sy), 0.0});
  if (t3 != 0.0) {
    mod.hoppings.push_back({{0, 0, 1}, t3 * id, 0.0});
    mod.hoppings.push_back({{0, 0, -1}, t3 * id, 0.0});
  }
  return mod;
}

/// Restriction of a model to the first two axes (layer Hamiltonian).
inline HoppingModel layer_of(const HoppingModel& m3) {
  HoppingModel mod;
  mod.d = 2;
  mod.Q = m3.Q;
  for (const auto& h : m3.hoppings) {
    if (h.q.size() == 3 && h.q[2] != 0) continue;
    mod.hoppings.push_back({{h.q[0], h.q[1]}, h.A, h.W});
  }
  return mod;
}

}  // namespace models
}  // namespace ncg
