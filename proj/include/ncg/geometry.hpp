#pragma once

#include "ncg/common.hpp"

#include <numeric>
#include <vector>

namespace ncg {

enum class GeometryKind { torus, box };

/// Finite site set with a fixed lexicographic site <-> coordinate bijection.
/// Torus sites live in [0,L_j), box sites in [-R,R]^d with open boundary.
class Geometry {
 public:
  static Geometry torus(std::vector<int> sizes) {
    Geometry g;
    g.kind_ = GeometryKind::torus;
    g.d_ = static_cast<int>(sizes.size());
    g.L_ = std::move(sizes);
    for (int l : g.L_)
      if (l < 1) throw std::invalid_argument("torus size must be >= 1");
    g.lo_.assign(g.d_, 0);
    g.extent_ = g.L_;
    g.init();
    return g;
  }

  static Geometry box(int d, int radius) {
    if (d < 1 || radius < 0) throw std::invalid_argument("bad box geometry");
    Geometry g;
    g.kind_ = GeometryKind::box;
    g.d_ = d;
    g.R_ = radius;
    g.lo_.assign(d, -radius);
    g.extent_.assign(d, 2 * radius + 1);
    g.init();
    return g;
  }

  GeometryKind kind() const { return kind_; }
  int dim() const { return d_; }
  int radius() const { return R_; }
  const std::vector<int>& sizes() const { return L_; }
  int site_count() const { return nsites_; }

  std::vector<int> coord(int site) const {
    std::vector<int> c(d_);
    for (int j = d_ - 1; j >= 0; --j) {
      c[j] = lo_[j] + site % extent_[j];
      site /= extent_[j];
    }
    return c;
  }

  /// Site index, or -1 when the coordinate falls outside an open box.
  /// Torus coordinates are wrapped.
  int index(const std::vector<int>& c) const {
    int idx = 0;
    for (int j = 0; j < d_; ++j) {
      int v = c[j] - lo_[j];
      if (kind_ == GeometryKind::torus) {
        v %= extent_[j];
        if (v < 0) v += extent_[j];
      } else if (v < 0 || v >= extent_[j]) {
        return -1;
      }
      idx = idx * extent_[j] + v;
    }
    return idx;
  }

  /// Minimal-image representative of a coordinate difference along one axis,
  /// in (-L/2, L/2].
  int min_image(int t, int axis) const {
    if (kind_ != GeometryKind::torus) return t;
    const int l = L_[axis];
    int m = t % l;
    if (m < 0) m += l;
    if (2 * m > l) m -= l;
    return m;
  }

  std::vector<int> min_image(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> q(d_);
    for (int j = 0; j < d_; ++j) q[j] = min_image(a[j] - b[j], j);
    return q;
  }

 private:
  void init() {
    nsites_ = 1;
    for (int e : extent_) nsites_ *= e;
  }

  GeometryKind kind_ = GeometryKind::torus;
  int d_ = 0;
  int R_ = 0;
  int nsites_ = 0;
  std::vector<int> L_, lo_, extent_;
};

inline bool same_geometry(const Geometry& a, const Geometry& b) {
  return a.kind() == b.kind() && a.dim() == b.dim() && a.sizes() == b.sizes() &&
         a.radius() == b.radius();
}

}  // namespace ncg
