#include "ncg/lattice.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace ncg;

namespace {
double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("geometry: site enumeration is a bijection") {
  for (const Geometry& g : {Geometry::torus({4, 6}), Geometry::box(2, 3), Geometry::torus({5})}) {
    std::set<std::vector<int>> seen;
    for (int i = 0; i < g.site_count(); ++i) {
      const auto c = g.coord(i);
      CHECK(g.index(c) == i);
      seen.insert(c);
    }
    CHECK(static_cast<int>(seen.size()) == g.site_count());
  }
}

TEST_CASE("minimal image lands in (-L/2, L/2]") {
  const Geometry g = Geometry::torus({6, 7});
  for (int t = -20; t <= 20; ++t) {
    CHECK(g.min_image(t, 0) > -3);
    CHECK(g.min_image(t, 0) <= 3);
    CHECK((g.min_image(t, 0) - t) % 6 == 0);
    CHECK(g.min_image(t, 1) >= -3);
    CHECK(g.min_image(t, 1) <= 3);
  }
}

TEST_CASE("disorder sampling: deterministic, in range, mean near zero") {
  const Geometry g = Geometry::torus({100, 100});
  const auto a = sample_disorder(g, 12345);
  const auto b = sample_disorder(g, 12345);
  CHECK(a.omega == b.omega);
  const auto c = sample_disorder(g, 54321);
  CHECK(a.omega != c.omega);

  double mean = 0;
  for (double w : a.omega) {
    CHECK(w >= -0.5);
    CHECK(w <= 0.5);
    mean += w;
  }
  mean /= a.omega.size();
  // std error of the mean of 1e4 uniform[-1/2,1/2] samples
  const double se = (1.0 / std::sqrt(12.0)) / 100.0;
  CHECK(std::abs(mean) < 3 * se);
}

TEST_CASE("on-site-only model gives m*I") {
  HoppingModel mod;
  mod.d = 2;
  mod.Q = 1;
  Matrix a(1, 1);
  a << 2.5;
  mod.hoppings.push_back({{0, 0}, a, 0.0});
  const Geometry g = Geometry::torus({4, 4});
  const auto H = build_hamiltonian(mod, g, sample_disorder(g, 0));
  CHECK(max_abs(H.mat - 2.5 * Matrix::Identity(16, 16)) == 0.0);
}

TEST_CASE("1D chain spectrum matches the circulant closed form") {
  const int L = 16;
  HoppingModel mod;
  mod.d = 1;
  mod.Q = 1;
  Matrix one(1, 1);
  one << 1.0;
  mod.hoppings.push_back({{1}, one, 0.0});
  mod.hoppings.push_back({{-1}, one, 0.0});
  const Geometry g = Geometry::torus({L});
  const auto H = build_hamiltonian(mod, g, sample_disorder(g, 0));
  HermitianEig eig = hermitian_eig(H.mat);

  std::vector<double> expected;
  for (int k = 0; k < L; ++k) expected.push_back(2 * std::cos(2 * pi * k / L));
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < L; ++i) CHECK(std::abs(eig.values[i] - expected[i]) < 1e-12);
}

TEST_CASE("Hamiltonian is exactly Hermitian, also with disorder on bonds") {
  HoppingModel mod = models::chern2d(1.0, 0.8);
  mod.hoppings[1].W = 0.3;  // bond disorder on +e1
  mod.hoppings[2].W = 0.3;  // and its partner
  const Geometry g = Geometry::torus({6, 6});
  const auto H = build_hamiltonian(mod, g, sample_disorder(g, 99));
  CHECK(max_abs(H.mat - H.mat.adjoint()) == 0.0);
}

TEST_CASE("non-Hermitian model spec is rejected") {
  HoppingModel mod;
  mod.d = 2;
  mod.Q = 1;
  Matrix one(1, 1);
  one << 1.0;
  mod.hoppings.push_back({{1, 0}, one, 0.0});  // missing A_{-q}
  const Geometry g = Geometry::torus({6, 6});
  CHECK_THROWS_AS(build_hamiltonian(mod, g, sample_disorder(g, 0)), std::invalid_argument);
}

TEST_CASE("hopping range beyond the minimal-image bound is rejected") {
  HoppingModel mod;
  mod.d = 1;
  mod.Q = 1;
  Matrix one(1, 1);
  one << 1.0;
  mod.hoppings.push_back({{2}, one, 0.0});
  mod.hoppings.push_back({{-2}, one, 0.0});
  const Geometry g = Geometry::torus({4});
  CHECK_THROWS_AS(build_hamiltonian(mod, g, sample_disorder(g, 0)), std::invalid_argument);
}

TEST_CASE("translation covariance on the torus") {
  // shifting the disorder and conjugating by the lattice shift reproduces H
  const Geometry g = Geometry::torus({5, 5});
  HoppingModel mod = models::chern2d(1.0, 1.0);
  auto dis = sample_disorder(g, 31);

  const std::vector<int> t = {2, 1};
  DisorderConfig shifted{g, dis.seed, std::vector<double>(g.site_count())};
  for (int x = 0; x < g.site_count(); ++x) {
    auto c = g.coord(x);
    for (int j = 0; j < 2; ++j) c[j] += t[j];
    shifted.omega[x] = dis.omega[g.index(c)];
  }

  const auto H = build_hamiltonian(mod, g, dis);
  const auto Hs = build_hamiltonian(mod, g, shifted);
  const auto S = CovariantOperator::shift(g, mod.Q, t);
  CHECK(max_abs(S.mat.adjoint() * H.mat * S.mat - Hs.mat) < 1e-14);
}

TEST_CASE("fermi projector on a diagonal model") {
  HoppingModel mod;
  mod.d = 1;
  mod.Q = 2;
  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  mod.hoppings.push_back({{0}, sz, 0.0});
  const Geometry g = Geometry::torus({8});
  const auto H = build_hamiltonian(mod, g, sample_disorder(g, 0));

  SUBCASE("half filling picks the -1 eigenspace") {
    const auto sp = fermi_projector(H, 0.0);
    CHECK(std::abs(sp.p.mat.trace().real() - 8.0) < 1e-12);
    CHECK(std::abs(sp.gap - 1.0) < 1e-12);
    CHECK(max_abs(sp.p.mat * H.mat - (-1.0) * sp.p.mat) < 1e-12);
  }
  SUBCASE("fermi level below the spectrum gives p = 0") {
    const auto sp = fermi_projector(H, -2.0);
    CHECK(max_abs(sp.p.mat) == 0.0);
  }
  SUBCASE("fermi level on an eigenvalue is a closed gap") {
    CHECK_THROWS_AS(fermi_projector(H, 1.0), gap_closed_error);
  }
}

TEST_CASE("fermi projector invariants on the disordered Chern model") {
  const Geometry g = Geometry::torus({8, 8});
  const auto H = build_hamiltonian(models::chern2d(1.0, 0.5), g, sample_disorder(g, 5));
  const auto sp = fermi_projector(H, 0.0);
  const Matrix& p = sp.p.mat;
  CHECK(max_abs(p * p - p) < 1e-10);
  CHECK(max_abs(p - p.adjoint()) < 1e-12);
  CHECK(max_abs(p * H.mat - H.mat * p) < 1e-10);
  CHECK(sp.gap > 0);
}

TEST_CASE("clean Chern model at half filling occupies one band") {
  const Geometry g = Geometry::torus({10, 10});
  const auto H = build_hamiltonian(models::chern2d(1.0), g, sample_disorder(g, 0));
  const auto sp = fermi_projector(H, 0.0);
  CHECK(std::abs(sp.p.mat.trace().real() - g.site_count()) < 1e-9);
}
