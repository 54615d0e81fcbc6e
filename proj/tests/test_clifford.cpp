#include "ncg/clifford.hpp"

#include <doctest.h>

#include <random>

using namespace ncg;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix random_matrix(int n, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(u(eng), u(eng));
  return m;
}

}  // namespace

TEST_CASE("generator relations hold exactly for d = 2, 4, 6") {
  for (int d : {2, 4, 6}) {
    CAPTURE(d);
    const CliffordRep rep = build_clifford(d);
    REQUIRE(rep.dim == (1 << (d / 2)));
    REQUIRE(static_cast<int>(rep.generators.size()) == d);
    const Matrix id = Matrix::Identity(rep.dim, rep.dim);
    for (int i = 0; i < d; ++i) {
      const Matrix& gi = rep.generators[i];
      CHECK(max_abs(gi - gi.adjoint()) == 0.0);       // Hermitian
      CHECK(max_abs(gi * gi.adjoint() - id) == 0.0);  // unitary
      for (int j = 0; j < d; ++j) {
        const Matrix anti = gi * rep.generators[j] + rep.generators[j] * gi;
        if (i == j)
          CHECK(max_abs(anti - 2.0 * id) == 0.0);
        else
          CHECK(max_abs(anti) == 0.0);
      }
    }
  }
}

TEST_CASE("grading: Hermitian involution anticommuting with every generator") {
  for (int d : {2, 4}) {
    CAPTURE(d);
    const CliffordRep rep = build_clifford(d);
    const Matrix& g0 = rep.grading;
    const Matrix id = Matrix::Identity(rep.dim, rep.dim);
    CHECK(max_abs(g0 - g0.adjoint()) == 0.0);
    CHECK(max_abs(g0 * g0 - id) == 0.0);
    for (const Matrix& gi : rep.generators) CHECK(max_abs(g0 * gi + gi * g0) == 0.0);
  }
}

TEST_CASE("d = 2 uses the standard pair and a diagonal grading") {
  const CliffordRep rep = build_clifford(2);
  Matrix sx(2, 2), sy(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  CHECK(max_abs(rep.generators[0] - sx) == 0.0);
  CHECK(max_abs(rep.generators[1] - sy) == 0.0);
  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  CHECK(max_abs(rep.grading - sz) == 0.0);
}

TEST_CASE("invalid dimension is rejected") {
  CHECK_THROWS_AS(build_clifford(3), std::invalid_argument);
  CHECK_THROWS_AS(build_clifford(0), std::invalid_argument);
  CHECK_THROWS_AS(build_clifford(-2), std::invalid_argument);
}

TEST_CASE("normalized trace: identity, generators, gamma_0 gamma_1 gamma_2") {
  const CliffordRep rep = build_clifford(2);
  const Matrix id = Matrix::Identity(rep.dim, rep.dim);
  CHECK(clifford_trace(rep, id) == cplx(1.0, 0.0));
  CHECK(std::abs(clifford_trace(rep, rep.generators[0])) == 0.0);
  // gamma_0 = -i g1 g2  =>  Tr{gamma_0 g1 g2} = -i Tr{(g1 g2)^2} = i
  const cplx t = clifford_trace(rep, rep.grading * rep.generators[0] * rep.generators[1]);
  CHECK(std::abs(t - iu) < 1e-15);
}

TEST_CASE("trace cyclicity on random matrices") {
  std::mt19937_64 eng(7);
  for (int d : {2, 4}) {
    const CliffordRep rep = build_clifford(d);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = random_matrix(rep.dim, eng);
      const Matrix b = random_matrix(rep.dim, eng);
      CHECK(std::abs(clifford_trace(rep, a * b) - clifford_trace(rep, b * a)) < 1e-12);
    }
  }
}

TEST_CASE("odd products of generators are traceless") {
  for (int d : {2, 4}) {
    const CliffordRep rep = build_clifford(d);
    std::mt19937_64 eng(11);
    std::uniform_int_distribution<int> pick(0, d - 1);
    for (int len : {1, 3, 5}) {
      for (int trial = 0; trial < 10; ++trial) {
        Matrix prod = Matrix::Identity(rep.dim, rep.dim);
        for (int i = 0; i < len; ++i) prod = prod * rep.generators[pick(eng)];
        CHECK(std::abs(clifford_trace(rep, prod)) < 1e-15);
      }
    }
  }
}

TEST_CASE("trace rejects dimension mismatch") {
  const CliffordRep rep = build_clifford(4);
  CHECK_THROWS_AS(clifford_trace(rep, Matrix::Identity(2, 2)), std::invalid_argument);
}
