#pragma once

#include "ncg/dirac.hpp"
#include "ncg/fourier.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace ncg {

/// Outcome of a cocycle evaluation, with the residuals a caller needs to judge
/// convergence.
struct CocycleResult {
  cplx value = 0.0;
  enum class Route { local, direct } route = Route::local;
  int degree = 0;
  double imag_residual = 0.0;
  double x0_spread = 0.0;
  bool accuracy_warning = false;
};

namespace detail {

/// Visit all permutations of {0..n-1} with their signs.
template <class F>
void for_each_permutation(int n, F&& f) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    f(perm, inversions % 2 == 0 ? 1.0 : -1.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline cplx lambda_const(int n) {
  // -(2 pi i)^{n/2} / (n/2)!, the sign fixed so that the local route agrees
  // with the operator-trace route and the kernel count of the Dirac
  // compression (see lambda_tilde_const: Lambda = (-i)^n LambdaTilde).
  cplx num = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= n / 2; ++k) {
    num *= 2.0 * pi * iu;
    fact *= k;
  }
  return -num / fact;
}

inline cplx lambda_tilde_const(int n) {
  // -(2 pi)^{n/2} / (i^{n/2} (n/2)!)
  static const cplx ipow[4] = {1.0, iu, -1.0, -iu};
  double num = 1.0, fact = 1.0;
  for (int k = 1; k <= n / 2; ++k) {
    num *= 2.0 * pi;
    fact *= k;
  }
  return -num / (ipow[(n / 2) % 4] * fact);
}

}  // namespace detail

/// Antisymmetrized real-space cocycle
///   Lambda * sum_rho (-1)^rho T{ a_0 d_{rho_1} a_1 ... d_{rho_n} a_n }
/// over the directions listed in `axes` (degree = axes.size(), even).
/// With no axes given, directions 0..d-1 are used.
inline CocycleResult local_cocycle(const std::vector<CovariantOperator>& args,
                                   std::vector<int> axes = {}) {
  if (args.empty()) throw std::invalid_argument("local_cocycle: no arguments");
  const Geometry& g = args.front().geometry;
  if (axes.empty()) {
    axes.resize(g.dim());
    std::iota(axes.begin(), axes.end(), 0);
  }
  const int n = static_cast<int>(axes.size());
  if (n % 2 != 0) throw std::invalid_argument("local_cocycle: degree must be even");
  if (static_cast<int>(args.size()) != n + 1)
    throw std::invalid_argument("local_cocycle: need degree+1 arguments");

  // derivatives[i][j] = d_{axes[j]} a_{i+1}
  std::vector<std::vector<Matrix>> derivatives(n);
  for (int i = 0; i < n; ++i) {
    derivatives[i].reserve(n);
    for (int j = 0; j < n; ++j) derivatives[i].push_back(derivation(args[i + 1], axes[j]).mat);
  }

  cplx acc = 0.0;
  detail::for_each_permutation(n, [&](const std::vector<int>& perm, double sign) {
    Matrix prod = args[0].mat * derivatives[0][perm[0]];
    for (int i = 1; i < n; ++i) prod = (prod * derivatives[i][perm[i]]).eval();
    acc += sign * prod.trace();
  });
  acc *= detail::lambda_const(n) / static_cast<double>(g.site_count());

  CocycleResult res;
  res.value = acc;
  res.route = CocycleResult::Route::local;
  res.degree = n;
  res.imag_residual = std::abs(acc.imag());
  return res;
}

/// Midpoint-grid shifts over [0,1)^d with coordinates in {1/6, 1/2, 5/6}
/// (per-axis points configurable); never touches integer coordinates.
inline std::vector<std::vector<double>> midpoint_shifts(int d, int per_axis = 3) {
  if (per_axis < 1) throw std::invalid_argument("midpoint_shifts: bad grid");
  std::vector<std::vector<double>> shifts;
  std::vector<int> idx(d, 0);
  for (;;) {
    std::vector<double> s(d);
    for (int j = 0; j < d; ++j) s[j] = (2.0 * idx[j] + 1.0) / (2.0 * per_axis);
    shifts.push_back(std::move(s));
    int j = d - 1;
    while (j >= 0 && ++idx[j] == per_axis) idx[j--] = 0;
    if (j < 0) break;
  }
  return shifts;
}

/// Operator-trace route on the box:
///   (1/2) avg_{x0} That{ gamma F_{x0} prod_i [F_{x0}, lift(a_i)] },
/// with the trace restricted to the interior window.
inline CocycleResult direct_cocycle(const std::vector<CovariantOperator>& args,
                                    const CliffordRep& clifford,
                                    const std::vector<std::vector<double>>& shifts,
                                    int interior_radius, double spread_tol = 0.05) {
  if (args.empty() || shifts.empty())
    throw std::invalid_argument("direct_cocycle: empty arguments or shifts");
  const Geometry& g = args.front().geometry;
  const int Q = args.front().Q;

  std::vector<ExtendedOperator> lifts;
  lifts.reserve(args.size());
  for (const auto& a : args) lifts.push_back(lift(a, clifford));
  const Matrix grading = grading_matrix(clifford, g, Q);

  std::vector<cplx> samples;
  samples.reserve(shifts.size());
  for (const auto& x0 : shifts) {
    DiracPhase ph = dirac_phase(g, clifford, x0, Q);
    // all-equal arguments share one commutator
    bool all_same = true;
    for (size_t i = 1; i < args.size() && all_same; ++i)
      all_same = (args[i].mat - args[0].mat).cwiseAbs().maxCoeff() == 0.0;
    Matrix prod;
    if (all_same) {
      Matrix C = ph.F * lifts[0].mat - lifts[0].mat * ph.F;
      prod = C;
      for (size_t i = 1; i < args.size(); ++i) prod = (prod * C).eval();
    } else {
      prod = ph.F * lifts[0].mat - lifts[0].mat * ph.F;
      for (size_t i = 1; i < args.size(); ++i) {
        const Matrix C = ph.F * lifts[i].mat - lifts[i].mat * ph.F;
        prod = (prod * C).eval();
      }
    }
    ExtendedOperator term{grading * ph.F * prod, g, Q, clifford.dim};
    samples.push_back(0.5 * trace_That(term, interior_radius));
  }

  cplx mean = std::accumulate(samples.begin(), samples.end(), cplx(0.0)) /
              static_cast<double>(samples.size());
  double spread = 0.0;
  for (cplx s : samples) spread = std::max(spread, std::abs(s - mean));

  CocycleResult res;
  res.value = mean;
  res.route = CocycleResult::Route::direct;
  res.degree = static_cast<int>(args.size()) - 1;
  res.imag_residual = std::abs(mean.imag());
  res.x0_spread = spread;
  res.accuracy_warning = spread > spread_tol;
  return res;
}

/// Both sides of the integral identity
///   int_{R^d} dx Tr_gamma{ gamma_0 prod_i gamma.((x+x_i)^ - (x+x_{i+1})^) }
///     = LambdaTilde_d sum_rho (-1)^rho prod_i (x_i)_{rho_i},
/// with x_{d+1} = 0. The integral is realized as the lattice sum over
/// Z^d within |x| <= cutoff, averaged over the unit-cell shifts (an exact
/// Riemann sum for the integral as the cutoff grows).
struct IdentityCheck {
  cplx lhs = 0.0;
  cplx rhs = 0.0;
};

inline IdentityCheck central_identity_check(int d, const std::vector<std::vector<int>>& points,
                                            double cutoff,
                                            const std::vector<std::vector<double>>& shifts) {
  if (d % 2 != 0) throw std::invalid_argument("central_identity_check: d must be even");
  if (static_cast<int>(points.size()) != d)
    throw std::invalid_argument("central_identity_check: need d points");
  const CliffordRep cl = build_clifford(d);

  // rhs: closed form
  cplx det = 0.0;
  detail::for_each_permutation(d, [&](const std::vector<int>& perm, double sign) {
    double prod = 1.0;
    for (int i = 0; i < d; ++i) prod *= points[i][perm[i]];
    det += sign * prod;
  });
  IdentityCheck out;
  out.rhs = detail::lambda_tilde_const(d) * det;

  // lhs: truncated numeric integral
  auto unit = [&](const std::vector<double>& v) {
    double r2 = 0;
    for (double c : v) r2 += c * c;
    const double r = std::sqrt(r2);
    std::vector<double> u(v);
    for (double& c : u) c /= r;
    return u;
  };

  std::vector<std::vector<int>> pts(points);
  pts.push_back(std::vector<int>(d, 0));  // x_{d+1} = 0

  cplx acc = 0.0;
  const int rc = static_cast<int>(std::ceil(cutoff));
  std::vector<int> x(d, -rc);
  for (;;) {
    double r2 = 0;
    for (int c : x) r2 += static_cast<double>(c) * c;
    if (r2 <= cutoff * cutoff) {
      for (const auto& x0 : shifts) {
        Matrix prod = cl.grading;
        for (int i = 0; i < d; ++i) {
          std::vector<double> a(d), b(d);
          for (int j = 0; j < d; ++j) {
            a[j] = x[j] + x0[j] + pts[i][j];
            b[j] = x[j] + x0[j] + pts[i + 1][j];
          }
          const auto ua = unit(a), ub = unit(b);
          Matrix gam = Matrix::Zero(cl.dim, cl.dim);
          for (int j = 0; j < d; ++j) gam += (ua[j] - ub[j]) * cl.generators[j];
          prod = (prod * gam).eval();
        }
        acc += prod.trace();
      }
    }
    int j = d - 1;
    while (j >= 0 && ++x[j] > rc) x[j--] = -rc;
    if (j < 0) break;
  }
  out.lhs = acc / static_cast<double>(shifts.size());
  return out;
}

/// Weak invariant of a 3D torus projector: the degree-2 cocycle in the
/// in-plane directions, sigma_12 = 2 pi i sum_{rho in S_2} (-1)^rho
/// T{ p d_{rho_1} p d_{rho_2} p }.
inline CocycleResult weak_invariant_sigma12(const SpectralProjector& p) {
  if (p.p.geometry.dim() != 3)
    throw std::invalid_argument("weak_invariant_sigma12: 3D torus required");
  return local_cocycle({p.p, p.p, p.p}, {0, 1});
}

}  // namespace ncg
