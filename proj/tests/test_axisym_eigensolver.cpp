#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "horizon_spectra/axisym_eigensolver.hpp"
#include "horizon_spectra/horizon_geometry.hpp"
#include "horizon_spectra/mots_spectrum.hpp"
#include "horizon_spectra/tridiagonal.hpp"
#include "oracles.hpp"

namespace hs = horizon_spectra;

namespace {

// Dense symmetric matrix eigenvalues by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

struct ConicalPoles {
  double A(double) const { return 1.0; }
  double B(double th) const { return 2.0 * std::sin(th) * std::sin(th); }
};

}  // namespace

TEST(Tridiagonal, SturmBisectionMatchesJacobi) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  hs::SymmetricTridiagonal t;
  const std::size_t n = 40;
  for (std::size_t i = 0; i < n; ++i) t.diag.push_back(3.0 * u(rng));
  for (std::size_t i = 0; i + 1 < n; ++i) t.off.push_back(u(rng));
  std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dense[i][i] = t.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) dense[i][i + 1] = dense[i + 1][i] = t.off[i];
  const auto ref = jacobi_eigenvalues(dense);
  const auto got = hs::lowest_eigenvalues(t, n);
  for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(got[k], ref[k], 1e-12) << k;
  EXPECT_EQ(hs::count_below(t, ref[10] + 1e-9), 11u);
}

TEST(Tridiagonal, InverseIterationGivesUnitEigenvector) {
  hs::SymmetricTridiagonal t;
  const std::size_t n = 50;
  // 1D Dirichlet Laplacian: eigenvalues 2 - 2 cos(k pi / (n + 1)).
  t.diag.assign(n, 2.0);
  t.off.assign(n - 1, -1.0);
  for (std::size_t k : {0u, 3u, 17u}) {
    const double exact = 2.0 - 2.0 * std::cos((k + 1.0) * std::numbers::pi / (n + 1.0));
    const double lam = hs::kth_eigenvalue(t, k);
    EXPECT_NEAR(lam, exact, 1e-13);
    const auto v = hs::inverse_iteration(t, lam);
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    EXPECT_NEAR(norm, 1.0, 1e-12);
    std::vector<double> tv(n);
    t.multiply(v, tv);
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(tv[i] - lam * v[i]));
    EXPECT_LT(resid, 1e-10);
    EXPECT_GT(*std::max_element(v.begin(), v.end()), 0.0);
  }
}

TEST(DiscretizedOperator, SymmetricAndPositiveWeights) {
  const hs::CrossSectionMetric g(0.9, 0.05, 3.0);
  const auto op = hs::assemble(g, hs::constant_potential(-1.0), 1, 64);
  EXPECT_EQ(op.max_asymmetry(), 0.0);
  for (std::size_t i = 0; i + 1 < 64; ++i) EXPECT_EQ(op.stiffness(i, i + 1), op.stiffness(i + 1, i));
  EXPECT_EQ(op.stiffness(0, 5), 0.0);
  for (double w : op.weights()) EXPECT_GT(w, 0.0);
  EXPECT_GT(op.theta().front(), 0.0);
  EXPECT_LT(op.theta().back(), std::numbers::pi);
}

TEST(DiscretizedOperator, RejectsBadInput) {
  const hs::CrossSectionMetric g(1.0, 0.0, 0.0);
  EXPECT_THROW(hs::assemble(g, hs::constant_potential(0.0), 0, 8), hs::Error);
  EXPECT_THROW(hs::assemble(g, hs::constant_potential(0.0), -1, 32), hs::Error);
  struct Broken {
    double A(double) const { return -1.0; }
    double B(double) const { return 1.0; }
  };
  try {
    hs::assemble(Broken{}, hs::constant_potential(0.0), 0, 32);
    FAIL();
  } catch (const hs::Error& e) {
    EXPECT_EQ(e.code(), hs::ErrorCode::kBadMetric);
  }
}

TEST(AxisymmetricSolver, RoundSphereSpectrum) {
  const auto g = hs::CrossSectionMetric::round(1.0);
  const auto spec = hs::solve_axisymmetric(g, hs::constant_potential(0.0), 256, 4, 5);
  const auto ref = oracle::round_sphere_spectrum(1.0, 4);
  const auto got = spec.expanded(true);
  ASSERT_GE(got.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-6) << i;
  EXPECT_GT(spec.complete_below, 19.99);  // raw grid value of l = 4
  // Multiplicity 2k + 1 assembled from the m = 0 eigenvalue and pairs +-m.
  int total = 0;
  for (const auto& e : spec.merged) {
    if (std::abs(e.extrapolated - 6.0) < 1e-4) total += e.multiplicity;
  }
  EXPECT_EQ(total, 5);
}

TEST(AxisymmetricSolver, SecondOrderConvergence) {
  const auto g = hs::CrossSectionMetric::round(1.0);
  const auto coarse = hs::solve(hs::assemble(g, hs::constant_potential(0.0), 1, 128), 3);
  // Mode m = 1 carries l = 1, 2, 3.
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = (k + 1.0) * (k + 2.0);
    const double e1 = std::abs(coarse.values[k] - exact);
    const double e2 = std::abs(coarse.fine_values[k] - exact);
    EXPECT_GT(e1 / e2, 3.5) << k;
    EXPECT_LT(e1 / e2, 4.5) << k;
    EXPECT_LT(std::abs(coarse.extrapolated[k] - exact), 0.05 * e1);
    EXPECT_NEAR(coarse.error_estimate[k], e1, 0.1 * e1);
  }
}

TEST(AxisymmetricSolver, ScalesWithRadiusAndShiftsWithPotential) {
  const auto g = hs::CrossSectionMetric::round(0.5);
  const auto spec = hs::solve_axisymmetric(g, hs::constant_potential(-3.0), 128, 1, 2);
  const auto got = spec.expanded(true);
  EXPECT_NEAR(got[0], -3.0, 1e-8);
  for (int i = 1; i <= 3; ++i) EXPECT_NEAR(got[i], 8.0 - 3.0, 1e-6);
}

TEST(AxisymmetricSolver, MatchesClosedFormOperator) {
  const double rc = oracle::fixture::kRoots[3];
  const auto g = hs::CrossSectionMetric::round(rc);
  const auto v = hs::constant_potential(hs::static_potential(rc, 3.0, 0.1));
  const auto spec = hs::solve_axisymmetric(g, v, 512, 1, 2);
  const auto got = spec.expanded(true);
  EXPECT_NEAR(got[0], oracle::fixture::kLambda1, 1e-8);
  EXPECT_NEAR(got[1], oracle::fixture::kLambda2, 1e-8);
  EXPECT_EQ(hs::numeric_index(g, v, 512), 1);
}

TEST(AxisymmetricSolver, NonRoundMetricMatchesDenseSolve) {
  // A = 1, B = 2 sin^2 has conical poles but the m = 0 spectrum is still
  // l(l+1). Checks the tridiagonal path against a dense Jacobi solve.
  const auto op = hs::assemble(ConicalPoles{}, hs::constant_potential(0.0), 0, 32);
  std::vector<std::vector<double>> dense(32, std::vector<double>(32, 0.0));
  const auto w = op.weights();
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j) dense[i][j] = op.stiffness(i, j) / std::sqrt(w[i] * w[j]);
  const auto ref = jacobi_eigenvalues(dense);
  const auto got = hs::grid_eigenvalues(op, 4);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got.refined[k], ref[k], 1e-10) << k;
  EXPECT_NEAR(got.refined[1], 2.0, 0.02);
}

TEST(AxisymmetricSolver, JobsDoNotChangeResults) {
  const hs::CrossSectionMetric g(0.887, 0.05, 3.0);
  const auto v = hs::constant_potential(-1.5);
  const auto a = hs::solve_axisymmetric(g, v, 128, 2, 3, 1);
  const auto b = hs::solve_axisymmetric(g, v, 128, 2, 3, 3);
  ASSERT_EQ(a.merged.size(), b.merged.size());
  for (std::size_t i = 0; i < a.merged.size(); ++i) {
    EXPECT_EQ(a.merged[i].value, b.merged[i].value);
    EXPECT_EQ(a.merged[i].extrapolated, b.merged[i].extrapolated);
  }
}

TEST(AxisymmetricSolver, CountLimits) {
  const auto op = hs::assemble(hs::CrossSectionMetric::round(1.0), hs::constant_potential(0.0), 0, 32);
  EXPECT_THROW(hs::solve(op, 0), hs::Error);
  EXPECT_THROW(hs::solve(op, 9), hs::Error);
}
