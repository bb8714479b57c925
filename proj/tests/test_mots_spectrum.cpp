#include <gtest/gtest.h>

#include <random>

#include "horizon_spectra/horizon_roots.hpp"
#include "horizon_spectra/mots_spectrum.hpp"
#include "oracles.hpp"

namespace hs = horizon_spectra;
namespace fx = oracle::fixture;

TEST(LsEigenvalue, TrivialCases) {
  EXPECT_DOUBLE_EQ(hs::ls_eigenvalue(1.0, 1.0, 0.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(hs::ls_eigenvalue(1.0, 1.0, 0.0, 1), 2.0);
}

TEST(LsEigenvalue, ChargedFixture) {
  const double rc = fx::kRoots[3];
  EXPECT_LE(oracle::rel_err(hs::ls_eigenvalue(rc, 3.0, 0.1, 0), fx::kLambda1), 1e-13);
  EXPECT_LE(oracle::rel_err(hs::ls_eigenvalue(rc, 3.0, 0.1, 1), fx::kLambda2), 1e-13);
  EXPECT_LE(oracle::rel_err(hs::ls_eigenvalue(rc, 3.0, 0.1, 2), fx::kLambda3), 1e-13);
}

TEST(IndexAndFlags, CosmologicalHorizonHasIndexOne) {
  const auto set = hs::isolate_roots(hs::Parameters{3.0, 0.1, 0.1, 0.0});
  const auto rep = hs::index_and_flags(set.r_c(), 3.0, 0.1);
  EXPECT_LT(rep.lambda1, 0.0);
  EXPECT_GT(rep.lambda2, 0.0);
  EXPECT_EQ(rep.index, 1);
  EXPECT_FALSE(rep.stable_symmetrized);
  EXPECT_TRUE(rep.unstable_full);
  EXPECT_FALSE(rep.degenerate);
}

TEST(IndexAndFlags, SpacingAndMultiplicity) {
  const double r0 = 0.3;
  const auto rep = hs::index_and_flags(r0, 3.0, 0.1, 6);
  ASSERT_GE(rep.modes.size(), 6u);
  for (std::size_t k = 0; k + 1 < rep.modes.size(); ++k) {
    EXPECT_EQ(rep.modes[k].k, static_cast<int>(k));
    EXPECT_EQ(rep.modes[k].multiplicity, 2 * static_cast<int>(k) + 1);
    EXPECT_NEAR(rep.modes[k + 1].value - rep.modes[k].value, (2.0 * k + 2.0) / (r0 * r0), 1e-11);
  }
}

TEST(IndexAndFlags, InsideURegionIsStable) {
  const auto reg = hs::sign_regions(3.0, 0.1);
  const double r0 = std::sqrt(0.5 * (reg.u_lower + reg.u_upper));
  const auto rep = hs::index_and_flags(r0, 3.0, 0.1);
  EXPECT_GT(rep.lambda1, 0.0);
  EXPECT_EQ(rep.index, 0);
  EXPECT_TRUE(rep.stable_symmetrized);
  EXPECT_FALSE(rep.unstable_full);
}

TEST(IndexAndFlags, IndexCountsMultiplicity) {
  // r0 = 1, Lambda = 3, Q = 0.1: lambda = -2.01, -0.01, 3.99 -> index 1 + 3.
  const auto rep = hs::index_and_flags(1.0, 3.0, 0.1, 4);
  ASSERT_EQ(rep.modes.size(), 4u);
  EXPECT_NEAR(rep.modes[0].value, -2.01, 1e-14);
  EXPECT_NEAR(rep.modes[1].value, -0.01, 1e-14);
  EXPECT_NEAR(rep.modes[2].value, 3.99, 1e-14);
  EXPECT_NEAR(rep.modes[3].value, 9.99, 1e-14);
  EXPECT_EQ(rep.index, 4);
}

TEST(IndexAndFlags, ModeCapAndBadInput) {
  // Huge Lambda keeps every listed mode negative.
  EXPECT_THROW(hs::index_and_flags(1.0, 1e6, 0.0), hs::Error);
  EXPECT_THROW(hs::index_and_flags(0.0, 3.0, 0.0), hs::Error);
  EXPECT_THROW(hs::index_and_flags(std::nan(""), 3.0, 0.0), hs::Error);
}

TEST(SignRegions, NestingAndSignTables) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double lambda = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double q = std::sqrt(0.25 * u(rng) / lambda);
    const auto reg = hs::sign_regions(lambda, q);
    ASSERT_LE(reg.v_lower, reg.u_lower);
    ASSERT_LE(reg.u_upper, reg.v_upper);
    ASSERT_LT(reg.interval_lower(), reg.interval_upper());
    const double x = 2.0 * reg.v_upper * u(rng) + 1e-9 * reg.v_upper;
    const double r0 = std::sqrt(x);
    // Direct evaluation of the closed-form spectrum.
    const double l1 = 1.0 / x - lambda - q * q / (x * x);
    const double l2 = 3.0 / x - lambda - q * q / (x * x);
    const double tol = 1e-9 * std::max(1.0, 1.0 / (x * x));
    if (std::abs(l1) > tol) {
      EXPECT_EQ(l1 < 0.0, x < reg.u_lower || x > reg.u_upper);
      EXPECT_EQ(hs::ls_eigenvalue(r0, lambda, q, 0) < 0.0, l1 < 0.0);
    }
    if (std::abs(l2) > tol) {
      EXPECT_EQ(l2 < 0.0, x < reg.v_lower || x > reg.v_upper);
      EXPECT_EQ(hs::ls_eigenvalue(r0, lambda, q, 1) < 0.0, l2 < 0.0);
    }
  }
}

TEST(SignRegions, PolynomialsVanishAtRoots) {
  const auto reg = hs::sign_regions(3.0, 0.1);
  EXPECT_NEAR(hs::u_polynomial(reg.u_lower, 3.0, 0.1), 0.0, 1e-15);
  EXPECT_NEAR(hs::u_polynomial(reg.u_upper, 3.0, 0.1), 0.0, 1e-15);
  EXPECT_NEAR(hs::v_polynomial(reg.v_lower, 3.0, 0.1), 0.0, 1e-15);
  EXPECT_NEAR(hs::v_polynomial(reg.v_upper, 3.0, 0.1), 0.0, 1e-15);
  const double rc = fx::kRoots[3];
  EXPECT_GT(rc, reg.interval_lower());
  EXPECT_LT(rc, reg.interval_upper());
  EXPECT_THROW(hs::sign_regions(3.0, 0.3), hs::Error);
}

TEST(DegenerateMass, Fixture) {
  const auto d = hs::degenerate_mass(3.0, 0.1);
  EXPECT_LE(oracle::rel_err(d.r_c, fx::kDegenerateRadius), 1e-14);
  EXPECT_LE(oracle::rel_err(d.m, fx::kDegenerateMass), 1e-14);
  const double f = static_cast<double>(oracle::delta_r(3.0L, d.m, 0.1L, 0.0L, d.r_c));
  EXPECT_LE(std::abs(f), 1e-12);
  // 4 Q^2 / 3 - 2 m r_c = 0 at the degenerate point
  EXPECT_NEAR(4.0 * 0.01 / 3.0 - 2.0 * d.m * d.r_c, 0.0, 1e-16);
  EXPECT_LE(std::abs(hs::ls_eigenvalue(d.r_c, 3.0, 0.1, 1)), 1e-12);
  const auto rep = hs::index_and_flags(d.r_c, 3.0, 0.1);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_EQ(rep.index, 1);
}

TEST(DegenerateMass, RadiusIsLargestRootButNotAKillingHorizon) {
  const auto d = hs::degenerate_mass(3.0, 0.1);
  const auto ref = oracle::scan_roots(3.0, d.m, 0.1, 0.0);
  ASSERT_FALSE(ref.empty());
  EXPECT_NEAR(ref.back(), d.r_c, 1e-10);
  const auto set = hs::isolate_roots(hs::Parameters{3.0, d.m, 0.1, 0.0});
  ASSERT_TRUE(set.cosmological.has_value());
  EXPECT_NEAR(*set.cosmological, d.r_c, 1e-12);
  for (std::size_t i = 0; i + 1 < set.roots.size(); ++i) EXPECT_GT(std::abs(set.roots[i] - d.r_c), 1e-6);
  EXPECT_THROW(hs::degenerate_mass(3.0, 0.0), hs::Error);
}

TEST(KdsLambda2, FixtureAndCertificate) {
  const double r = fx::kStaticRoots[3];
  EXPECT_LE(oracle::rel_err(hs::kds_lambda2(r, 3.0), fx::kKdsLambda2), 1e-13);
  EXPECT_LT(r, 1.0);
  try {
    hs::kds_lambda2(1.0, 3.0);
    FAIL();
  } catch (const hs::Error& e) {
    EXPECT_EQ(e.code(), hs::ErrorCode::kNotAPositiveRoot);
  }
  EXPECT_THROW(hs::kds_lambda2(-0.5, 3.0), hs::Error);
}
