#pragma once

// Randomized invariant suite behind the `check` command.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "horizon_spectra/area_charge.hpp"
#include "horizon_spectra/horizon_geometry.hpp"
#include "horizon_spectra/horizon_roots.hpp"
#include "horizon_spectra/mots_spectrum.hpp"

namespace horizon_spectra {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Seed from HORIZON_SPECTRA_SEED, or the default.
inline std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("HORIZON_SPECTRA_SEED"); s != nullptr && *s != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != nullptr && *end == '\0') return v;
  }
  return kDefaultSeed;
}

struct MassBoundDraw {
  double lambda = 0.0;
  double charge = 0.0;
  double m = 0.0;
};

/// Lambda log-uniform in [1e-2, 1e2], Q^2 Lambda uniform in [0, 1/4), m
/// uniform strictly between the mass-hypothesis threshold and m_max.
inline MassBoundDraw draw_mass_bound_parameters(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MassBoundDraw d;
  d.lambda = std::pow(10.0, -2.0 + 4.0 * unit(rng));
  const double t = 0.25 * unit(rng);
  d.charge = std::sqrt(t / d.lambda);
  const double lo = mass_hypothesis(d.lambda, d.charge, 0.0).threshold;
  const double hi = mass_window(d.lambda, d.charge).m_max;
  double m = lo + (hi - lo) * unit(rng);
  if (!(m > lo)) m = std::nextafter(lo, hi);
  if (!(m < hi)) m = std::nextafter(hi, lo);
  d.m = m;
  return d;
}

struct InvariantResult {
  std::string name;
  long checked = 0;
  long failures = 0;
  bool passed() const { return failures == 0 && checked > 0; }
};

/// Runs every invariant over `draws` seeded random draws.
inline std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed, long draws) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<InvariantResult> out;
  out.reserve(16);  // references below must stay valid
  auto add = [&](const std::string& name) -> InvariantResult& {
    out.push_back({name});
    return out.back();
  };
  auto& roots_ok = add("roots sorted, Vieta sum, residual gate");
  auto& sign_ok = add("sign pattern of f between roots");
  auto& slope_ok = add("f' decreasing beyond rhat2");
  auto& interlace_ok = add("critical points interlace the roots");
  auto& mmax_ok = add("m_max closed form equals slope/value forms");
  auto& order_ok = add("mass threshold below m_max");
  auto& index_ok = add("lambda1 < 0 < lambda2 and index 1 at r_c");
  auto& interval_ok = add("r_c inside (sqrt(u+), sqrt(v+))");
  auto& upoint_ok = add("f and f' positive at sqrt(u+)");
  auto& table_ok = add("lambda1/lambda2 sign tables from u, v");
  auto& ac_ok = add("area-charge margin equals 4 pi r_c^2 lambda2");
  auto& window_ok = add("inequality implies charge bound and area window");
  auto& area_ok = add("cross-section area density matches closed form");
  auto& degenerate_ok = add("degenerate mass zeroes f and lambda2");

  for (long i = 0; i < draws; ++i) {
    const auto d = draw_mass_bound_parameters(rng);
    const double lambda = d.lambda, charge = d.charge, m = d.m;
    const HorizonPolynomial poly(lambda, m, charge, 0.0);
    const auto set = isolate_roots(poly);

    ++mmax_ok.checked;
    const double m2 = mass_window_bound_squared(lambda, charge);
    const double slope_form = mass_zeroing_slope_at_u_root(lambda, charge);
    const double value_form = mass_zeroing_value_at_u_root(lambda, charge);
    if (std::abs(slope_form * slope_form - m2) > 1e-12 * m2 || std::abs(value_form - std::sqrt(m2)) > 1e-12 * std::sqrt(m2)) {
      ++mmax_ok.failures;
    }
    ++order_ok.checked;
    if (!(mass_hypothesis(lambda, charge, m).threshold < std::sqrt(m2))) ++order_ok.failures;

    const auto regions = sign_regions(lambda, charge);
    ++upoint_ok.checked;
    const double ru = regions.interval_lower();
    if (!(poly.value(ru) > 0.0) || !(poly.first_derivative(ru) > 0.0)) ++upoint_ok.failures;

    {
      ++table_ok.checked;
      const double x = 2.0 * regions.v_upper * (1e-6 + unit(rng));
      const double r0 = std::sqrt(x);
      const double l1 = ls_eigenvalue(r0, lambda, charge, 0);
      const double l2 = ls_eigenvalue(r0, lambda, charge, 1);
      const bool u_out = x < regions.u_lower || x > regions.u_upper;
      const bool v_out = x < regions.v_lower || x > regions.v_upper;
      const double tol = 1e-9 * std::max(1.0, 1.0 / (x * x));
      if ((std::abs(l1) > tol && (l1 < 0.0) != u_out) || (std::abs(l2) > tol && (l2 < 0.0) != v_out)) {
        ++table_ok.failures;
      }
    }

    if (!set.admissible) continue;
    const double rc = set.r_c();
    const double scale = std::max(1.0, std::abs(rc));

    ++roots_ok.checked;
    bool good = std::is_sorted(set.roots.begin(), set.roots.end());
    double sum = 0.0;
    for (double r : set.roots) {
      sum += r;
      good = good && std::abs(poly.value(r)) <= poly.residual_tolerance(r);
    }
    if (!good || std::abs(sum) > 1e-9 * scale) ++roots_ok.failures;

    ++sign_ok.checked;
    for (int k = 1; k <= 100; ++k) {
      const double s = static_cast<double>(k) / 101.0;
      const double between = set.r_plus() + s * (rc - set.r_plus());
      const double inner = set.r_minus() + s * (set.r_plus() - set.r_minus());
      const double outer = rc + s * (rc - set.r_mm());
      if (!(poly.value(between) > 0.0) || !(poly.value(inner) < 0.0) || !(poly.value(outer) < 0.0)) {
        ++sign_ok.failures;
        break;
      }
    }

    ++slope_ok.checked;
    {
      const double rh2 = std::sqrt(1.0 / (2.0 * lambda));
      const double span = 2.0 * rc;
      for (int k = 1; k <= 20; ++k) {
        const double x = rh2 + span * k / 20.0;
        const double hstep = 1e-6 * std::max(1.0, x);
        const double fd = (poly.first_derivative(x + hstep) - poly.first_derivative(x - hstep)) / (2.0 * hstep);
        if (!(fd < 0.0)) {
          ++slope_ok.failures;
          break;
        }
      }
    }

    ++interlace_ok.checked;
    if (!critical_structure(poly).interlaces(set)) ++interlace_ok.failures;

    ++index_ok.checked;
    const auto rep = index_and_flags(rc, lambda, charge);
    if (!(rep.lambda1 < 0.0 && 0.0 < rep.lambda2 && rep.index == 1)) ++index_ok.failures;

    ++interval_ok.checked;
    if (!(rc * rc > regions.u_upper && rc * rc < regions.v_upper)) ++interval_ok.failures;

    ++ac_ok.checked;
    const auto cc = horizon_crosscheck(Parameters{lambda, m, charge, 0.0});
    if (!cc.identity_holds) ++ac_ok.failures;
  }

  for (long i = 0; i < draws; ++i) {
    const double lambda = std::pow(10.0, -2.0 + 4.0 * unit(rng));
    const double charge = std::sqrt(3.0 * unit(rng) / lambda);
    const double area = std::pow(10.0, -3.0 + 6.0 * unit(rng)) / lambda;
    const auto rep = check(lambda, area, charge);
    if (!rep.holds) continue;
    ++window_ok.checked;
    if (!rep.charge_bound_ok || !rep.area_window || !rep.area_window->contains(area, 1e-10)) ++window_ok.failures;
  }

  for (long i = 0; i < std::min(draws, 200L); ++i) {
    const double lambda = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const double r0 = (0.2 + 0.8 * unit(rng)) * std::sqrt(3.0 / lambda);
    const double a = 0.2 * unit(rng);
    const CrossSectionMetric g(r0, a, lambda);
    ++area_ok.checked;
    for (int k = 1; k < 16; ++k) {
      const double th = std::numbers::pi * k / 16.0;
      if (std::abs(std::sqrt(g.A(th) * g.B(th)) - g.area_density(th)) > 1e-12 * g.area_density(th)) {
        ++area_ok.failures;
        break;
      }
    }

    const double t = 0.25 * unit(rng);
    const double charge = std::sqrt(t / lambda);
    if (charge == 0.0) continue;
    const auto dm = degenerate_mass(lambda, charge);
    const HorizonPolynomial poly(lambda, dm.m, charge, 0.0);
    ++degenerate_ok.checked;
    if (std::abs(poly.value(dm.r_c)) > 1e-12 || std::abs(ls_eigenvalue(dm.r_c, lambda, charge, 1)) > 1e-10) {
      ++degenerate_ok.failures;
    }
  }
  return out;
}

}  // namespace horizon_spectra
