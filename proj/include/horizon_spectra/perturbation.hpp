#pragma once

// Continuity of the low spectrum in the rotation parameter a. The cosmological
// root r_c(a) is continued by Newton from a = 0 and certified against a fresh
// root isolation at each a; the spectrum of -Lap_h + V on the a-cross-section
// is computed with V frozen at its a = 0 value.

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <vector>

#include "horizon_spectra/axisym_eigensolver.hpp"
#include "horizon_spectra/error.hpp"
#include "horizon_spectra/horizon_geometry.hpp"
#include "horizon_spectra/horizon_roots.hpp"
#include "horizon_spectra/mots_spectrum.hpp"

namespace horizon_spectra {

struct SweepOptions {
  int grid_n = 512;
  int jobs = 1;
};

struct SweepEntry {
  double a = 0.0;
  double r_c = 0.0;
  double residual = 0.0;
  int newton_steps = 0;
  bool four_root_admissible = false;
  std::vector<double> lambdas;  // lowest four with multiplicity, extrapolated
  std::vector<double> error_estimates;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool signs_persist = false;  // lambda1 < 0 < lambda2
  // q = 0 only: every positive root r of Delta_r has 1 - Lambda r^2 / 3 > 0.
  std::optional<bool> kds_certificate;
};

struct SweepReport {
  double lambda = 0.0;
  double m = 0.0;
  double q = 0.0;
  double frozen_potential = 0.0;
  double r_c0 = 0.0;
  std::vector<SweepEntry> entries;  // ascending in a
  // Largest swept a such that every entry up to it keeps lambda1 < 0 < lambda2.
  std::optional<double> sign_persistence_limit;
};

namespace detail {

inline double continue_root(const HorizonPolynomial& poly, double start, int& steps) {
  double r = start;
  for (steps = 0; steps < 50; ++steps) {
    const double f = poly.value(r);
    if (std::abs(f) <= poly.residual_tolerance(r) * 1e-2) break;
    const double d = poly.first_derivative(r);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double step = f / d;
    r -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r)) {
      ++steps;
      break;
    }
  }
  return r;
}

inline bool kds_certificate(const HorizonSet& set, double lambda) {
  for (double r : set.roots) {
    if (r <= 0.0) continue;
    try {
      (void)kds_lambda2(r, lambda);
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

inline SweepReport perturbation_sweep(double lambda, double m, double q, std::vector<double> a_values,
                                      const SweepOptions& options = {}) {
  std::sort(a_values.begin(), a_values.end());
  a_values.erase(std::unique(a_values.begin(), a_values.end()), a_values.end());

  SweepReport report;
  report.lambda = lambda;
  report.m = m;
  report.q = q;
  const auto base = isolate_roots(Parameters{lambda, m, q, 0.0});
  if (!base.cosmological) {
    throw Error(ErrorCode::kNotAdmissible, "no simple cosmological root at a = 0");
  }
  report.r_c0 = *base.cosmological;
  report.frozen_potential = static_potential(report.r_c0, lambda, q);

  double previous = report.r_c0;
  for (double a : a_values) {
    const Parameters params{lambda, m, q, a};
    validate(params);
    const HorizonPolynomial poly(params);
    SweepEntry entry;
    entry.a = a;
    entry.r_c = detail::continue_root(poly, previous, entry.newton_steps);
    entry.residual = std::abs(poly.value(entry.r_c));
    const auto set = isolate_roots(poly);
    entry.four_root_admissible = set.admissible;
    const double scale = std::max(1.0, std::abs(entry.r_c));
    if (!set.cosmological || std::abs(*set.cosmological - entry.r_c) > 1e-10 * scale ||
        entry.residual > poly.residual_tolerance(entry.r_c)) {
      throw Error(ErrorCode::kContinuationLost,
                  "continued root " + std::to_string(entry.r_c) + " left the cosmological branch at a = " +
                      std::to_string(a));
    }
    if (q == 0.0) entry.kds_certificate = detail::kds_certificate(set, lambda);
    previous = entry.r_c;
    report.entries.push_back(std::move(entry));
  }

  const Potential potential = constant_potential(report.frozen_potential);
  auto spectrum_of = [&](const SweepEntry& e) {
    return solve_axisymmetric(CrossSectionMetric(e.r_c, e.a, lambda), potential, options.grid_n, 1, 3);
  };
  std::vector<NumericSpectrum> spectra(report.entries.size());
  if (options.jobs <= 1) {
    for (std::size_t i = 0; i < spectra.size(); ++i) spectra[i] = spectrum_of(report.entries[i]);
  } else {
    std::vector<std::future<NumericSpectrum>> pending;
    for (const auto& e : report.entries) pending.push_back(std::async(std::launch::async, spectrum_of, std::cref(e)));
    for (std::size_t i = 0; i < pending.size(); ++i) spectra[i] = pending[i].get();
  }

  bool persisting = true;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    auto& e = report.entries[i];
    for (const auto& ev : spectra[i].merged) {
      for (int j = 0; j < ev.multiplicity && e.lambdas.size() < 4; ++j) {
        e.lambdas.push_back(ev.extrapolated);
        e.error_estimates.push_back(ev.error_estimate);
      }
    }
    e.lambda1 = e.lambdas.at(0);
    e.lambda2 = e.lambdas.at(1);
    e.signs_persist = e.lambda1 < 0.0 && 0.0 < e.lambda2;
    persisting = persisting && e.signs_persist;
    if (persisting) report.sign_persistence_limit = e.a;
  }
  return report;
}

}  // namespace horizon_spectra
