#pragma once

// Spectrum of the symmetrized stability operator L_s(0) = -Lap_h + b on the
// round horizon sphere of radius r0, with the constant potential
// b = 1/r0^2 - Lambda - Q^2/r0^4. Mode k has multiplicity 2k + 1 and value
//
//   lambda_{k+1} = k(k+1)/r0^2 + 1/r0^2 - Lambda - Q^2/r0^4.

#include <algorithm>
#include <cmath>
#include <vector>

#include "horizon_spectra/error.hpp"

namespace horizon_spectra {

/// Constant potential of L_s(0) at a horizon of radius r0.
inline double static_potential(double r0, double lambda, double charge) {
  const double r2 = r0 * r0;
  return 1.0 / r2 - lambda - charge * charge / (r2 * r2);
}

inline double ls_eigenvalue(double r0, double lambda, double charge, int k) {
  return static_cast<double>(k) * (k + 1) / (r0 * r0) + static_potential(r0, lambda, charge);
}

struct SpectralMode {
  int k = 0;
  double value = 0.0;
  int multiplicity = 1;
};

struct SpectrumReport {
  double r0 = 0.0;
  std::vector<SpectralMode> modes;  // ascending in k
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int index = 0;
  bool stable_symmetrized = false;
  bool degenerate = false;
  // Inferred from lambda1(L) <= lambda1(L_s); L itself is never built.
  bool unstable_full = false;
  double zero_tolerance = 0.0;
};

inline constexpr int kMaxModes = 64;

/// Enumerates modes until one is strictly positive (and at least `min_modes`
/// are listed), counting the index with multiplicity.
inline SpectrumReport index_and_flags(double r0, double lambda, double charge, int min_modes = 2) {
  if (!(r0 > 0.0) || !std::isfinite(r0) || !std::isfinite(lambda) || !std::isfinite(charge)) {
    throw Error(ErrorCode::kInvalidParameters, "index_and_flags needs finite r0 > 0");
  }
  SpectrumReport report;
  report.r0 = r0;
  const double gap = 2.0 / (r0 * r0);  // lambda2 - lambda1
  report.zero_tolerance = 1e-10 * std::max(1.0, gap);
  const int wanted = std::max(2, min_modes);
  for (int k = 0;; ++k) {
    if (k >= kMaxModes) {
      throw Error(ErrorCode::kModeCapExceeded, "no positive mode below k = 64");
    }
    const double value = ls_eigenvalue(r0, lambda, charge, k);
    report.modes.push_back({k, value, 2 * k + 1});
    if (std::abs(value) <= report.zero_tolerance) {
      report.degenerate = true;
    } else if (value < 0.0) {
      report.index += 2 * k + 1;
    }
    if (value > report.zero_tolerance && k + 1 >= wanted) break;
  }
  report.lambda1 = report.modes[0].value;
  report.lambda2 = report.modes[1].value;
  report.stable_symmetrized = report.lambda1 >= 0.0 || std::abs(report.lambda1) <= report.zero_tolerance;
  report.unstable_full = !report.stable_symmetrized;
  return report;
}

/// Sign regions of lambda1 and lambda2 in x = r0^2:
/// u(x) = -Lambda x^2 + x - Q^2 and v(x) = -Lambda x^2 + 3x - Q^2.
struct SignRegions {
  double u_lower = 0.0;
  double u_upper = 0.0;
  double v_lower = 0.0;
  double v_upper = 0.0;

  /// Radius interval (sqrt(u_upper), sqrt(v_upper)) that holds r_c.
  double interval_lower() const { return std::sqrt(u_upper); }
  double interval_upper() const { return std::sqrt(v_upper); }
};

inline double u_polynomial(double x, double lambda, double charge) {
  return -lambda * x * x + x - charge * charge;
}

inline double v_polynomial(double x, double lambda, double charge) {
  return -lambda * x * x + 3.0 * x - charge * charge;
}

inline SignRegions sign_regions(double lambda, double charge) {
  const double t = lambda * charge * charge;
  if (t > 0.25) throw Error(ErrorCode::kChargeTooLarge, "Q^2 Lambda exceeds 1/4");
  const double su = std::sqrt(1.0 - 4.0 * t);
  const double sv = std::sqrt(9.0 - 4.0 * t);
  return {(1.0 - su) / (2.0 * lambda), (1.0 + su) / (2.0 * lambda), (3.0 - sv) / (2.0 * lambda),
          (3.0 + sv) / (2.0 * lambda)};
}

struct DegenerateMass {
  double m = 0.0;
  double r_c = 0.0;
};

/// Mass at which lambda2(L_s(0)) vanishes at the cosmological horizon, and
/// that horizon's radius sqrt(v_upper).
inline DegenerateMass degenerate_mass(double lambda, double charge) {
  if (!(charge > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorCode::kInvalidParameters, "degenerate_mass needs Q > 0 and Lambda > 0");
  }
  if (lambda * charge * charge > 0.25) throw Error(ErrorCode::kChargeTooLarge, "Q^2 Lambda exceeds 1/4");
  const double r_c = std::sqrt((3.0 + std::sqrt(9.0 - 4.0 * lambda * charge * charge)) / (2.0 * lambda));
  return {(2.0 * charge * charge / 3.0) / r_c, r_c};
}

/// lambda2 = 3/r0'^2 - Lambda for a positive Kerr-de Sitter root r0'. The
/// certificate 1 - Lambda r0'^2 / 3 > 0 must hold for a genuine positive root.
inline double kds_lambda2(double root, double lambda) {
  if (!(root > 0.0) || !(1.0 - lambda * root * root / 3.0 > 0.0)) {
    throw Error(ErrorCode::kNotAPositiveRoot, "certificate 1 - Lambda r^2/3 > 0 fails");
  }
  return 3.0 / (root * root) - lambda;
}

}  // namespace horizon_spectra
