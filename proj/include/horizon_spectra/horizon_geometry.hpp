#pragma once

// Induced metric on a horizon cross-section {t = const, r = r0} of the
// Kerr-Newman-de Sitter metric in Boyer-Lindquist coordinates. With
// Delta_r(r0) = 0 the dt-free restriction leaves
//
//   h = A(theta) dtheta^2 + B(theta) dphi^2,
//   A = rho^2 / Delta_theta,
//   B = Delta_theta sin^2(theta) (r0^2 + a^2)^2 / (rho^2 Xi^2),
//
// rho^2 = r0^2 + a^2 cos^2(theta), Delta_theta = 1 + (Lambda/3) a^2 cos^2(theta).
// sqrt(A B) = (r0^2 + a^2) sin(theta) / Xi, so the area is 4 pi (r0^2 + a^2) / Xi.
// At a = 0 this is the round sphere of radius r0.

#include <cmath>
#include <numbers>

#include "horizon_spectra/error.hpp"
#include "horizon_spectra/horizon_roots.hpp"

namespace horizon_spectra {

class CrossSectionMetric {
 public:
  CrossSectionMetric(double r0, double a, double lambda) : r0_(r0), a_(a), lambda_(lambda) {
    if (!(r0 > 0.0) || !(a >= 0.0) || !(lambda >= 0.0)) {
      throw Error(ErrorCode::kBadMetric, "cross-section needs r0 > 0, a >= 0, Lambda >= 0");
    }
  }

  static CrossSectionMetric round(double r0) { return {r0, 0.0, 0.0}; }

  double r0() const { return r0_; }
  double a() const { return a_; }
  double lambda() const { return lambda_; }
  double xi() const { return 1.0 + lambda_ * a_ * a_ / 3.0; }

  double A(double theta) const { return rho2(theta) / delta_theta(theta); }

  double B(double theta) const {
    const double s = std::sin(theta);
    const double w = (r0_ * r0_ + a_ * a_) / xi();
    return delta_theta(theta) * s * s * w * w / rho2(theta);
  }

  /// Area density sqrt(A B) in closed form.
  double area_density(double theta) const { return (r0_ * r0_ + a_ * a_) * std::sin(theta) / xi(); }

  double area() const { return 4.0 * std::numbers::pi * (r0_ * r0_ + a_ * a_) / xi(); }

 private:
  double rho2(double theta) const {
    const double c = std::cos(theta);
    return r0_ * r0_ + a_ * a_ * c * c;
  }
  double delta_theta(double theta) const {
    const double c = std::cos(theta);
    return 1.0 + lambda_ / 3.0 * a_ * a_ * c * c;
  }

  double r0_;
  double a_;
  double lambda_;
};

/// Cross-section at r0, which must pass the residual gate of Delta_r.
inline CrossSectionMetric cross_section(const Parameters& params, double r0) {
  validate(params);
  const HorizonPolynomial poly(params);
  if (!(r0 > 0.0) || !(std::abs(poly.value(r0)) <= poly.residual_tolerance(r0))) {
    throw Error(ErrorCode::kNotAHorizon, "r0 = " + std::to_string(r0) + " is not a root of Delta_r");
  }
  return {r0, params.a, params.lambda};
}

/// Charge of the horizon cross-section, q / Xi.
inline double surface_charge(const Parameters& params) { return params.q / params.xi(); }

}  // namespace horizon_spectra
