#pragma once

// Horizon polynomial of the Kerr-Newman-de Sitter family
//
//   Delta_r(r) = (r^2 + a^2)(1 - Lambda r^2 / 3) - 2 m r + q^2
//              = -(Lambda/3) r^4 + (1 - Lambda a^2 / 3) r^2 - 2 m r + (a^2 + q^2)
//
// and the isolation / classification of its real roots. At a = 0 this is the
// Reissner-Nordstrom-de Sitter function f(r) with Q = q.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "horizon_spectra/error.hpp"

namespace horizon_spectra {

/// Spacetime parameters (Lambda, m, q, a) and the physical quantities derived
/// from them.
struct Parameters {
  double lambda = 0.0;
  double m = 0.0;
  double q = 0.0;
  double a = 0.0;

  double xi() const { return 1.0 + lambda * a * a / 3.0; }
  double angular_momentum() const { return a * m / (xi() * xi()); }
  double physical_mass() const { return m / (xi() * xi()); }
  double physical_charge() const { return q / xi(); }
};

inline void validate(const Parameters& p) {
  const bool finite = std::isfinite(p.lambda) && std::isfinite(p.m) && std::isfinite(p.q) &&
                      std::isfinite(p.a);
  if (!finite || !(p.lambda > 0.0) || !(p.m > 0.0) || !(p.q >= 0.0) || !(p.a >= 0.0)) {
    throw Error(ErrorCode::kInvalidParameters,
                "require Lambda > 0, m > 0, q >= 0, a >= 0 (all finite)");
  }
}

namespace detail {

// Dense polynomial, coefficients in descending degree, degree <= 4.
struct DensePoly {
  std::array<double, 5> c{};
  int degree = 0;

  double value(double x) const {
    double acc = c[0];
    for (int i = 1; i <= degree; ++i) acc = acc * x + c[i];
    return acc;
  }
  double derivative(double x) const {
    double acc = degree * c[0];
    for (int i = 1; i < degree; ++i) acc = acc * x + (degree - i) * c[i];
    return degree == 0 ? 0.0 : acc;
  }
  double second_derivative(double x) const {
    if (degree < 2) return 0.0;
    double acc = degree * (degree - 1) * c[0];
    for (int i = 1; i < degree - 1; ++i) acc = acc * x + (degree - i) * (degree - i - 1) * c[i];
    return acc;
  }
  // Cauchy bound: every real root lies strictly inside (-bound, bound).
  double cauchy_bound() const {
    double mx = 0.0;
    for (int i = 1; i <= degree; ++i) mx = std::max(mx, std::abs(c[i] / c[0]));
    return 1.0 + mx;
  }
};

}  // namespace detail

/// Real roots of the depressed cubic t^3 + p t + r = 0, ascending. Three
/// roots are returned only when they are distinct in exact arithmetic
/// (negative discriminant); otherwise the single real root.
inline std::vector<double> solve_depressed_cubic(double p, double r) {
  const double disc = 0.25 * r * r + p * p * p / 27.0;
  std::vector<double> roots;
  if (disc < 0.0) {
    // p < 0 here.
    const double amp = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(1.5 * r / p * std::sqrt(-3.0 / p), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(amp * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
  } else {
    const double s = std::sqrt(disc);
    roots.push_back(std::cbrt(-0.5 * r + s) + std::cbrt(-0.5 * r - s));
  }
  // Newton polish; the closed forms lose digits through cancellation.
  for (double& t : roots) {
    for (int it = 0; it < 3; ++it) {
      const double d = 3.0 * t * t + p;
      if (d == 0.0) break;
      const double step = (t * t * t + p * t + r) / d;
      if (!std::isfinite(step)) break;
      t -= step;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Delta_r as a quartic in r. The cubic coefficient is identically zero.
class HorizonPolynomial {
 public:
  HorizonPolynomial(double lambda, double m, double q, double a)
      : lambda_(lambda), m_(m), q_(q), a_(a) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw Error(ErrorCode::kInvalidParameters, "horizon polynomial needs Lambda > 0");
    }
    poly_.degree = 4;
    poly_.c = {-lambda / 3.0, 0.0, 1.0 - lambda * a * a / 3.0, -2.0 * m, a * a + q * q};
  }
  explicit HorizonPolynomial(const Parameters& p) : HorizonPolynomial(p.lambda, p.m, p.q, p.a) {}

  /// Coefficients in descending degree (r^4 .. r^0).
  const std::array<double, 5>& coefficients() const { return poly_.c; }
  double lambda() const { return lambda_; }
  double m() const { return m_; }
  double q() const { return q_; }
  double a() const { return a_; }

  double value(double r) const { return poly_.value(r); }
  double first_derivative(double r) const { return poly_.derivative(r); }
  double second_derivative(double r) const { return poly_.second_derivative(r); }

  /// Roots of the derivative 4 c4 r^3 + 2 c2 r + c1, solved in closed form.
  std::vector<double> derivative_roots() const {
    const auto& c = poly_.c;
    return solve_depressed_cubic(c[2] / (2.0 * c[0]), c[3] / (4.0 * c[0]));
  }

  /// Roots of the second derivative, +-sqrt((1 - Lambda a^2/3)/(2 Lambda)),
  /// empty when the r^2 coefficient is not positive.
  std::vector<double> inflection_points() const {
    const double c2 = poly_.c[2];
    if (!(c2 > 0.0)) return {};
    const double h = std::sqrt(-c2 / (6.0 * poly_.c[0]));
    return {-h, h};
  }

  /// Residual gate used for every returned root.
  double residual_tolerance(double r) const {
    return 1e-12 * std::max(1.0, r * r * r * r * lambda_ / 3.0);
  }

  const detail::DensePoly& dense() const { return poly_; }

 private:
  double lambda_;
  double m_;
  double q_;
  double a_;
  detail::DensePoly poly_;
};

enum class RootKind { kNegative, kCauchy, kKilling, kCosmological, kOrigin, kUnclassified };

inline std::string_view to_string(RootKind kind) {
  switch (kind) {
    case RootKind::kNegative: return "negative";
    case RootKind::kCauchy: return "cauchy";
    case RootKind::kKilling: return "killing";
    case RootKind::kCosmological: return "cosmological";
    case RootKind::kOrigin: return "origin";
    case RootKind::kUnclassified: return "unclassified";
  }
  return "unclassified";
}

enum class ReasonCode { kChargeTooLarge, kMassOutOfWindow, kRootsNotDistinct, kOrderingViolation };

inline std::string_view to_string(ReasonCode code) {
  switch (code) {
    case ReasonCode::kChargeTooLarge: return "CHARGE_TOO_LARGE";
    case ReasonCode::kMassOutOfWindow: return "MASS_OUT_OF_WINDOW";
    case ReasonCode::kRootsNotDistinct: return "ROOTS_NOT_DISTINCT";
    case ReasonCode::kOrderingViolation: return "ORDERING_VIOLATION";
  }
  return "UNKNOWN";
}

enum class HorizonCase {
  kCharged,          // r_mm < 0 < r_minus < r_plus < r_c
  kUnchargedStatic,  // a = q = 0: r = 0 is an exact root, deflated
  kIrregular,        // anything else; see reason
};

/// Classified real roots of Delta_r.
struct HorizonSet {
  std::vector<double> roots;  // ascending, all real roots found
  std::vector<RootKind> kinds;
  double min_gap = std::numeric_limits<double>::infinity();
  double separation_tolerance = 0.0;
  bool admissible = false;
  HorizonCase horizon_case = HorizonCase::kIrregular;
  std::optional<ReasonCode> reason;
  std::optional<double> cosmological;  // largest root when positive and simple

  bool has_four_roots() const { return roots.size() == 4; }
  double r_mm() const { return roots.at(0); }
  double r_minus() const { return roots.at(1); }
  double r_plus() const { return roots.at(2); }
  double r_c() const { return roots.at(3); }
};

/// Roots of f'(r) and f''(r) with the interlacing pattern they satisfy.
struct CriticalStructure {
  std::vector<double> derivative_roots;  // r1 < r2 < r3 when three exist
  std::vector<double> inflection_points;  // rhat1 < rhat2

  /// r_mm < r1 < rhat1 < 0 < r_minus < r2 < r_plus < r3 < r_c, rhat2 in (r2, r3).
  bool interlaces(const HorizonSet& set) const {
    if (!set.has_four_roots() || derivative_roots.size() != 3 || inflection_points.size() != 2) {
      return false;
    }
    const auto& d = derivative_roots;
    const double rh1 = inflection_points[0];
    const double rh2 = inflection_points[1];
    return set.r_mm() < d[0] && d[0] < rh1 && rh1 < 0.0 && 0.0 < set.r_minus() &&
           set.r_minus() < d[1] && d[1] < set.r_plus() && set.r_plus() < d[2] &&
           d[2] < set.r_c() && d[1] < rh2 && rh2 < d[2];
  }
};

inline CriticalStructure critical_structure(const HorizonPolynomial& poly) {
  return {poly.derivative_roots(), poly.inflection_points()};
}

namespace detail {

// Root in a bracket [lo, hi] with a strict sign change: bisection followed by
// at most five Newton steps that must stay in the bracket and not increase
// the residual.
inline double bracketed_root(const DensePoly& p, double lo, double hi) {
  double flo = p.value(lo);
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  const double tol = 1e-13 * scale;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = p.value(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  double fx = p.value(x);
  for (int it = 0; it < 5 && fx != 0.0; ++it) {
    const double d = p.derivative(x);
    if (d == 0.0) break;
    const double next = x - fx / d;
    if (!(next >= lo && next <= hi)) break;
    const double fnext = p.value(next);
    if (std::abs(fnext) > std::abs(fx)) break;
    const bool done = std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
    x = next;
    fx = fnext;
    if (done) break;
  }
  return x;
}

// All real roots of p given its sorted real critical points. Between two
// consecutive critical points p is monotone, so each interval holds at most
// one root. A critical point where p vanishes exactly is a multiple root and
// is returned twice.
inline std::vector<double> real_roots(const DensePoly& p, const std::vector<double>& critical) {
  const double bound = p.cauchy_bound();
  std::vector<double> knots;
  knots.push_back(-bound);
  for (double x : critical) {
    if (x > -bound && x < bound) knots.push_back(x);
  }
  knots.push_back(bound);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double flo = p.value(lo);
    const double fhi = p.value(hi);
    if (flo == 0.0 && i > 0) {
      roots.push_back(lo);
      roots.push_back(lo);
    }
    if ((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0)) roots.push_back(bracketed_root(p, lo, hi));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace detail

/// Open mass interval (0, m_max) for the four-root structure at a = 0.
struct MassWindow {
  double m_max = 0.0;
  bool contains(double m) const { return m > 0.0 && m < m_max; }
};

/// m_max^2 = (1/(18 Lambda)) [1 + 12 Q^2 Lambda + (1 - 4 Q^2 Lambda)^{3/2}].
inline double mass_window_bound_squared(double lambda, double charge) {
  const double t = charge * charge * lambda;
  if (t > 0.25) throw Error(ErrorCode::kChargeTooLarge, "Q^2 Lambda exceeds 1/4");
  const double s = std::sqrt(1.0 - 4.0 * t);
  return (1.0 + 12.0 * t + s * s * s) / (18.0 * lambda);
}

inline MassWindow mass_window(double lambda, double charge) {
  return {std::sqrt(mass_window_bound_squared(lambda, charge))};
}

/// Mass at which f'(sqrt(x_u)) = 0, x_u = (1 + sqrt(1 - 4 Lambda Q^2))/(2 Lambda):
/// (1/3) sqrt(x_u) (2 - sqrt(1 - 4 Lambda Q^2)). Equals m_max.
inline double mass_zeroing_slope_at_u_root(double lambda, double charge) {
  const double s = std::sqrt(1.0 - 4.0 * lambda * charge * charge);
  return std::sqrt((1.0 + s) / (2.0 * lambda)) * (2.0 - s) / 3.0;
}

/// Mass at which f(sqrt(x_u)) = 0:
/// [(1 + s)(5 - s) + 12 Lambda Q^2] / (24 Lambda) * x_u^{-1/2}. Equals m_max.
inline double mass_zeroing_value_at_u_root(double lambda, double charge) {
  const double t = lambda * charge * charge;
  const double s = std::sqrt(1.0 - 4.0 * t);
  return ((1.0 + s) * (5.0 - s) + 12.0 * t) / (24.0 * lambda) /
         std::sqrt((1.0 + s) / (2.0 * lambda));
}

struct MassHypothesis {
  double threshold = 0.0;
  bool holds = false;
};

/// Strict lower mass bound (2 Q^2 / 3) ((3 + sqrt(9 - 4 Lambda Q^2)) / (2 Lambda))^{-1/2} < m.
inline MassHypothesis mass_hypothesis(double lambda, double charge, double m) {
  const double d = 9.0 - 4.0 * lambda * charge * charge;
  if (d < 0.0) throw Error(ErrorCode::kChargeTooLarge, "9 - 4 Lambda Q^2 is negative");
  const double threshold =
      (2.0 * charge * charge / 3.0) / std::sqrt((3.0 + std::sqrt(d)) / (2.0 * lambda));
  return {threshold, threshold < m};
}

namespace detail {

inline void classify(HorizonSet& set, const HorizonPolynomial& poly) {
  const auto& r = set.roots;
  set.kinds.assign(r.size(), RootKind::kUnclassified);
  const double scale = r.empty() ? 1.0 : std::max(1.0, std::abs(r.back()));
  set.separation_tolerance = 1e-9 * scale;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) set.min_gap = std::min(set.min_gap, r[i + 1] - r[i]);

  if (!r.empty() && r.back() > 0.0 && poly.first_derivative(r.back()) < 0.0 &&
      (r.size() < 2 || r.back() - r[r.size() - 2] > set.separation_tolerance)) {
    set.cosmological = r.back();
  }

  if (r.size() == 4 && set.min_gap > set.separation_tolerance) {
    if (r[0] < 0.0 && 0.0 < r[1]) {
      set.admissible = true;
      set.horizon_case = HorizonCase::kCharged;
      set.kinds = {RootKind::kNegative, RootKind::kCauchy, RootKind::kKilling,
                   RootKind::kCosmological};
      return;
    }
    set.reason = ReasonCode::kOrderingViolation;
    if (r[1] == 0.0 && r[0] < 0.0) {
      set.horizon_case = HorizonCase::kUnchargedStatic;
      set.kinds = {RootKind::kNegative, RootKind::kOrigin, RootKind::kKilling,
                   RootKind::kCosmological};
    }
    return;
  }

  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0.0) set.kinds[i] = RootKind::kNegative;
  }
  if (set.cosmological) set.kinds.back() = RootKind::kCosmological;

  if (r.size() == 4) {
    set.reason = ReasonCode::kRootsNotDistinct;
    return;
  }
  // Fewer than four real roots: attribute to the charge or the mass window of
  // the static problem where those explain it.
  const double lambda = poly.lambda();
  const double charge = poly.q() / (1.0 + lambda * poly.a() * poly.a() / 3.0);
  const double m = poly.m();
  if (charge * charge * lambda > 0.25) {
    set.reason = ReasonCode::kChargeTooLarge;
  } else if (!mass_window(lambda, charge).contains(m)) {
    set.reason = ReasonCode::kMassOutOfWindow;
  } else {
    set.reason = ReasonCode::kRootsNotDistinct;
  }
}

}  // namespace detail

/// Isolate and classify the real roots of Delta_r. Never throws for a valid
/// polynomial; inadmissibility is reported through `admissible` and `reason`.
inline HorizonSet isolate_roots(const HorizonPolynomial& poly) {
  HorizonSet set;
  const auto& c = poly.coefficients();
  if (c[4] == 0.0) {
    // a = q = 0: r = 0 is exact. Deflate to c4 r^3 + c2 r + c1.
    detail::DensePoly cubic;
    cubic.degree = 3;
    cubic.c = {c[0], 0.0, c[2], c[3], 0.0};
    std::vector<double> critical;
    if (c[2] / c[0] < 0.0) {
      const double h = std::sqrt(-c[2] / (3.0 * c[0]));
      critical = {-h, h};
    }
    set.roots = detail::real_roots(cubic, critical);
    set.roots.push_back(0.0);
    std::sort(set.roots.begin(), set.roots.end());
  } else {
    set.roots = detail::real_roots(poly.dense(), poly.derivative_roots());
  }
  detail::classify(set, poly);
  return set;
}

inline HorizonSet isolate_roots(const Parameters& params) {
  validate(params);
  return isolate_roots(HorizonPolynomial(params));
}

/// Throws NotAdmissible unless the four-root charged pattern holds.
inline const HorizonSet& require_admissible(const HorizonSet& set) {
  if (!set.admissible) {
    std::string why = set.reason ? std::string(to_string(*set.reason)) : "no reason recorded";
    throw Error(ErrorCode::kNotAdmissible,
                why + " (" + std::to_string(set.roots.size()) + " real roots, min_gap " +
                    std::to_string(set.min_gap) + ")");
  }
  return set;
}

}  // namespace horizon_spectra
