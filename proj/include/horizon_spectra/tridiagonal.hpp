#pragma once

// Symmetric tridiagonal eigenvalues by Sturm-sequence bisection and
// eigenvectors by inverse iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "horizon_spectra/error.hpp"

namespace horizon_spectra {

struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i + 1

  std::size_t size() const { return diag.size(); }

  /// Gershgorin interval containing every eigenvalue.
  std::pair<double, double> gershgorin() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      if (i > 0) r += std::abs(off[i - 1]);
      if (i + 1 < n) r += std::abs(off[i]);
      lo = std::min(lo, diag[i] - r);
      hi = std::max(hi, diag[i] + r);
    }
    return {lo, hi};
  }

  double norm() const {
    auto [lo, hi] = gershgorin();
    return std::max(std::abs(lo), std::abs(hi));
  }

  void multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = diag[i] * x[i];
      if (i > 0) acc += off[i - 1] * x[i - 1];
      if (i + 1 < n) acc += off[i] * x[i + 1];
      y[i] = acc;
    }
  }
};

/// Number of eigenvalues strictly below x (Sturm count of negative pivots).
inline std::size_t count_below(const SymmetricTridiagonal& t, double x) {
  const std::size_t n = t.size();
  const double tiny = std::numeric_limits<double>::min() * 4.0;
  std::size_t count = 0;
  double pivot = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double coupling = i > 0 ? t.off[i - 1] * t.off[i - 1] / pivot : 0.0;
    pivot = t.diag[i] - x - coupling;
    if (pivot == 0.0) pivot = -tiny;
    if (pivot < 0.0) ++count;
  }
  return count;
}

/// k-th smallest eigenvalue (0-based) by bisection.
inline double kth_eigenvalue(const SymmetricTridiagonal& t, std::size_t k) {
  auto [lo, hi] = t.gershgorin();
  const double scale = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-14 * scale + std::numeric_limits<double>::min();
  hi += 1e-14 * scale + std::numeric_limits<double>::min();
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 256; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi) {
      return mid;
    }
    if (count_below(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw Error(ErrorCode::kNoConvergence, "Sturm bisection did not converge");
}

inline std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& t, std::size_t count) {
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) values.push_back(kth_eigenvalue(t, k));
  return values;
}

/// Unit eigenvector for an (approximate) eigenvalue by inverse iteration with
/// a partially pivoted tridiagonal LU.
inline std::vector<double> inverse_iteration(const SymmetricTridiagonal& t, double eigenvalue,
                                             int iterations = 4) {
  const std::size_t n = t.size();
  const double guard = std::numeric_limits<double>::epsilon() * std::max(1.0, t.norm());

  std::vector<double> dl(t.off), d(n), du(t.off), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<std::size_t> ipiv(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - eigenvalue;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      ipiv[i] = i;
      if (d[i] == 0.0) d[i] = guard;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      ipiv[i] = i + 1;
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
    }
  }
  if (n > 0 && d[n - 1] == 0.0) d[n - 1] = guard;

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (ipiv[i] == i) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - dl[i] * b[i];
      }
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = b[ii];
      if (ii + 1 < n) acc -= du[ii] * b[ii + 1];
      if (ii + 2 < n) acc -= du2[ii] * b[ii + 2];
      b[ii] = acc / d[ii];
    }
  };
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::kNoConvergence, "inverse iteration broke down");
    for (double& x : v) x /= s;
  };

  // Deterministic, non-symmetric start so no eigenvector is orthogonal to it.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + 0.7 * static_cast<double>(i));
  normalize(v);
  for (int it = 0; it < iterations; ++it) {
    solve(v);
    normalize(v);
  }
  // Fix the sign so the largest component is positive.
  const auto big = std::max_element(v.begin(), v.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  if (big != v.end() && *big < 0.0) {
    for (double& x : v) x = -x;
  }
  return v;
}

}  // namespace horizon_spectra
