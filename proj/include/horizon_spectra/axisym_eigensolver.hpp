#pragma once

// Spectrum of -Lap_h + V on an axisymmetric topological sphere
// h = A(theta) dtheta^2 + B(theta) dphi^2 with V = V(theta).
//
// Separating psi = u(theta) e^{i m phi}, each azimuthal mode solves
//
//   -(1/sqrt(AB)) (sqrt(B/A) u')' + (m^2 / B) u + V u = lambda u
//
// on (0, pi). Cells are centred at theta_i = (i + 1/2) h, h = pi / N, so no
// unknown sits on a pole. Face fluxes p = sqrt(B/A) vanish at both poles,
// which gives the regular (Neumann-type) closure for m = 0; for m >= 1 the
// m^2 / B term pushes the solution to zero at the poles.
//
// With weights W_i = sqrt(A B)(theta_i) h the scheme is K u = lambda W u,
// K symmetric tridiagonal; we hand S = W^{-1/2} K W^{-1/2} to the Sturm
// bisection solver.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "horizon_spectra/error.hpp"
#include "horizon_spectra/tridiagonal.hpp"

namespace horizon_spectra {

template <class M>
concept AxisymmetricMetric = requires(const M& g, double theta) {
  { g.A(theta) } -> std::convertible_to<double>;
  { g.B(theta) } -> std::convertible_to<double>;
};

using Potential = std::function<double(double)>;

inline Potential constant_potential(double value) {
  return [value](double) { return value; };
}

template <AxisymmetricMetric Metric>
class DiscretizedOperator {
 public:
  DiscretizedOperator(Metric metric, Potential potential, int m_mode, int n)
      : metric_(std::move(metric)), potential_(std::move(potential)), m_mode_(m_mode), n_(n) {
    if (n < 16) throw Error(ErrorCode::kInvalidParameters, "grid needs N >= 16");
    if (m_mode < 0) throw Error(ErrorCode::kInvalidParameters, "azimuthal mode must be >= 0");
    assemble();
  }

  int m_mode() const { return m_mode_; }
  int grid_size() const { return n_; }
  double spacing() const { return h_; }
  const Metric& metric() const { return metric_; }
  const Potential& potential() const { return potential_; }

  std::span<const double> theta() const { return theta_; }
  std::span<const double> weights() const { return weight_; }

  /// Stiffness matrix entry K(i, j); zero off the tridiagonal band.
  double stiffness(std::size_t i, std::size_t j) const {
    if (i == j) return k_diag_[i];
    if (j == i + 1) return k_upper_[i];
    if (i == j + 1) return k_lower_[j];
    return 0.0;
  }

  /// max |K(i, i+1) - K(i+1, i)|; zero by construction.
  double max_asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < k_upper_.size(); ++i) worst = std::max(worst, std::abs(k_upper_[i] - k_lower_[i]));
    return worst;
  }

  const SymmetricTridiagonal& symmetric() const { return sym_; }

  /// Discrete energy sum_faces p (du)^2 / h + sum_cells W (m^2/B + V) u^2.
  double energy(std::span<const double> u) const {
    double acc = 0.0;
    for (std::size_t j = 1; j < static_cast<std::size_t>(n_); ++j) {
      const double du = u[j] - u[j - 1];
      acc += face_[j] * du * du / h_;
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_); ++i) acc += weight_[i] * cell_potential_[i] * u[i] * u[i];
    return acc;
  }

  double mass(std::span<const double> u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_); ++i) acc += weight_[i] * u[i] * u[i];
    return acc;
  }

  /// Rayleigh quotient of a vector given in the symmetrized basis (u = W^{-1/2} v).
  double rayleigh_quotient(std::span<const double> v) const {
    std::vector<double> u(v.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = v[i] / std::sqrt(weight_[i]);
    return energy(u) / mass(u);
  }

 private:
  void assemble() {
    const auto n = static_cast<std::size_t>(n_);
    h_ = std::numbers::pi / n_;
    theta_.resize(n);
    weight_.resize(n);
    cell_potential_.resize(n);
    face_.assign(n + 1, 0.0);
    const double m2 = static_cast<double>(m_mode_) * m_mode_;
    for (std::size_t i = 0; i < n; ++i) {
      const double th = (static_cast<double>(i) + 0.5) * h_;
      const double a = metric_.A(th);
      const double b = metric_.B(th);
      if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorCode::kBadMetric, "non-positive metric coefficient at theta = " + std::to_string(th));
      }
      theta_[i] = th;
      weight_[i] = std::sqrt(a * b) * h_;
      const double v = potential_(th);
      if (!std::isfinite(v)) throw Error(ErrorCode::kBadMetric, "non-finite potential");
      cell_potential_[i] = m2 / b + v;
    }
    for (std::size_t j = 1; j < n; ++j) {
      const double th = static_cast<double>(j) * h_;
      const double a = metric_.A(th);
      const double b = metric_.B(th);
      if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorCode::kBadMetric, "non-positive metric coefficient at theta = " + std::to_string(th));
      }
      face_[j] = std::sqrt(b / a);
    }

    k_diag_.resize(n);
    k_upper_.resize(n - 1);
    k_lower_.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      k_diag_[i] = (face_[i] + face_[i + 1]) / h_ + weight_[i] * cell_potential_[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) k_upper_[i] = -face_[i + 1] / h_;
    for (std::size_t i = 1; i < n; ++i) k_lower_[i - 1] = -face_[i] / h_;

    sym_.diag.resize(n);
    sym_.off.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) sym_.diag[i] = k_diag_[i] / weight_[i];
    for (std::size_t i = 0; i + 1 < n; ++i) sym_.off[i] = k_upper_[i] / std::sqrt(weight_[i] * weight_[i + 1]);
  }

  Metric metric_;
  Potential potential_;
  int m_mode_;
  int n_;
  double h_ = 0.0;
  std::vector<double> theta_, weight_, cell_potential_, face_;
  std::vector<double> k_diag_, k_upper_, k_lower_;
  SymmetricTridiagonal sym_;
};

template <AxisymmetricMetric Metric>
DiscretizedOperator<Metric> assemble(const Metric& metric, Potential potential, int m_mode, int n) {
  return DiscretizedOperator<Metric>(metric, std::move(potential), m_mode, n);
}

/// Eigenvalues of one operator at its own grid size, Rayleigh-quotient refined.
struct GridEigenvalues {
  std::vector<double> sturm;    // bisection values
  std::vector<double> refined;  // Rayleigh quotients of the inverse-iteration eigenvectors
};

template <AxisymmetricMetric Metric>
GridEigenvalues grid_eigenvalues(const DiscretizedOperator<Metric>& op, std::size_t count) {
  const auto& s = op.symmetric();
  GridEigenvalues out;
  out.sturm = lowest_eigenvalues(s, count);
  const double slack = 1e3 * std::numeric_limits<double>::epsilon() * s.norm();
  for (std::size_t k = 0; k < count; ++k) {
    const auto v = inverse_iteration(s, out.sturm[k]);
    const double rq = op.rayleigh_quotient(v);
    if (!std::isfinite(rq) || std::abs(rq - out.sturm[k]) > slack + 1e-10 * std::abs(rq)) {
      throw Error(ErrorCode::kNoConvergence, "eigenvector does not reproduce its eigenvalue");
    }
    out.refined.push_back(rq);
  }
  // The lowest eigenvalue is the minimum of the Rayleigh quotient over the
  // computed eigenbasis.
  if (!out.refined.empty()) {
    const double lowest = *std::min_element(out.refined.begin(), out.refined.end());
    if (std::abs(lowest - out.refined[0]) > 1e-12 * std::max(1.0, std::abs(lowest))) {
      throw Error(ErrorCode::kNoConvergence, "eigenvalue ordering inconsistent with Rayleigh quotients");
    }
  }
  return out;
}

/// Eigenvalues of a single azimuthal mode on grids N and 2N.
struct ModeSpectrum {
  int m_mode = 0;
  int grid_size = 0;
  std::vector<double> values;        // grid N
  std::vector<double> fine_values;   // grid 2N
  std::vector<double> extrapolated;  // Richardson, second order
  std::vector<double> error_estimate;  // |values - extrapolated|
};

/// Lowest `count` eigenvalues of `op` with a two-grid (N, 2N) Richardson
/// error estimate.
template <AxisymmetricMetric Metric>
ModeSpectrum solve(const DiscretizedOperator<Metric>& op, std::size_t count) {
  if (count == 0 || count > static_cast<std::size_t>(op.grid_size()) / 4) {
    throw Error(ErrorCode::kInvalidParameters, "count must be in [1, N/4]");
  }
  const auto fine = assemble(op.metric(), op.potential(), op.m_mode(), 2 * op.grid_size());
  const auto coarse_vals = grid_eigenvalues(op, count);
  const auto fine_vals = grid_eigenvalues(fine, count);
  ModeSpectrum out;
  out.m_mode = op.m_mode();
  out.grid_size = op.grid_size();
  out.values = coarse_vals.refined;
  out.fine_values = fine_vals.refined;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = out.fine_values[k] + (out.fine_values[k] - out.values[k]) / 3.0;
    out.extrapolated.push_back(x);
    out.error_estimate.push_back(std::abs(out.values[k] - x));
  }
  return out;
}

struct NumericEigenvalue {
  double value = 0.0;         // grid N
  double extrapolated = 0.0;  // two-grid Richardson
  double error_estimate = 0.0;
  int m_mode = 0;
  int multiplicity = 1;  // 2 for m >= 1 (modes +m and -m)
};

/// Merged spectrum over azimuthal modes 0..max_mode.
struct NumericSpectrum {
  int grid_size = 0;
  std::vector<NumericEigenvalue> merged;  // ascending by value, ties by mode
  std::vector<ModeSpectrum> modes;
  // Every eigenvalue of the operator below this bound appears in `merged`.
  double complete_below = 0.0;

  /// Values repeated by multiplicity, ascending.
  std::vector<double> expanded(bool use_extrapolated = false) const {
    std::vector<double> out;
    for (const auto& e : merged) {
      for (int i = 0; i < e.multiplicity; ++i) out.push_back(use_extrapolated ? e.extrapolated : e.value);
    }
    return out;
  }
};

/// Solves modes 0..max_mode with `count` eigenvalues each. Mode max_mode + 1
/// is probed for its lowest eigenvalue to bound completeness. Modes may run
/// concurrently; results do not depend on `jobs`.
template <AxisymmetricMetric Metric>
NumericSpectrum solve_axisymmetric(const Metric& metric, const Potential& potential, int n, int max_mode,
                                   std::size_t count, int jobs = 1) {
  if (max_mode < 0) throw Error(ErrorCode::kInvalidParameters, "max_mode must be >= 0");
  auto run = [&](int m, std::size_t c) { return solve(assemble(metric, potential, m, n), c); };

  std::vector<ModeSpectrum> modes(static_cast<std::size_t>(max_mode) + 2);
  if (jobs <= 1) {
    for (int m = 0; m <= max_mode + 1; ++m) modes[m] = run(m, m <= max_mode ? count : 1);
  } else {
    std::vector<std::future<ModeSpectrum>> pending;
    for (int m = 0; m <= max_mode + 1; ++m) {
      pending.push_back(std::async(std::launch::async, run, m, m <= max_mode ? count : 1));
    }
    for (std::size_t i = 0; i < pending.size(); ++i) modes[i] = pending[i].get();
  }

  NumericSpectrum out;
  out.grid_size = n;
  out.complete_below = modes.back().values.front();
  modes.pop_back();
  for (const auto& ms : modes) {
    out.complete_below = std::min(out.complete_below, ms.values.back());
    for (std::size_t k = 0; k < ms.values.size(); ++k) {
      out.merged.push_back({ms.values[k], ms.extrapolated[k], ms.error_estimate[k], ms.m_mode, ms.m_mode == 0 ? 1 : 2});
    }
  }
  std::stable_sort(out.merged.begin(), out.merged.end(), [](const NumericEigenvalue& x, const NumericEigenvalue& y) {
    return x.value < y.value || (x.value == y.value && x.m_mode < y.m_mode);
  });
  out.modes = std::move(modes);
  return out;
}

/// Number of negative eigenvalues with multiplicity, by Sturm counts per mode.
/// Mode m + 1 dominates mode m (extra m^2 / B), so counting stops at the
/// first mode with none.
template <AxisymmetricMetric Metric>
int numeric_index(const Metric& metric, const Potential& potential, int n, int max_mode = 64) {
  int index = 0;
  for (int m = 0; m <= max_mode; ++m) {
    const auto op = assemble(metric, potential, m, n);
    const auto below = static_cast<int>(count_below(op.symmetric(), 0.0));
    if (below == 0) return index;
    index += (m == 0 ? 1 : 2) * below;
  }
  throw Error(ErrorCode::kModeCapExceeded, "negative eigenvalues persist past the mode cap");
}

}  // namespace horizon_spectra
