#pragma once

// Area-charge inequality for an index-one spherical MOTS,
//
//   Lambda |Sigma| + 16 pi^2 Q^2 / |Sigma| <= 12 pi,
//
// its consequences Q^2 <= 9 / (4 Lambda) and the area window, and the exact
// link to lambda2(L_s(0)) at the cosmological horizon.

#include <cmath>
#include <istream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "horizon_spectra/error.hpp"
#include "horizon_spectra/horizon_roots.hpp"
#include "horizon_spectra/mots_spectrum.hpp"

namespace horizon_spectra {

inline constexpr std::string_view kRigidityInterpretation =
    "equality: chi_+ vanishes identically, E = c nu on Sigma with c constant, "
    "and Sc_g = 2 Lambda + 2 c^2 along Sigma";

struct AreaWindow {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double area, double rel_slack = 0.0) const {
    return area >= lower * (1.0 - rel_slack) && area <= upper * (1.0 + rel_slack);
  }
};

struct AreaChargeReport {
  double lambda = 0.0;
  double area = 0.0;
  double charge = 0.0;
  double margin = 0.0;  // 12 pi - Lambda |Sigma| - 16 pi^2 Q^2 / |Sigma|
  bool holds = false;
  bool rigidity = false;
  bool charge_bound_ok = false;
  std::optional<AreaWindow> area_window;  // empty when 9 - 4 Lambda Q^2 < 0
};

inline double area_charge_margin(double lambda, double area, double charge) {
  const double pi = std::numbers::pi;
  return 12.0 * pi - lambda * area - 16.0 * pi * pi * charge * charge / area;
}

inline double rigidity_tolerance() { return 1e-10 * 12.0 * std::numbers::pi; }

inline AreaChargeReport check(double lambda, double area, double charge) {
  if (!(lambda > 0.0) || !(area > 0.0) || !std::isfinite(charge)) {
    throw Error(ErrorCode::kInvalidParameters, "area-charge check needs Lambda > 0 and area > 0");
  }
  AreaChargeReport r;
  r.lambda = lambda;
  r.area = area;
  r.charge = charge;
  r.margin = area_charge_margin(lambda, area, charge);
  r.rigidity = std::abs(r.margin) <= rigidity_tolerance();
  r.holds = r.margin >= 0.0 || r.rigidity;
  r.charge_bound_ok = charge * charge <= 9.0 / (4.0 * lambda);
  const double d = 9.0 - 4.0 * lambda * charge * charge;
  if (d >= 0.0) {
    const double s = std::sqrt(d);
    const double f = 2.0 * std::numbers::pi / lambda;
    r.area_window = AreaWindow{f * (3.0 - s), f * (3.0 + s)};
  }
  return r;
}

/// Margin at the cosmological horizon against 4 pi r_c^2 lambda2(L_s(0)).
struct HorizonCrosscheck {
  double r_c = 0.0;
  bool four_root_admissible = false;
  AreaChargeReport report;
  double lambda2 = 0.0;
  double spectral_margin = 0.0;  // 4 pi r_c^2 lambda2
  double discrepancy = 0.0;      // |margin - spectral_margin|
  bool identity_holds = false;   // discrepancy <= 1e-10 * 12 pi
};

/// Requires a = 0 and a simple cosmological root. Both the charged four-root
/// pattern and the static uncharged case qualify; four-root admissibility is
/// reported, not demanded.
inline HorizonCrosscheck horizon_crosscheck(const Parameters& params) {
  validate(params);
  if (params.a != 0.0) throw Error(ErrorCode::kInvalidParameters, "horizon_crosscheck needs a = 0");
  const auto set = isolate_roots(params);
  if (!set.cosmological) throw Error(ErrorCode::kNotAdmissible, "no simple cosmological root");
  HorizonCrosscheck out;
  out.r_c = *set.cosmological;
  out.four_root_admissible = set.admissible;
  const double area = 4.0 * std::numbers::pi * out.r_c * out.r_c;
  out.report = check(params.lambda, area, params.q);
  out.lambda2 = ls_eigenvalue(out.r_c, params.lambda, params.q, 1);
  out.spectral_margin = area * out.lambda2;
  out.discrepancy = std::abs(out.report.margin - out.spectral_margin);
  out.identity_holds = out.discrepancy <= rigidity_tolerance();
  return out;
}

struct CatalogRecord {
  double lambda = 0.0;
  double area = 0.0;
  double charge = 0.0;
};

/// Reads a CSV catalog with a header naming Lambda, area and charge columns
/// (any order, extra columns ignored).
inline std::vector<CatalogRecord> read_catalog(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kBadConfig, "catalog is empty");
  const auto header = split(line);
  int col_lambda = -1, col_area = -1, col_charge = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    if (header[i] == "Lambda" || header[i] == "lambda") col_lambda = i;
    if (header[i] == "area") col_area = i;
    if (header[i] == "charge") col_charge = i;
  }
  if (col_lambda < 0 || col_area < 0 || col_charge < 0) {
    throw Error(ErrorCode::kBadConfig, "catalog header must name Lambda, area, charge");
  }
  std::vector<CatalogRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    auto number = [&](int col) {
      if (col >= static_cast<int>(cells.size())) {
        throw Error(ErrorCode::kBadConfig, "catalog line " + std::to_string(line_no) + ": missing column");
      }
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[col], &used);
        if (used != cells[col].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::exception&) {
        throw Error(ErrorCode::kBadConfig,
                    "catalog line " + std::to_string(line_no) + ": bad number '" + cells[col] + "'");
      }
    };
    out.push_back({number(col_lambda), number(col_area), number(col_charge)});
  }
  return out;
}

}  // namespace horizon_spectra
