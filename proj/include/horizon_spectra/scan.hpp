#pragma once

// Parameter-grid scans: configuration, per-point rows, and CSV / JSON output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "horizon_spectra/area_charge.hpp"
#include "horizon_spectra/axisym_eigensolver.hpp"
#include "horizon_spectra/error.hpp"
#include "horizon_spectra/horizon_geometry.hpp"
#include "horizon_spectra/horizon_roots.hpp"
#include "horizon_spectra/mots_spectrum.hpp"

namespace horizon_spectra {

enum class OutputFormat { kCsv, kJson };

struct ScanConfig {
  std::vector<double> lambda;
  std::vector<double> m;
  std::vector<double> q{0.0};
  std::vector<double> a{0.0};
  int grid_n = 128;
  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::kCsv;
  bool strict = false;
  int jobs = 1;
};

struct ScanRow {
  double lambda = 0.0;
  double m = 0.0;
  double q = 0.0;
  double a = 0.0;
  bool admissible = false;
  std::optional<double> r_mm, r_minus, r_plus, r_c;
  std::optional<double> lambda1, lambda2;
  std::optional<int> index;
  std::optional<bool> degenerate, stable_symmetrized;
  std::optional<double> area, charge, ac_margin;
  bool mass_window_ok = false;
  bool mass_hypothesis_ok = false;
  std::string reason;
};

inline const std::vector<std::string>& scan_columns() {
  static const std::vector<std::string> cols = {
      "Lambda", "m",      "q",          "a",    "admissible", "r_mm",     "r_minus",
      "r_plus", "r_c",    "lambda1",    "lambda2", "index",   "degenerate", "stable_symmetrized",
      "area",   "charge", "ac_margin",  "mass_window_ok", "mass_hypothesis_ok", "reason"};
  return cols;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kBadConfig, where + ": expected a number, got '" + t + "'");
  }
}

inline int parse_int(const std::string& text, const std::string& where) {
  const double v = parse_number(text, where);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(ErrorCode::kBadConfig, where + ": expected an integer");
  return static_cast<int>(v);
}

}  // namespace detail

/// Parses "v", "v1,v2,...", "[v1, v2]" or "start:stop:count" (count >= 1,
/// inclusive linspace). An empty string is an empty list.
inline std::vector<double> parse_values(const std::string& text, const std::string& where) {
  std::string t = detail::trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw Error(ErrorCode::kBadConfig, where + ": unterminated list");
    t = detail::trim(t.substr(1, t.size() - 2));
  }
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = detail::trim(t.substr(1, t.size() - 2));
  std::vector<double> out;
  if (t.empty()) return out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw Error(ErrorCode::kBadConfig, where + ": range must be start:stop:count");
    const double start = detail::parse_number(parts[0], where);
    const double stop = detail::parse_number(parts[1], where);
    const int count = detail::parse_int(parts[2], where);
    if (count < 1) throw Error(ErrorCode::kBadConfig, where + ": range resolution must be >= 1");
    for (int i = 0; i < count; ++i) {
      out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    }
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(detail::parse_number(item, where));
  return out;
}

inline OutputFormat parse_format(const std::string& text) {
  std::string t = detail::trim(text);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
  if (t == "csv") return OutputFormat::kCsv;
  if (t == "json") return OutputFormat::kJson;
  throw Error(ErrorCode::kBadConfig, "format must be csv or json, got '" + t + "'");
}

/// Applies one key/value pair. Unknown keys are rejected.
inline void apply_setting(ScanConfig& cfg, const std::string& key, const std::string& value,
                          const std::string& where) {
  if (key == "lambda" || key == "Lambda") {
    cfg.lambda = parse_values(value, where);
  } else if (key == "m") {
    cfg.m = parse_values(value, where);
  } else if (key == "q") {
    cfg.q = parse_values(value, where);
  } else if (key == "a") {
    cfg.a = parse_values(value, where);
  } else if (key == "grid_n" || key == "grid-n") {
    cfg.grid_n = detail::parse_int(value, where);
  } else if (key == "out") {
    std::string t = detail::trim(value);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    cfg.out = t;
  } else if (key == "format") {
    cfg.format = parse_format(value);
  } else if (key == "strict") {
    const std::string t = detail::trim(value);
    if (t != "true" && t != "false") throw Error(ErrorCode::kBadConfig, where + ": strict must be true or false");
    cfg.strict = t == "true";
  } else if (key == "jobs") {
    cfg.jobs = detail::parse_int(value, where);
  } else {
    throw Error(ErrorCode::kBadConfig, where + ": unknown key '" + key + "'");
  }
}

/// Flat `key = value` file (TOML subset): comments start with '#'.
inline void read_config(std::istream& in, ScanConfig& cfg, const std::string& name = "config") {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kBadConfig, where + ": expected key = value");
    apply_setting(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1), where);
  }
}

inline void validate(const ScanConfig& cfg) {
  auto all = [](const std::vector<double>& v, auto pred) { return std::all_of(v.begin(), v.end(), pred); };
  if (!all(cfg.lambda, [](double x) { return x > 0.0; })) throw Error(ErrorCode::kBadConfig, "lambda values must be > 0");
  if (!all(cfg.m, [](double x) { return x > 0.0; })) throw Error(ErrorCode::kBadConfig, "m values must be > 0");
  if (!all(cfg.q, [](double x) { return x >= 0.0; })) throw Error(ErrorCode::kBadConfig, "q values must be >= 0");
  if (!all(cfg.a, [](double x) { return x >= 0.0; })) throw Error(ErrorCode::kBadConfig, "a values must be >= 0");
  if (cfg.grid_n < 16) throw Error(ErrorCode::kBadConfig, "grid_n must be >= 16");
  if (cfg.jobs < 1) throw Error(ErrorCode::kBadConfig, "jobs must be >= 1");
}

/// Analysis of one grid point.
inline ScanRow compute_row(double lambda, double m, double q, double a, int grid_n) {
  ScanRow row;
  row.lambda = lambda;
  row.m = m;
  row.q = q;
  row.a = a;
  const Parameters params{lambda, m, q, a};
  validate(params);
  const double charge = params.physical_charge();
  const double t = lambda * charge * charge;
  row.mass_window_ok = t <= 0.25 && mass_window(lambda, charge).contains(m);
  row.mass_hypothesis_ok = 9.0 - 4.0 * t >= 0.0 && mass_hypothesis(lambda, charge, m).holds;

  const auto set = isolate_roots(params);
  const bool analysable = set.admissible || set.horizon_case == HorizonCase::kUnchargedStatic;
  if (!analysable) {
    row.reason = set.reason ? std::string(to_string(*set.reason)) : "ORDERING_VIOLATION";
    return row;
  }
  row.admissible = true;
  row.r_mm = set.r_mm();
  row.r_minus = set.r_minus();
  row.r_plus = set.r_plus();
  row.r_c = set.r_c();
  const double rc = set.r_c();
  row.area = 4.0 * std::numbers::pi * (rc * rc + a * a) / params.xi();
  row.charge = charge;
  row.ac_margin = area_charge_margin(lambda, *row.area, charge);

  if (a == 0.0) {
    const auto rep = index_and_flags(rc, lambda, charge);
    row.lambda1 = rep.lambda1;
    row.lambda2 = rep.lambda2;
    row.index = rep.index;
    row.degenerate = rep.degenerate;
    row.stable_symmetrized = rep.stable_symmetrized;
  } else {
    const CrossSectionMetric metric(rc, a, lambda);
    const Potential potential = constant_potential(static_potential(rc, lambda, charge));
    const auto spec = solve_axisymmetric(metric, potential, grid_n, 1, 2);
    const auto values = spec.expanded(true);
    row.lambda1 = values.at(0);
    row.lambda2 = values.at(1);
    row.index = numeric_index(metric, potential, grid_n);
    const double tol = 1e-10 * std::max(1.0, std::abs(values[1] - values[0]));
    auto near_zero = [&](const NumericEigenvalue& e) { return std::abs(e.extrapolated) <= std::max(tol, e.error_estimate); };
    row.degenerate = near_zero(spec.merged[0]) || near_zero(spec.merged[1]);
    row.stable_symmetrized = *row.lambda1 >= 0.0;
  }
  return row;
}

/// Grid in lexicographic (Lambda, m, q, a) order; rows do not depend on `jobs`.
inline std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
  validate(cfg);
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto ls = sorted(cfg.lambda), ms = sorted(cfg.m), qs = sorted(cfg.q), as = sorted(cfg.a);
  struct Point {
    double lambda, m, q, a;
  };
  std::vector<Point> points;
  for (double l : ls)
    for (double mm : ms)
      for (double qq : qs)
        for (double aa : as) points.push_back({l, mm, qq, aa});

  std::vector<ScanRow> rows(points.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < points.size(); i += stride) {
      const auto& p = points[i];
      rows[i] = compute_row(p.lambda, p.m, p.q, p.a, cfg.grid_n);
    }
  };
  const auto jobs = static_cast<std::size_t>(std::max(1, cfg.jobs));
  if (jobs == 1 || points.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
      threads.emplace_back([&, t] {
        try {
          work(t, jobs);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return rows;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  const auto& cols = scan_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  auto num = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto flag = [](const std::optional<bool>& v) { return v ? std::string(*v ? "1" : "0") : std::string(); };
  for (const auto& r : rows) {
    out << format_double(r.lambda) << ',' << format_double(r.m) << ',' << format_double(r.q) << ','
        << format_double(r.a) << ',' << (r.admissible ? "1" : "0") << ',' << num(r.r_mm) << ',' << num(r.r_minus)
        << ',' << num(r.r_plus) << ',' << num(r.r_c) << ',' << num(r.lambda1) << ',' << num(r.lambda2) << ','
        << (r.index ? std::to_string(*r.index) : std::string()) << ',' << flag(r.degenerate) << ','
        << flag(r.stable_symmetrized) << ',' << num(r.area) << ',' << num(r.charge) << ',' << num(r.ac_margin)
        << ',' << (r.mass_window_ok ? "1" : "0") << ',' << (r.mass_hypothesis_ok ? "1" : "0") << ',' << r.reason
        << '\n';
  }
}

inline nlohmann::ordered_json to_json(const ScanRow& r) {
  auto opt = [](const auto& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["Lambda"] = r.lambda;
  j["m"] = r.m;
  j["q"] = r.q;
  j["a"] = r.a;
  j["admissible"] = r.admissible;
  j["r_mm"] = opt(r.r_mm);
  j["r_minus"] = opt(r.r_minus);
  j["r_plus"] = opt(r.r_plus);
  j["r_c"] = opt(r.r_c);
  j["lambda1"] = opt(r.lambda1);
  j["lambda2"] = opt(r.lambda2);
  j["index"] = opt(r.index);
  j["degenerate"] = opt(r.degenerate);
  j["stable_symmetrized"] = opt(r.stable_symmetrized);
  j["area"] = opt(r.area);
  j["charge"] = opt(r.charge);
  j["ac_margin"] = opt(r.ac_margin);
  j["mass_window_ok"] = r.mass_window_ok;
  j["mass_hypothesis_ok"] = r.mass_hypothesis_ok;
  j["reason"] = r.reason;
  return j;
}

inline void write_json(std::ostream& out, const std::vector<ScanRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

inline void write_rows(std::ostream& out, const std::vector<ScanRow>& rows, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    write_json(out, rows);
  } else {
    write_csv(out, rows);
  }
}

}  // namespace horizon_spectra
