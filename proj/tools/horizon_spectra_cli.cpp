// Command-line front end: roots, spectrum, eigsolve, area-charge, scan, check.
//
// Exit status: 0 success, 1 usage / I/O error, 2 NotAdmissible under --strict
// (and always for commands that cannot proceed without an admissible set),
// 3 when `check` finds a failing invariant.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "horizon_spectra/horizon_spectra.hpp"

namespace hs = horizon_spectra;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotAdmissible = 2;
constexpr int kExitCheckFailed = 3;

std::string num(double x) { return hs::format_double(x); }

struct PointFlags {
  double lambda = 3.0;
  double m = 0.1;
  double q = 0.0;
  double a = 0.0;
  std::optional<double> r0;
  int k = 1;
  int grid_n = 512;
  std::string format = "text";
  bool strict = false;
  int jobs = 1;
};

void add_point_flags(CLI::App* cmd, PointFlags& f, bool with_m = true) {
  cmd->add_option("--lambda", f.lambda, "cosmological constant Lambda > 0")->capture_default_str();
  if (with_m) cmd->add_option("--m", f.m, "mass parameter m > 0")->capture_default_str();
  cmd->add_option("--q", f.q, "charge parameter q >= 0")->capture_default_str();
  cmd->add_option("--format", f.format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  cmd->add_flag("--strict", f.strict, "exit 2 when the parameters are not admissible");
}

int cmd_roots(const PointFlags& f) {
  const hs::Parameters params{f.lambda, f.m, f.q, f.a};
  const auto set = hs::isolate_roots(params);
  const hs::HorizonPolynomial poly(params);
  const auto crit = hs::critical_structure(poly);
  const double charge = params.physical_charge();
  const bool has_window = f.lambda * charge * charge <= 0.25;
  const double m_max = has_window ? hs::mass_window(f.lambda, charge).m_max : 0.0;
  const bool in_window = has_window && hs::mass_window(f.lambda, charge).contains(f.m);
  const bool has_threshold = 9.0 - 4.0 * f.lambda * charge * charge >= 0.0;
  const auto hyp = has_threshold ? hs::mass_hypothesis(f.lambda, charge, f.m) : hs::MassHypothesis{};
  const char* case_name = set.horizon_case == hs::HorizonCase::kCharged           ? "charged"
                          : set.horizon_case == hs::HorizonCase::kUnchargedStatic ? "uncharged_static"
                                                                                   : "irregular";
  if (f.format == "json") {
    ordered_json j;
    j["Lambda"] = f.lambda;
    j["m"] = f.m;
    j["q"] = f.q;
    j["a"] = f.a;
    j["admissible"] = set.admissible;
    j["case"] = case_name;
    j["reason"] = set.reason ? std::string(hs::to_string(*set.reason)) : "";
    auto roots = ordered_json::array();
    for (std::size_t i = 0; i < set.roots.size(); ++i) {
      roots.push_back({{"r", set.roots[i]}, {"kind", std::string(hs::to_string(set.kinds[i]))},
                       {"residual", poly.value(set.roots[i])}});
    }
    j["roots"] = roots;
    j["min_gap"] = set.roots.size() > 1 ? ordered_json(set.min_gap) : ordered_json(nullptr);
    j["separation_tolerance"] = set.separation_tolerance;
    j["derivative_roots"] = crit.derivative_roots;
    j["inflection_points"] = crit.inflection_points;
    j["m_max"] = has_window ? ordered_json(m_max) : ordered_json(nullptr);
    j["mass_window_ok"] = in_window;
    j["mass_threshold"] = has_threshold ? ordered_json(hyp.threshold) : ordered_json(nullptr);
    j["mass_hypothesis_ok"] = has_threshold && hyp.holds;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "Lambda=" << num(f.lambda) << " m=" << num(f.m) << " q=" << num(f.q) << " a=" << num(f.a) << '\n';
    std::cout << "admissible: " << (set.admissible ? "yes" : "no") << "  case: " << case_name;
    if (set.reason) std::cout << "  reason: " << hs::to_string(*set.reason);
    std::cout << '\n';
    for (std::size_t i = 0; i < set.roots.size(); ++i) {
      std::cout << "  root " << num(set.roots[i]) << "  " << hs::to_string(set.kinds[i]) << "  residual "
                << num(poly.value(set.roots[i])) << '\n';
    }
    if (set.roots.size() > 1) {
      std::cout << "min_gap: " << num(set.min_gap) << " (distinctness tolerance " << num(set.separation_tolerance)
                << ")\n";
    }
    std::cout << "derivative roots:";
    for (double r : crit.derivative_roots) std::cout << ' ' << num(r);
    std::cout << "\ninflection points:";
    for (double r : crit.inflection_points) std::cout << ' ' << num(r);
    std::cout << '\n';
    if (has_window) {
      std::cout << "mass window: (0, " << num(m_max) << ")  m inside: " << (in_window ? "yes" : "no") << '\n';
    } else {
      std::cout << "mass window: none (Q^2 Lambda > 1/4)\n";
    }
    if (has_threshold) {
      std::cout << "mass hypothesis threshold: " << num(hyp.threshold) << "  holds: " << (hyp.holds ? "yes" : "no")
                << '\n';
    }
  }
  return f.strict && !set.admissible ? kExitNotAdmissible : kExitOk;
}

double cosmological_radius(const hs::Parameters& params, bool strict) {
  const auto set = hs::isolate_roots(params);
  if (strict) hs::require_admissible(set);
  if (!set.cosmological) throw hs::Error(hs::ErrorCode::kNotAdmissible, "no simple cosmological root");
  if (!set.admissible && set.horizon_case != hs::HorizonCase::kUnchargedStatic) {
    std::cerr << "warning: parameters not admissible ("
              << (set.reason ? hs::to_string(*set.reason) : std::string_view("ORDERING_VIOLATION"))
              << "); using the largest simple root r = " << num(*set.cosmological) << '\n';
  }
  return *set.cosmological;
}

int cmd_spectrum(const PointFlags& f, bool have_m) {
  if (f.k < 0) throw hs::Error(hs::ErrorCode::kInvalidParameters, "--k must be >= 0");
  double r0 = 0.0;
  if (f.r0) {
    r0 = *f.r0;
  } else if (have_m) {
    r0 = cosmological_radius({f.lambda, f.m, f.q, 0.0}, f.strict);
  } else {
    throw hs::Error(hs::ErrorCode::kInvalidParameters, "spectrum needs --r0 or --m");
  }
  const auto rep = hs::index_and_flags(r0, f.lambda, f.q, f.k + 1);
  const std::size_t shown = std::max<std::size_t>(static_cast<std::size_t>(f.k) + 1, 2);
  if (f.format == "json") {
    ordered_json j;
    j["r0"] = r0;
    j["Lambda"] = f.lambda;
    j["Q"] = f.q;
    auto modes = ordered_json::array();
    for (std::size_t i = 0; i < std::min(shown, rep.modes.size()); ++i) {
      modes.push_back({{"k", rep.modes[i].k}, {"value", rep.modes[i].value}, {"multiplicity", rep.modes[i].multiplicity}});
    }
    j["eigenvalues"] = modes;
    j["lambda1"] = rep.lambda1;
    j["lambda2"] = rep.lambda2;
    j["index"] = rep.index;
    j["stable_symmetrized"] = rep.stable_symmetrized;
    j["degenerate"] = rep.degenerate;
    j["unstable_full"] = rep.unstable_full;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "r0=" << num(r0) << " Lambda=" << num(f.lambda) << " Q=" << num(f.q) << '\n';
    std::cout << "k  eigenvalue  multiplicity\n";
    for (std::size_t i = 0; i < std::min(shown, rep.modes.size()); ++i) {
      std::cout << rep.modes[i].k << "  " << num(rep.modes[i].value) << "  " << rep.modes[i].multiplicity << '\n';
    }
    std::cout << "index: " << rep.index << "\nstable (symmetrized): " << (rep.stable_symmetrized ? "yes" : "no")
              << "\ndegenerate: " << (rep.degenerate ? "yes" : "no")
              << "\nunstable (full operator): " << (rep.unstable_full ? "yes" : "no") << '\n';
  }
  return kExitOk;
}

int cmd_eigsolve(const PointFlags& f, const std::vector<double>& a_values, int max_mode, bool laplacian) {
  if (a_values.size() > 1) {
    hs::SweepOptions opt;
    opt.grid_n = f.grid_n;
    opt.jobs = f.jobs;
    const auto rep = hs::perturbation_sweep(f.lambda, f.m, f.q, a_values, opt);
    if (f.format == "json") {
      ordered_json j;
      j["Lambda"] = rep.lambda;
      j["m"] = rep.m;
      j["q"] = rep.q;
      j["frozen_potential"] = rep.frozen_potential;
      auto rows = ordered_json::array();
      for (const auto& e : rep.entries) {
        ordered_json r;
        r["a"] = e.a;
        r["r_c"] = e.r_c;
        r["residual"] = e.residual;
        r["four_root_admissible"] = e.four_root_admissible;
        r["lambdas"] = e.lambdas;
        r["error_estimates"] = e.error_estimates;
        r["signs_persist"] = e.signs_persist;
        r["kds_certificate"] = e.kds_certificate ? ordered_json(*e.kds_certificate) : ordered_json(nullptr);
        rows.push_back(r);
      }
      j["entries"] = rows;
      j["sign_persistence_limit"] =
          rep.sign_persistence_limit ? ordered_json(*rep.sign_persistence_limit) : ordered_json(nullptr);
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "frozen potential V = " << num(rep.frozen_potential) << " (r_c(0) = " << num(rep.r_c0) << ")\n";
      std::cout << "a,r_c,lambda1,lambda2,lambda3,lambda4,signs_persist,four_root_admissible\n";
      for (const auto& e : rep.entries) {
        std::cout << num(e.a) << ',' << num(e.r_c);
        for (double l : e.lambdas) std::cout << ',' << num(l);
        std::cout << ',' << (e.signs_persist ? 1 : 0) << ',' << (e.four_root_admissible ? 1 : 0) << '\n';
      }
      if (rep.sign_persistence_limit) {
        std::cout << "signs persist through a = " << num(*rep.sign_persistence_limit) << '\n';
      } else {
        std::cout << "signs do not persist at the first swept a\n";
      }
    }
    return kExitOk;
  }

  const double a = a_values.empty() ? 0.0 : a_values.front();
  const hs::Parameters params{f.lambda, f.m, f.q, a};
  double r0 = 0.0;
  if (f.r0) {
    r0 = *f.r0;
  } else {
    r0 = cosmological_radius(params, f.strict);
  }
  const double charge = params.physical_charge();
  const hs::CrossSectionMetric metric(r0, a, f.lambda);
  const double v = laplacian ? 0.0 : hs::static_potential(r0, f.lambda, charge);
  const auto spec = hs::solve_axisymmetric(metric, hs::constant_potential(v), f.grid_n, max_mode,
                                           static_cast<std::size_t>(std::max(1, f.k)), f.jobs);
  if (f.format == "json") {
    ordered_json j;
    j["r0"] = r0;
    j["a"] = a;
    j["potential"] = v;
    j["grid_n"] = f.grid_n;
    j["complete_below"] = spec.complete_below;
    auto rows = ordered_json::array();
    for (const auto& e : spec.merged) {
      rows.push_back({{"m_mode", e.m_mode}, {"multiplicity", e.multiplicity}, {"value", e.value},
                      {"extrapolated", e.extrapolated}, {"error_estimate", e.error_estimate}});
    }
    j["eigenvalues"] = rows;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "r0=" << num(r0) << " a=" << num(a) << " V=" << num(v) << " N=" << f.grid_n
              << " complete below " << num(spec.complete_below) << '\n';
    std::cout << "m_mode,multiplicity,value,extrapolated,error_estimate\n";
    for (const auto& e : spec.merged) {
      std::cout << e.m_mode << ',' << e.multiplicity << ',' << num(e.value) << ',' << num(e.extrapolated) << ','
                << num(e.error_estimate) << '\n';
    }
  }
  return kExitOk;
}

void print_area_charge(const hs::AreaChargeReport& r, const std::string& format) {
  if (format == "json") {
    ordered_json j;
    j["Lambda"] = r.lambda;
    j["area"] = r.area;
    j["charge"] = r.charge;
    j["margin"] = r.margin;
    j["holds"] = r.holds;
    j["rigidity"] = r.rigidity;
    j["charge_bound_ok"] = r.charge_bound_ok;
    if (r.area_window) {
      j["area_window"] = {r.area_window->lower, r.area_window->upper};
    } else {
      j["area_window"] = nullptr;
    }
    if (r.rigidity) j["rigidity_interpretation"] = std::string(hs::kRigidityInterpretation);
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << "margin: " << num(r.margin) << "\nholds: " << (r.holds ? "yes" : "no")
            << "\nrigidity: " << (r.rigidity ? "yes" : "no") << "\ncharge bound Q^2 <= 9/(4 Lambda): "
            << (r.charge_bound_ok ? "yes" : "no") << '\n';
  if (r.area_window) {
    std::cout << "area window: [" << num(r.area_window->lower) << ", " << num(r.area_window->upper) << "]\n";
  }
  if (r.rigidity) std::cout << "rigidity case: " << hs::kRigidityInterpretation << '\n';
}

int cmd_area_charge(const PointFlags& f, std::optional<double> area, std::optional<double> charge,
                    const std::string& catalog, bool have_m) {
  if (!catalog.empty()) {
    std::ifstream in(catalog);
    if (!in) throw std::runtime_error("cannot open catalog '" + catalog + "'");
    const auto records = hs::read_catalog(in);
    std::cout << "Lambda,area,charge,margin,holds,rigidity,charge_bound_ok,window_lower,window_upper\n";
    for (const auto& rec : records) {
      const auto r = hs::check(rec.lambda, rec.area, rec.charge);
      std::cout << num(r.lambda) << ',' << num(r.area) << ',' << num(r.charge) << ',' << num(r.margin) << ','
                << (r.holds ? 1 : 0) << ',' << (r.rigidity ? 1 : 0) << ',' << (r.charge_bound_ok ? 1 : 0) << ','
                << (r.area_window ? num(r.area_window->lower) : "") << ','
                << (r.area_window ? num(r.area_window->upper) : "") << '\n';
    }
    return kExitOk;
  }
  if (area) {
    print_area_charge(hs::check(f.lambda, *area, charge.value_or(0.0)), f.format);
    return kExitOk;
  }
  if (!have_m) throw hs::Error(hs::ErrorCode::kInvalidParameters, "area-charge needs --area, --catalog or --m");
  const auto cc = hs::horizon_crosscheck({f.lambda, f.m, f.q, 0.0});
  if (f.format == "json") {
    ordered_json j;
    j["r_c"] = cc.r_c;
    j["four_root_admissible"] = cc.four_root_admissible;
    j["margin"] = cc.report.margin;
    j["lambda2"] = cc.lambda2;
    j["spectral_margin"] = cc.spectral_margin;
    j["discrepancy"] = cc.discrepancy;
    j["identity_holds"] = cc.identity_holds;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "r_c: " << num(cc.r_c) << "  area 4 pi r_c^2: " << num(cc.report.area) << '\n';
    print_area_charge(cc.report, f.format);
    std::cout << "lambda2: " << num(cc.lambda2) << "\n4 pi r_c^2 lambda2: " << num(cc.spectral_margin)
              << "\n|margin - 4 pi r_c^2 lambda2|: " << num(cc.discrepancy) << '\n';
  }
  return f.strict && !cc.four_root_admissible ? kExitNotAdmissible : kExitOk;
}

int cmd_scan(const std::string& config_path, const std::vector<std::pair<std::string, std::string>>& overrides,
             bool strict_flag) {
  hs::ScanConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config '" + config_path + "'");
    hs::read_config(in, cfg, config_path);
  }
  for (const auto& [key, value] : overrides) hs::apply_setting(cfg, key, value, "--" + key);
  if (strict_flag) cfg.strict = true;
  if (cfg.lambda.empty() && cfg.m.empty() && config_path.empty() && overrides.empty()) {
    throw hs::Error(hs::ErrorCode::kBadConfig, "scan needs --lambda and --m (or --config)");
  }
  const auto rows = hs::run_scan(cfg);
  if (cfg.out.empty()) {
    hs::write_rows(std::cout, rows, cfg.format);
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + cfg.out + "'");
    hs::write_rows(out, rows, cfg.format);
    if (!out) throw std::runtime_error("write to '" + cfg.out + "' failed");
  }
  if (cfg.strict) {
    for (const auto& r : rows) {
      if (!r.admissible) return kExitNotAdmissible;
    }
  }
  return kExitOk;
}

int cmd_check(long draws) {
  const auto seed = hs::seed_from_env();
  std::cout << "seed " << seed << ", " << draws << " draws\n";
  bool ok = true;
  for (const auto& r : hs::run_invariant_suite(seed, draws)) {
    std::cout << (r.passed() ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.checked << " checked, " << r.failures
              << " failures)\n";
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Horizon spectra: roots, stability spectrum and area-charge checks for Kerr-Newman-de Sitter horizons"};
  app.require_subcommand(1);

  PointFlags roots_f, spec_f, eig_f, ac_f;

  auto* roots = app.add_subcommand("roots", "isolate and classify the horizon roots");
  add_point_flags(roots, roots_f);
  roots->add_option("--a", roots_f.a, "rotation parameter a >= 0")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "closed-form spectrum of L_s(0) at a horizon radius");
  add_point_flags(spectrum, spec_f);
  spectrum->add_option("--r0", spec_f.r0, "horizon radius (default: r_c from --m)");
  spectrum->add_option("--k", spec_f.k, "highest mode index to list")->capture_default_str();

  auto* eigsolve = app.add_subcommand("eigsolve", "numerical spectrum on the horizon cross-section");
  add_point_flags(eigsolve, eig_f);
  std::string eig_a = "0";
  int max_mode = 2;
  bool laplacian = false;
  eig_f.k = 3;
  eigsolve->add_option("--a", eig_a, "rotation parameter; a list a1,a2,... runs the perturbation sweep")
      ->capture_default_str();
  eigsolve->add_option("--r0", eig_f.r0, "horizon radius (default: r_c of Delta_r)");
  eigsolve->add_option("--k", eig_f.k, "eigenvalues per azimuthal mode")->capture_default_str();
  eigsolve->add_option("--modes", max_mode, "highest azimuthal mode")->capture_default_str();
  eigsolve->add_option("--grid-n", eig_f.grid_n, "grid cells in theta")->capture_default_str();
  eigsolve->add_option("--jobs", eig_f.jobs, "worker threads")->capture_default_str();
  eigsolve->add_flag("--laplacian", laplacian, "drop the potential (pure Laplace-Beltrami)");

  auto* area_charge = app.add_subcommand("area-charge", "area-charge inequality and horizon cross-check");
  add_point_flags(area_charge, ac_f);
  std::optional<double> area, charge;
  std::string catalog;
  area_charge->add_option("--area", area, "surface area |Sigma|");
  area_charge->add_option("--charge", charge, "surface charge Q(Sigma)");
  area_charge->add_option("--catalog", catalog, "CSV with Lambda, area, charge columns");

  auto* scan = app.add_subcommand("scan", "parameter-grid scan to CSV or JSON");
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  bool scan_strict = false;
  scan->add_option("--config", config_path, "flat key = value config file");
  for (const char* key : {"lambda", "m", "q", "a", "grid-n", "out", "format", "jobs"}) {
    const std::string k = key;
    scan->add_option_function<std::string>(
        "--" + k, [&overrides, k](const std::string& v) { overrides.emplace_back(k, v); },
        "value, list v1,v2 or range start:stop:count");
  }
  scan->add_flag("--strict", scan_strict, "exit 2 if any row is not admissible");

  auto* check = app.add_subcommand("check", "run the randomized invariant suite (seed: HORIZON_SPECTRA_SEED)");
  long draws = 10000;
  check->add_option("--draws", draws, "random draws per invariant")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*roots) return cmd_roots(roots_f);
    if (*spectrum) return cmd_spectrum(spec_f, spectrum->count("--m") > 0);
    if (*eigsolve) {
      const auto a_values = hs::parse_values(eig_a, "--a");
      return cmd_eigsolve(eig_f, a_values, max_mode, laplacian);
    }
    if (*area_charge) return cmd_area_charge(ac_f, area, charge, catalog, area_charge->count("--m") > 0);
    if (*scan) return cmd_scan(config_path, overrides, scan_strict);
    if (*check) return cmd_check(draws);
  } catch (const hs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == hs::ErrorCode::kNotAdmissible ? kExitNotAdmissible : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
