#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "horizon_spectra/invariants.hpp"
#include "horizon_spectra/scan.hpp"
#include "oracles.hpp"

namespace hs = horizon_spectra;
namespace fx = oracle::fixture;

namespace {

std::string csv(const std::vector<hs::ScanRow>& rows) {
  std::ostringstream out;
  hs::write_csv(out, rows);
  return out.str();
}

}  // namespace

TEST(ParseValues, Forms) {
  EXPECT_EQ(hs::parse_values("3", "x"), std::vector<double>{3.0});
  EXPECT_EQ(hs::parse_values(" 1, 2 ,3 ", "x"), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(hs::parse_values("[0.5, 1.5]", "x"), (std::vector<double>{0.5, 1.5}));
  EXPECT_EQ(hs::parse_values("\"2\"", "x"), std::vector<double>{2.0});
  EXPECT_EQ(hs::parse_values("0:1:3", "x"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(hs::parse_values("4:9:1", "x"), std::vector<double>{4.0});
  EXPECT_TRUE(hs::parse_values("", "x").empty());
  EXPECT_TRUE(hs::parse_values("[]", "x").empty());
}

TEST(ParseValues, Errors) {
  EXPECT_THROW(hs::parse_values("abc", "x"), hs::Error);
  EXPECT_THROW(hs::parse_values("0:1", "x"), hs::Error);
  EXPECT_THROW(hs::parse_values("0:1:0", "x"), hs::Error);
  EXPECT_THROW(hs::parse_values("0:1:2.5", "x"), hs::Error);
  EXPECT_THROW(hs::parse_values("[1,2", "x"), hs::Error);
}

TEST(Config, ReadsFlatKeyValue) {
  std::istringstream in(
      "# grid\nlambda = 3\nm = [0.05, 0.1]  # two masses\nq = 0:0.1:2\na = 0\n"
      "grid_n = 64\nformat = \"json\"\nout = \"rows#1.json\"\nstrict = true\njobs = 2\n");
  hs::ScanConfig cfg;
  hs::read_config(in, cfg, "test.toml");
  EXPECT_EQ(cfg.lambda, std::vector<double>{3.0});
  EXPECT_EQ(cfg.m, (std::vector<double>{0.05, 0.1}));
  EXPECT_EQ(cfg.q, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(cfg.grid_n, 64);
  EXPECT_EQ(cfg.format, hs::OutputFormat::kJson);
  EXPECT_EQ(cfg.out, "rows#1.json");
  EXPECT_TRUE(cfg.strict);
  EXPECT_EQ(cfg.jobs, 2);
  // Flags applied afterwards override file values.
  hs::apply_setting(cfg, "grid-n", "32", "--grid-n");
  EXPECT_EQ(cfg.grid_n, 32);
}

TEST(Config, RejectsUnknownKeysWithLineNumbers) {
  std::istringstream in("lambda = 3\ntolerance = 1e-9\n");
  hs::ScanConfig cfg;
  try {
    hs::read_config(in, cfg, "c.toml");
    FAIL();
  } catch (const hs::Error& e) {
    EXPECT_EQ(e.code(), hs::ErrorCode::kBadConfig);
    EXPECT_NE(std::string(e.what()).find("c.toml:2"), std::string::npos);
  }
  std::istringstream no_eq("lambda 3\n");
  EXPECT_THROW(hs::read_config(no_eq, cfg), hs::Error);
  EXPECT_THROW(hs::apply_setting(cfg, "format", "xml", "x"), hs::Error);
  EXPECT_THROW(hs::apply_setting(cfg, "strict", "yes", "x"), hs::Error);
}

TEST(Config, Validation) {
  hs::ScanConfig cfg;
  cfg.lambda = {3.0};
  cfg.m = {0.1};
  EXPECT_NO_THROW(hs::validate(cfg));
  cfg.grid_n = 8;
  EXPECT_THROW(hs::validate(cfg), hs::Error);
  cfg.grid_n = 64;
  cfg.m = {-1.0};
  EXPECT_THROW(hs::validate(cfg), hs::Error);
  cfg.m = {0.1};
  cfg.jobs = 0;
  EXPECT_THROW(hs::validate(cfg), hs::Error);
}

TEST(ComputeRow, ChargedStaticPoint) {
  const auto row = hs::compute_row(3.0, 0.1, 0.1, 0.0, 64);
  EXPECT_TRUE(row.admissible);
  EXPECT_TRUE(row.reason.empty());
  ASSERT_TRUE(row.r_c && row.lambda1 && row.lambda2 && row.index && row.ac_margin);
  EXPECT_LE(oracle::rel_err(*row.r_c, fx::kRoots[3]), 1e-13);
  EXPECT_LE(oracle::rel_err(*row.lambda1, fx::kLambda1), 1e-12);
  EXPECT_LE(oracle::rel_err(*row.lambda2, fx::kLambda2), 1e-12);
  EXPECT_EQ(*row.index, 1);
  EXPECT_FALSE(*row.degenerate);
  EXPECT_FALSE(*row.stable_symmetrized);
  EXPECT_LE(oracle::rel_err(*row.ac_margin, fx::kMargin), 1e-12);
  EXPECT_TRUE(row.mass_window_ok);
  EXPECT_TRUE(row.mass_hypothesis_ok);
}

TEST(ComputeRow, InadmissibleRowIsEmpty) {
  const auto row = hs::compute_row(3.0, 0.5, 0.1, 0.0, 64);
  EXPECT_FALSE(row.admissible);
  EXPECT_EQ(row.reason, "MASS_OUT_OF_WINDOW");
  EXPECT_FALSE(row.r_c || row.lambda1 || row.index || row.area || row.ac_margin);
}

TEST(ComputeRow, RotatingPointUsesNumericSpectrum) {
  const auto row = hs::compute_row(3.0, 0.1, 0.1, 0.01, 128);
  ASSERT_TRUE(row.admissible);
  const double rc = fx::kRcChargedA[0];
  EXPECT_LE(oracle::rel_err(*row.r_c, rc), 1e-12);
  // Close to the static spectrum at the rotated radius.
  EXPECT_NEAR(*row.lambda1, hs::ls_eigenvalue(rc, 3.0, 0.1 / (1.0 + 1e-4), 0), 1e-3);
  EXPECT_NEAR(*row.lambda2, hs::ls_eigenvalue(rc, 3.0, 0.1 / (1.0 + 1e-4), 1), 1e-3);
  EXPECT_EQ(*row.index, 1);
}

TEST(RunScan, LexicographicOrderAndHeaderOnlyEmptyGrid) {
  hs::ScanConfig cfg;
  EXPECT_EQ(csv(hs::run_scan(cfg)),
            "Lambda,m,q,a,admissible,r_mm,r_minus,r_plus,r_c,lambda1,lambda2,index,degenerate,"
            "stable_symmetrized,area,charge,ac_margin,mass_window_ok,mass_hypothesis_ok,reason\n");
  cfg.lambda = {3.0, 1.0};
  cfg.m = {0.1, 0.05, 0.1};
  cfg.q = {0.1, 0.0};
  const auto rows = hs::run_scan(cfg);
  ASSERT_EQ(rows.size(), 8u);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto key = [](const hs::ScanRow& r) { return std::tuple(r.lambda, r.m, r.q, r.a); };
    EXPECT_LT(key(rows[i]), key(rows[i + 1]));
  }
}

TEST(RunScan, ParallelMatchesSequential) {
  hs::ScanConfig cfg;
  cfg.lambda = {1.0, 3.0};
  cfg.m = {0.05, 0.1, 0.2};
  cfg.q = {0.0, 0.1};
  cfg.a = {0.0, 0.01};
  cfg.grid_n = 32;
  const auto seq = csv(hs::run_scan(cfg));
  cfg.jobs = 4;
  EXPECT_EQ(csv(hs::run_scan(cfg)), seq);
  EXPECT_EQ(csv(hs::run_scan(cfg)), seq);
}

TEST(Output, CsvRoundTripsDoubles) {
  EXPECT_EQ(std::stod(hs::format_double(0.1)), 0.1);
  EXPECT_EQ(std::stod(hs::format_double(fx::kRoots[3])), fx::kRoots[3]);
  const auto row = hs::compute_row(3.0, 0.1, 0.1, 0.0, 64);
  const auto text = csv({row});
  const auto line = text.substr(text.find('\n') + 1);
  std::vector<std::string> cells;
  std::stringstream ss(line.substr(0, line.size() - 1));
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  cells.resize(hs::scan_columns().size());
  EXPECT_EQ(std::stod(cells[8]), *row.r_c);
  EXPECT_EQ(cells[11], "1");
  EXPECT_EQ(cells[19], "");
}

TEST(Output, JsonMirrorsColumns) {
  const auto rows = std::vector{hs::compute_row(3.0, 0.1, 0.1, 0.0, 64), hs::compute_row(3.0, 0.5, 0.1, 0.0, 64)};
  std::ostringstream out;
  hs::write_json(out, rows);
  const auto j = nlohmann::json::parse(out.str());
  ASSERT_EQ(j.size(), 2u);
  std::vector<std::string> keys;
  for (auto it = j[0].begin(); it != j[0].end(); ++it) keys.push_back(it.key());
  std::vector<std::string> cols = hs::scan_columns();
  std::sort(cols.begin(), cols.end());
  EXPECT_EQ(keys, cols);  // nlohmann::json sorts keys
  EXPECT_EQ(j[0]["r_c"].get<double>(), *rows[0].r_c);
  EXPECT_TRUE(j[1]["r_c"].is_null());
  EXPECT_EQ(j[1]["reason"], "MASS_OUT_OF_WINDOW");
}

TEST(Invariants, SeedFromEnvironment) {
  ::unsetenv("HORIZON_SPECTRA_SEED");
  EXPECT_EQ(hs::seed_from_env(), hs::kDefaultSeed);
  ::setenv("HORIZON_SPECTRA_SEED", "42", 1);
  EXPECT_EQ(hs::seed_from_env(), 42u);
  ::setenv("HORIZON_SPECTRA_SEED", "4x", 1);
  EXPECT_EQ(hs::seed_from_env(), hs::kDefaultSeed);
  ::unsetenv("HORIZON_SPECTRA_SEED");
}

TEST(Invariants, DrawsRespectBothMassBounds) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto d = hs::draw_mass_bound_parameters(rng);
    EXPECT_LE(d.lambda * d.charge * d.charge, 0.25);
    EXPECT_TRUE(hs::mass_window(d.lambda, d.charge).contains(d.m));
    EXPECT_TRUE(hs::mass_hypothesis(d.lambda, d.charge, d.m).holds);
  }
}

TEST(Invariants, SuitePassesOnSmallRun) {
  const auto results = hs::run_invariant_suite(hs::kDefaultSeed, 500);
  EXPECT_EQ(results.size(), 14u);
  for (const auto& r : results) EXPECT_TRUE(r.passed()) << r.name << ": " << r.failures << '/' << r.checked;
}
