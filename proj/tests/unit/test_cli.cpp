#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tdem/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "tdem");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tdem::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "tdem_cli_test" / name;
  fs::remove_all(p);
  return p;
}

std::string config_path(const std::string& name) { return std::string(TDEM_SOURCE_DIR) + "/configs/" + name; }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(tdem::io::read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else cell += c;
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(tdem::io::read_file(p)); }

TEST(Cli, ValidateDefaults) {
  const auto dir = scratch("validate");
  const auto r = run({"validate", "--output", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir / "validate_report.csv");
  ASSERT_GT(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"check", "value", "threshold", "pass"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][3], "true") << rows[i][0];
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST(Cli, ValidateIsDeterministic) {
  const auto a = scratch("validate_a"), b = scratch("validate_b");
  ASSERT_EQ(run({"validate", "--quiet", "--output", a.string()}).code, 0);
  ASSERT_EQ(run({"validate", "--quiet", "--output", b.string()}).code, 0);
  EXPECT_EQ(tdem::io::read_file(a / "validate_report.csv"), tdem::io::read_file(b / "validate_report.csv"));
}

TEST(Cli, SimulateAgreesWithRwa) {
  const auto dir = scratch("consistency");
  const auto cfg = config_path("resonant_vacuum.json");
  ASSERT_EQ(run({"simulate", "--config", cfg, "--output", dir.string(), "--jobs", "2"}).code, 0);
  ASSERT_EQ(run({"rwa", "--config", cfg, "--output", dir.string()}).code, 0);
  const auto sim = read_csv(dir / "timeseries.csv");
  const auto rwa = read_csv(dir / "rwa.csv");
  EXPECT_EQ(sim[0], (std::vector<std::string>{"t", "mode_index", "lambda", "re_u", "im_u", "re_v", "im_v", "n_photons",
                                              "symplectic_residual"}));
  EXPECT_EQ(rwa[0], (std::vector<std::string>{"t", "r", "n_lambda0", "n_lambda1", "n_lambda2", "n_lambda3", "n_total"}));
  const auto& last = rwa.back();
  int checked = 0;
  for (const auto& row : sim) {
    if (row[0] != last[0] || row[1] != "(1,0,0)") continue;
    const double expected = std::stod(last[2 + std::stoi(row[2])]);
    EXPECT_NEAR(std::stod(row[7]), expected, 0.05 * expected);
    ++checked;
  }
  EXPECT_EQ(checked, 4);
}

TEST(Cli, SimulateIsBitDeterministic) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto cfg = config_path("resonant_thermal.json");
  ASSERT_EQ(run({"simulate", "--config", cfg, "--output", a.string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--config", cfg, "--output", b.string(), "--jobs", "3"}).code, 0);
  const auto ma = read_json(a / "manifest.json"), mb = read_json(b / "manifest.json");
  ASSERT_EQ(ma["outputs"].size(), 2u);
  EXPECT_EQ(ma["outputs"], mb["outputs"]);
  for (const auto& o : ma["outputs"]) {
    EXPECT_EQ(o["sha256"], tdem::io::sha256_file(a / o["path"].get<std::string>()));
  }
  EXPECT_EQ(ma["subcommand"], "simulate");
  EXPECT_EQ(ma["tool_version"], TDEM_VERSION);
  EXPECT_TRUE(ma["wall_time_s"].is_number());
}

TEST(Cli, SweepWritesPerValueRuns) {
  const auto dir = scratch("sweep");
  const auto r = run({"sweep", "--param", "delta", "--values", "1e-4,1e-3,1e-2", "--output", dir.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  int manifests = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) {
      EXPECT_TRUE(fs::exists(entry.path() / "manifest.json"));
      EXPECT_TRUE(fs::exists(entry.path() / "timeseries.csv"));
      ++manifests;
    }
  }
  EXPECT_EQ(manifests, 3);
  const auto summary = read_csv(dir / "summary.csv");
  EXPECT_EQ(summary[0], (std::vector<std::string>{"value", "total_N", "sigma"}));
  EXPECT_EQ(summary.size(), 4u);
  EXPECT_EQ(read_json(dir / "manifest.json")["outputs"].size(), 4u);
}

TEST(Cli, SweepFindsResonance) {
  const auto dir = scratch("sweep_omega");
  ASSERT_EQ(run({"sweep", "--param", "medium.omega", "--values", "0.97,0.99,1.0,1.01,1.03", "--output", dir.string(),
                 "--quiet", "--jobs", "2"})
                .code,
            0);
  const auto rows = read_csv(dir / "summary.csv");
  std::size_t best = 1;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][1]) > std::stod(rows[best][1])) best = i;
  EXPECT_EQ(std::stod(rows[best][0]), 1.0);
}

TEST(Cli, SweepWithFixedSqueezeCollapses) {
  const auto dir = scratch("sweep_fix_r");
  ASSERT_EQ(run({"sweep", "--param", "delta", "--values", "1e-4,1e-3,1e-2", "--fix-r", "1", "--output", dir.string(),
                 "--quiet"})
                .code,
            0);
  const double expected = 4.0 * std::sinh(1.0) * std::sinh(1.0);
  const auto rows = read_csv(dir / "summary.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]), expected, 0.02 * expected);
}

TEST(Cli, SweepErrors) {
  const auto dir = scratch("sweep_err");
  EXPECT_EQ(run({"sweep", "--param", "delta", "--values", "", "--output", dir.string()}).code, tdem::cli::kUsage);
  EXPECT_EQ(run({"sweep", "--param", "delta", "--values", "1,abc", "--output", dir.string()}).code, tdem::cli::kUsage);
  const auto r = run({"sweep", "--param", "run.modes", "--values", "1", "--output", dir.string()});
  EXPECT_EQ(r.code, tdem::cli::kConfig);
  EXPECT_EQ(nlohmann::json::parse(r.err)["code"], "config_error");
  EXPECT_EQ(run({"sweep", "--param", "nothing", "--values", "1", "--output", dir.string()}).code, tdem::cli::kConfig);
}

TEST(Cli, ErrorCodes) {
  const auto dir = scratch("errors");
  auto r = run({"bogus"});
  EXPECT_EQ(r.code, tdem::cli::kUsage);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["code"], "unknown_subcommand");
  EXPECT_TRUE(j.contains("message"));
  EXPECT_TRUE(j.contains("context"));
  EXPECT_EQ(run({}).code, tdem::cli::kUsage);
  EXPECT_EQ(run({"simulate", "--config", "/nonexistent/cfg.json"}).code, tdem::cli::kConfig);
  EXPECT_EQ(run({"rwa", "--format", "xml"}).code, tdem::cli::kUsage);
  EXPECT_EQ(run({"rwa", "--jobs", "0", "--output", dir.string()}).code, tdem::cli::kUsage);
  r = run({"oracle", "--r", "2", "--cutoff", "150", "--output", dir.string()});
  EXPECT_EQ(r.code, tdem::cli::kRuntime);
  EXPECT_EQ(nlohmann::json::parse(r.err)["code"], "oracle_leakage");
  fs::create_directories(dir);
  tdem::io::write_text(dir / "blocker", "x");
  EXPECT_EQ(run({"rwa", "--output", (dir / "blocker" / "sub").string()}).code, tdem::cli::kIo);
}

TEST(Cli, ConstraintViolationIsConfigError) {
  const auto dir = scratch("constraint");
  fs::create_directories(dir);
  auto doc = tdem::to_json(tdem::default_config());
  doc["initial"]["n_bar"] = {0.0, 0.0, 0.0, 0.5};
  doc["run"]["t_max"] = 1.0;
  tdem::io::write_text(dir / "cfg.json", doc.dump());
  const auto r = run({"simulate", "--config", (dir / "cfg.json").string(), "--output", dir.string()});
  EXPECT_EQ(r.code, tdem::cli::kConfig);
  EXPECT_EQ(nlohmann::json::parse(r.err)["code"], "constraint_violation");
}

TEST(Cli, EnvironmentConfigAndOverride) {
  const auto dir = scratch("env");
  fs::create_directories(dir);
  auto doc = tdem::to_json(tdem::default_config());
  doc["run"]["t_max"] = 10.0;
  doc["output"]["stride"] = 1;
  tdem::io::write_text(dir / "env.json", doc.dump());
  ::setenv("TDEM_CONFIG", (dir / "env.json").c_str(), 1);
  ASSERT_EQ(run({"rwa", "--output", (dir / "a").string(), "--quiet"}).code, 0);
  EXPECT_EQ(read_csv(dir / "a" / "rwa.csv").back()[0], "10");
  ::setenv("TDEM_CONFIG", "/nonexistent/env.json", 1);
  EXPECT_EQ(run({"rwa", "--output", (dir / "b").string()}).code, tdem::cli::kConfig);
  EXPECT_EQ(run({"rwa", "--config", (dir / "env.json").string(), "--output", (dir / "b").string(), "--quiet"}).code, 0);
  ::unsetenv("TDEM_CONFIG");
}

TEST(Cli, SigmaLaboratoryScenario) {
  const auto dir = scratch("sigma");
  ASSERT_EQ(run({"sigma", "--config", config_path("surface_charge_lab.json"), "--output", dir.string(), "--quiet"}).code, 0);
  const auto rows = read_csv(dir / "sigma.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "r", "unphysical_energy", "sigma_natural", "sigma_si",
                                               "sigma_alt_prefactor"}));
  const double si = std::stod(rows.back()[4]);
  EXPECT_GE(si, 1e-15);
  EXPECT_LE(si, 1e-13);
  // Without an SI scale the column stays empty.
  ASSERT_EQ(run({"sigma", "--output", dir.string(), "--quiet"}).code, 0);
  EXPECT_EQ(read_csv(dir / "sigma.csv").back()[4], "");
}

TEST(Cli, OracleTable) {
  const auto dir = scratch("oracle");
  ASSERT_EQ(run({"oracle", "--r", "0.5", "--samples", "5", "--output", dir.string(), "--quiet"}).code, 0);
  const auto rows = read_csv(dir / "oracle.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "N", "leakage", "norm"}));
  EXPECT_EQ(rows.size(), 6u);
  EXPECT_NEAR(std::stod(rows.back()[1]), 0.271540317407621889, 1e-6);
  ASSERT_EQ(run({"oracle", "--r", "0.5", "--nbar", "1", "--cutoff", "60", "--samples", "3", "--output", dir.string(),
                 "--quiet", "--config", config_path("resonant_thermal.json")})
                .code,
            0);
  EXPECT_NEAR(std::stod(read_csv(dir / "oracle.csv").back()[1]), 1.814620952222866, 0.01 * 1.8146);
}

TEST(Cli, ClassicalOutputs) {
  const auto dir = scratch("classical");
  ASSERT_EQ(run({"classical", "--config", config_path("parametric_growth.json"), "--output", dir.string(), "--quiet"}).code,
            0);
  const auto rows = read_csv(dir / "classical.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "re_q", "im_q", "envelope", "branch"}));
  EXPECT_EQ(rows[1][4], "spatial");
  const auto s = read_json(dir / "classical_summary.json");
  EXPECT_NEAR(s["mu"].get<double>(), 5e-4, 5e-5);
  ASSERT_EQ(run({"classical", "--config", config_path("adiabatic_ramp.json"), "--output", dir.string(), "--quiet"}).code, 0);
  EXPECT_NEAR(read_json(dir / "classical_summary.json")["p"].get<double>(), -0.25, 0.02);
}

TEST(Cli, ModesTable) {
  const auto dir = scratch("modes");
  ASSERT_EQ(run({"modes", "--nmax", "1", "--output", dir.string(), "--format", "json", "--quiet"}).code, 0);
  const auto j = read_json(dir / "modes.json");
  EXPECT_EQ(j["columns"].size(), 10u);
  EXPECT_EQ(j["rows"].size(), 26u);
  EXPECT_EQ(j["columns"][8], "omega0");
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

}  // namespace
