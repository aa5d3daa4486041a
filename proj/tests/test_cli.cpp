// Copyright 2026 The ri-et Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "riet/config.hpp"
#include "riet/runner.hpp"

namespace riet::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("riet_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + RIET_CLI_PATH + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

// ------------------------------------------------------------------- config

TEST(ConfigTest, PresetExpansion) {
  const RunConfig cfg = parse_config(R"({"preset": "high_temperature", "method": "ri"})");
  ASSERT_TRUE(cfg.preset);
  EXPECT_EQ(cfg.model.n_levels, 32);
  EXPECT_EQ(cfg.model.kbt, 2.0);
  EXPECT_EQ(*cfg.model.delta_e, 20.0);
  EXPECT_EQ(cfg.tau, 0.01);
  EXPECT_EQ(cfg.method, Method::RI);
  EXPECT_EQ(cfg.trotter_split, TrotterSplit::Shift);
}

TEST(ConfigTest, ExplicitKeysOverridePreset) {
  const RunConfig cfg = parse_config(
      R"({"preset": "weakly_coupled", "method": "ri_trotter", "delta_e": 2.5, "tau": 0.5,
          "n_levels": 12, "trotter_split": "ladder", "time_unit": "period"})");
  EXPECT_EQ(*cfg.model.delta_e, 2.5);
  EXPECT_EQ(cfg.tau, 0.5);
  EXPECT_EQ(cfg.model.n_levels, 12);
  EXPECT_EQ(cfg.trotter_split, TrotterSplit::Ladder);
  EXPECT_EQ(cfg.model.time_unit, TimeUnit::Period);
}

TEST(ConfigTest, DbaDefaultsFilled) {
  const RunConfig cfg = parse_config(R"({"kind": "DBA", "method": "lindblad"})");
  EXPECT_EQ(cfg.model.kind, ModelKind::DBA);
  EXPECT_TRUE(cfg.model.dba_site_energies);
  EXPECT_TRUE(cfg.model.dba_positions);
}

TEST(ConfigTest, Errors) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"preset": "weakly_coupled", "method": "ri", "gama": 1})").find("gama"),
            std::string::npos);
  EXPECT_NE(message(R"({"preset": "weakly_coupled", "method": ""})").find("method"),
            std::string::npos);
  EXPECT_NE(message(R"({"preset": "weakly_coupled"})").find("method"), std::string::npos);
  EXPECT_NE(message("{\n\"method\": \"ri\",\n\"tau\": ,\n}").find("line 3"), std::string::npos);
  EXPECT_NE(message(R"({"method": "ri", "kbt": -1})").find("kbt"), std::string::npos);
  EXPECT_NE(message(R"({"preset": "weakly_coupled", "method": "ri", "tau": 0})").find("tau"), std::string::npos);
  EXPECT_NE(message(R"({"preset": "weakly_coupled", "method": "ri",
                       "sweep": {"parameter": "tau", "values": []}})")
                .find("sweep"),
            std::string::npos);
  EXPECT_NE(message(R"({"kind": "DBA", "method": "ri_trotter"})").find("method"), std::string::npos);
  EXPECT_NE(message(R"({"method": "magic"})").find("method"), std::string::npos);
  EXPECT_NE(message(R"([1, 2])").find("object"), std::string::npos);
  EXPECT_NE(message(R"({"method": "ri", "n_levels": "many"})").find("n_levels"), std::string::npos);
}

TEST(ConfigTest, RecordStrideResolution) {
  RunConfig cfg = parse_config(R"({"preset": "weakly_coupled", "method": "lindblad", "dt": 0.02})");
  EXPECT_EQ(cfg.resolved_record_stride(), 50);
  cfg = parse_config(R"({"preset": "weakly_coupled", "method": "ri", "t_max": 10})");
  EXPECT_EQ(cfg.resolved_record_stride(), 1);
  cfg.record_stride = 7;
  EXPECT_EQ(cfg.resolved_record_stride(), 7);
}

TEST(ConfigTest, SweepPoint) {
  const RunConfig cfg = parse_config(
      R"({"preset": "weakly_coupled", "method": "ri_trotter",
          "sweep": {"parameter": "trotter_n", "values": [1, 2, 4]}})");
  EXPECT_EQ(sweep_point(cfg, 4.0).trotter_n, 4);
  EXPECT_EQ(sweep_point(cfg, 4.0).model.delta_e, cfg.model.delta_e);
}

// --------------------------------------------------------------------- CSV

TEST(CsvTest, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(3.0), "3");
  EXPECT_EQ(format_double(1e-20), "1e-20");
  EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(CsvTest, TrajectoryHeaders) {
  const std::string small = R"("t_max": 1, "tau": 0.1, "n_levels": 4})";
  const std::vector<std::pair<std::string, std::string>> cases = {
      {R"({"preset": "weakly_coupled", "method": "ri", )", "t,P_D,P_A,trace,purity"},
      {R"({"preset": "dba", "method": "ri", )", "t,P_D,P_B1,P_B2,P_A,trace,purity"},
      {R"({"preset": "weakly_coupled", "method": "stateprep", )",
       "t,P_D,P_A,trace,purity,fidelity"},
      {R"({"preset": "weakly_coupled", "method": "rhp", "rhp_engine": "ri", )",
       "t,P_D,P_A,trace,purity,concurrence"},
  };
  for (const auto& [prefix, header] : cases) {
    const RunResult r = run_single(parse_config(prefix + small));
    std::ostringstream out;
    write_trajectory_csv(out, r.trajectory);
    const auto ls = lines(out.str());
    ASSERT_EQ(ls.size(), 12u) << header;
    EXPECT_EQ(ls[0], header);
  }
}

TEST(CsvTest, SweepRowsKeptOnFailure) {
  const RunConfig cfg = parse_config(
      R"({"preset": "strongly_coupled", "method": "lindblad", "n_levels": 4, "t_max": 20, "dt": 0.2,
          "sweep": {"parameter": "delta_e", "values": [0, 200, 1, 300]}})");
  const std::vector<SweepRow> rows = run_sweep(cfg, 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_TRUE(rows[2].error.empty());
  EXPECT_FALSE(rows[3].error.empty());
  std::ostringstream out;
  write_sweep_csv(out, rows);
  const auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "delta_e,tau,trotter_n,k,p0,r_squared,converged");
  EXPECT_EQ(ls[2].substr(0, 4), "200,");
  EXPECT_EQ(ls[2].substr(ls[2].size() - 5), "false");
  EXPECT_EQ(ls[3].substr(0, 2), "1,");
}

TEST(CsvTest, SweepOrderIndependentOfThreads) {
  const RunConfig cfg = parse_config(
      R"({"preset": "weakly_coupled", "method": "ri", "n_levels": 6, "t_max": 30,
          "sweep": {"parameter": "delta_e", "values": [3, 1, 2, 2.5, 1.5]}})");
  std::ostringstream a, b;
  write_sweep_csv(a, run_sweep(cfg, 1));
  write_sweep_csv(b, run_sweep(cfg, 4));
  EXPECT_EQ(a.str(), b.str());
}

TEST(CsvTest, RhpSweepHeader) {
  const RunConfig cfg = parse_config(
      R"({"preset": "weakly_coupled", "method": "rhp", "rhp_engine": "ri", "n_levels": 4,
          "t_max": 5, "sweep": {"parameter": "delta_e", "values": [3]}})");
  std::ostringstream out;
  write_rhp_sweep_csv(out, run_sweep(cfg, 1));
  EXPECT_EQ(lines(out.str())[0], "delta_e,tau,measure,measure_summary,delta_e_entanglement");
}

TEST(ManifestTest, RecordsUnitConversion) {
  RunConfig cfg = parse_config(R"({"preset": "weakly_coupled", "method": "ri", "time_unit": "period"})");
  auto doc = nlohmann::json::parse(manifest_json(cfg, 0.0, nullptr, nullptr, 1));
  EXPECT_EQ(doc["units"]["gamma_conversion"], "gamma_internal = gamma_cfg / (2 pi)");
  EXPECT_NEAR(doc["units"]["gamma_internal"].get<double>(), 0.01 / (2.0 * 3.141592653589793), 1e-15);
  EXPECT_EQ(doc["preset"], "weakly_coupled");
  cfg = parse_config(R"({"preset": "weakly_coupled", "method": "ri"})");
  doc = nlohmann::json::parse(manifest_json(cfg, 0.0, nullptr, nullptr, 1));
  EXPECT_EQ(doc["units"]["time_unit"], "inverse_omega");
}

// ------------------------------------------------------------------ threads

TEST(ThreadsTest, Resolution) {
  ::setenv("RI_ET_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(std::nullopt), 3);
  EXPECT_EQ(resolve_threads(5), 5);
  ::setenv("RI_ET_THREADS", "zero", 1);
  EXPECT_THROW(resolve_threads(std::nullopt), ConfigError);
  ::unsetenv("RI_ET_THREADS");
  EXPECT_GE(resolve_threads(std::nullopt), 1);
  EXPECT_THROW(resolve_threads(0), ConfigError);
}

// -------------------------------------------------------------- executable

TEST(ExecutableTest, ByteReproducibleOutputs) {
  TempDir dir;
  const fs::path cfg = dir.path() / "cfg.json";
  std::ofstream(cfg) << R"({"preset": "strongly_damped", "method": "ri", "n_levels": 6, "t_max": 40,
    "sweep": {"parameter": "delta_e", "values": [1.5, 2, 2.5]}})";
  ASSERT_EQ(run_cli("sweep " + cfg.string() + " --output-dir " + (dir.path() / "a").string()), 0);
  ASSERT_EQ(run_cli("sweep " + cfg.string() + " --output-dir " + (dir.path() / "b").string(),
                    "RI_ET_THREADS=2"),
            0);
  const std::string a = slurp(dir.path() / "a" / "sweep.csv");
  EXPECT_EQ(lines(a).size(), 4u);
  EXPECT_EQ(a, slurp(dir.path() / "b" / "sweep.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir.path() / "b" / "manifest.json"));
  EXPECT_EQ(manifest["threads"], 2);

  const fs::path single = dir.path() / "single.json";
  std::ofstream(single) << R"({"preset": "weakly_coupled", "method": "lindblad", "n_levels": 6,
    "t_max": 20, "dt": 0.02})";
  ASSERT_EQ(run_cli("run " + single.string() + " --output-dir " + (dir.path() / "c").string()), 0);
  ASSERT_EQ(run_cli("run " + single.string() + " --output-dir " + (dir.path() / "d").string()), 0);
  EXPECT_EQ(slurp(dir.path() / "c" / "trajectory.csv"), slurp(dir.path() / "d" / "trajectory.csv"));
}

TEST(ExecutableTest, ExitCodes) {
  TempDir dir;
  const fs::path bad = dir.path() / "bad.json";
  std::ofstream(bad) << R"({"method": "ri", "colour": "blue"})";
  EXPECT_EQ(run_cli("run " + bad.string() + " --output-dir " + dir.path().string()), 2);
  const fs::path failing = dir.path() / "failing.json";
  std::ofstream(failing) << R"({"preset": "strongly_coupled", "method": "lindblad", "n_levels": 4,
    "t_max": 20, "dt": 0.2, "sweep": {"parameter": "delta_e", "values": [0, 200]}})";
  EXPECT_EQ(run_cli("sweep " + failing.string() + " --output-dir " + dir.path().string()), 1);
  EXPECT_EQ(lines(slurp(dir.path() / "sweep.csv")).size(), 3u);
  EXPECT_EQ(run_cli("presets"), 0);
  EXPECT_NE(run_cli("frobnicate"), 0);
}

}  // namespace
}  // namespace riet::cli
