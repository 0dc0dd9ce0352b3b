// Copyright 2026 The qflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qflow/experiments/scenario.hpp"

namespace qflow::experiments {
namespace {

namespace fs = std::filesystem;

struct Table {
  std::string meta;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error("no column " + name);
  }

  std::string meta_value(const std::string& key) const {
    const auto pos = meta.find(" " + key + "=");
    if (pos == std::string::npos) return {};
    const auto start = pos + key.size() + 2;
    return meta.substr(start, meta.find(' ', start) - start);
  }
};

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  Table t;
  std::getline(in, t.meta);
  std::string line, cell;
  std::getline(in, line);
  std::stringstream hs(line);
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream rs(line);
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    t.rows.push_back(row);
  }
  return t;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qflow_experiments_test" / name;
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig config(const ConfigValues& flags) { return resolve_config({}, flags); }

// ---------------------------------------------------------------------------
// Configuration

TEST(ConfigTest, EmptyConfigGivesFigureDefaults) {
  const ScenarioConfig c = parse_config(std::nullopt);
  EXPECT_EQ(c.scenario, Scenario::fig2);
  EXPECT_EQ(c.n, 7);
  EXPECT_DOUBLE_EQ(c.ratio, 0.71);
  EXPECT_DOUBLE_EQ(c.t_max, 20.0);
  EXPECT_EQ(c.n_steps, 1000);
  EXPECT_TRUE(c.sweep_n.empty());
  EXPECT_EQ(parse_config_text("\n# nothing here\n   \n").size(), 0u);
}

TEST(ConfigTest, ScenarioDependentDefaults) {
  const ScenarioConfig ineq = config({{"scenario", "sm_inequality"}});
  EXPECT_EQ(ineq.n, 6);
  EXPECT_DOUBLE_EQ(ineq.t_max, 12.0);
  EXPECT_EQ(ineq.n_steps, 600);
  const ScenarioConfig sweep = config({{"scenario", "sm_sweep_jse"}});
  EXPECT_EQ(sweep.n, 6);
  EXPECT_EQ(sweep.sweep_ratio, kDefaultSweepRatios);
  EXPECT_EQ(config({{"scenario", "sm_discord"}}).n, 7);
  EXPECT_EQ(config({{"tmax", "3"}}).n_steps, 150);
  EXPECT_EQ(config({{"tmax", "3.01"}}).n_steps, 151);
}

TEST(ConfigTest, ZeroChainLengthIsRejected) {
  EXPECT_THROW(resolve_config(parse_config_text("N = 0"), {}), ConfigError);
  EXPECT_THROW(config({{"n", "15"}}), ConfigError);
}

TEST(ConfigTest, FlagsOverrideFile) {
  const ConfigValues file = parse_config_text("scenario = fig3\nn = 4\nratio = 0.5 # comment\n");
  const ScenarioConfig c = resolve_config(file, {{"n", "3"}});
  EXPECT_EQ(c.scenario, Scenario::fig3);
  EXPECT_EQ(c.n, 3);
  EXPECT_DOUBLE_EQ(c.ratio, 0.5);
}

TEST(ConfigTest, ReadsFiles) {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "scenario = sm_mi_time\nsteps = 40\n";
  const ScenarioConfig c = parse_config((dir / "run.cfg").string());
  EXPECT_EQ(c.scenario, Scenario::sm_mi_time);
  EXPECT_EQ(c.n_steps, 40);
  EXPECT_THROW(parse_config((dir / "absent.cfg").string()), ConfigError);
}

TEST(ConfigTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_config_text("colour = blue"), ConfigError);
  EXPECT_THROW(parse_config_text("n 7"), ConfigError);
  EXPECT_THROW(parse_config_text("n = 3\nn = 4"), ConfigError);
  EXPECT_THROW(parse_config_text("ratio ="), ConfigError);
  EXPECT_THROW(config({{"scenario", "fig9"}}), ConfigError);
  EXPECT_THROW(config({{"ratio", "0.7x"}}), ConfigError);
  EXPECT_THROW(config({{"ratio", "-1"}}), ConfigError);
  EXPECT_THROW(config({{"tmax", "0"}}), ConfigError);
  EXPECT_THROW(config({{"steps", "1"}}), ConfigError);
  EXPECT_THROW(config({{"threads", "-2"}}), ConfigError);
}

TEST(ConfigTest, SweepSettingsMustBeConsistent) {
  EXPECT_THROW(config({{"sweep_n", "3,4"}}), ConfigError);
  EXPECT_THROW(config({{"scenario", "sm_sweep_jse"}, {"sweep_n", "3"}, {"sweep_ratio", "0.5"}}),
               ConfigError);
  EXPECT_THROW(config({{"scenario", "sm_sweep_jse"}, {"sweep_n", "3,,4"}}), ConfigError);
  EXPECT_THROW(config({{"scenario", "sm_sweep_jse"}, {"sweep_n", "0"}}), ConfigError);
  EXPECT_THROW(config({{"scenario", "sm_sweep_je"}, {"sweep_ratio", "0,0.5"}}), ConfigError);
  EXPECT_THROW(config({{"scenario", "sm_sweep_jse"}, {"checkpoint", "x.bin"}}), ConfigError);
  const ScenarioConfig c = config({{"scenario", "sm_sweep_jse"}, {"sweep-n", "3, 5,7"}});
  EXPECT_EQ(c.sweep_n, (std::vector<int>{3, 5, 7}));
  EXPECT_TRUE(c.sweep_ratio.empty());
}

TEST(ConfigTest, RegimeFlags) {
  EXPECT_EQ(regime_flag(1.0), "strong_coupling");
  EXPECT_EQ(regime_flag(0.25), "weak_coupling");
  EXPECT_EQ(regime_flag(0.71), "");
}

TEST(CsvTest, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

// ---------------------------------------------------------------------------
// Points A, B, C

Series sampled(double dt, int n, double (*f)(double)) {
  Series s;
  for (int i = 0; i < n; ++i) s.push_back({i * dt, f(i * dt)});
  return s;
}

TEST(LocatePointsTest, SyntheticPlateau) {
  // D_E rises to a flat top at t = 1, falls after t = 3; D_S mirrors it and
  // revives at t = 4.
  auto d_e = [](double t) {
    if (t < 1.0) return 0.9 * std::sin(t * std::numbers::pi / 2);
    if (t < 3.0) return 0.9 - 0.02 * std::sin(4.0 * (t - 1.0));
    return std::max(0.0, 0.9 - 0.6 * (t - 3.0) - 0.02 * std::sin(8.0));
  };
  auto d_s = [](double t) { return t < 4.0 ? 1.0 - 0.2 * t : 0.2 + 0.1 * std::cos(3.0 * (t - 4.0)); };
  const Series e = sampled(0.01, 700, +d_e);
  const Series s = sampled(0.01, 700, +d_s);
  const PointsABC p = locate_points(s, e);
  EXPECT_NEAR(p.t_A, 1.0, 0.011);
  EXPECT_NEAR(p.t_B, 3.0 + (0.2 - 0.02 * std::sin(8.0)) / 0.6, 0.011);
  EXPECT_NEAR(p.t_C, 4.0, 0.011);
  EXPECT_EQ(e[p.i_A].t, p.t_A);
}

TEST(LocatePointsTest, DiagnosticsNameTheFailure) {
  const Series flat = sampled(0.1, 50, +[](double) { return 0.0; });
  const Series one = sampled(0.1, 50, +[](double) { return 1.0; });
  try {
    locate_points(one, flat);
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_NE(std::string(e.what()).find("0.001"), std::string::npos);
  }
  // Plateau that never ends.
  const Series rise = sampled(0.1, 50, +[](double t) { return std::min(t, 1.0); });
  const Series bump = sampled(0.1, 50, +[](double t) { return t < 1.0 ? t : 1.0 - 1e-4 * (t - 1.0); });
  EXPECT_THROW(locate_points(one, bump), AnalysisError);
  EXPECT_THROW(locate_points(one, rise), AnalysisError);
  EXPECT_THROW(locate_points(one, Series(flat.begin(), flat.begin() + 10)), DimensionError);
}

TEST(LocatePointsTest, DecoupledSystemHasNoPlateau) {
  const DistanceRun run = distance_run(ModelParams::dimensionless(3, 0.0), 6.0, 300, false);
  EXPECT_FALSE(run.points.has_value());
  EXPECT_NE(run.points_error.find("plateau"), std::string::npos);
}

TEST(LocatePointsTest, OrderOfMagnitudeAndPlateauGrowth) {
  const double ratio = 0.71;
  double last_len = 0.0;
  for (int n : {3, 4, 5}) {
    const DistanceRun run = distance_run(ModelParams::dimensionless(n, ratio), 8.0, 400, false);
    ASSERT_TRUE(run.points) << run.points_error;
    const PointsABC& p = *run.points;
    EXPECT_LT(0.0, p.t_A);
    EXPECT_LT(p.t_A, p.t_B);
    EXPECT_LT(p.t_B, p.t_C);
    EXPECT_GT(p.t_A, 0.5 / ratio);
    EXPECT_LT(p.t_A, 2.0 / ratio);
    EXPECT_GT(p.t_B - p.t_A, last_len) << "N=" << n;
    last_len = p.t_B - p.t_A;
  }
}

// ---------------------------------------------------------------------------
// Scenario output

TEST(ScenarioTest, Fig2ColumnsAndDeterminism) {
  const fs::path dir = scratch("fig2");
  ScenarioConfig c = config({{"n", "3"}, {"tmax", "6"}, {"out", dir.string()}});
  const RunReport first = run_scenario(c);
  ASSERT_EQ(first.files.size(), 1u);
  const std::string bytes = slurp(first.files[0]);
  run_scenario(c);
  EXPECT_EQ(slurp(first.files[0]), bytes);

  const Table t = read_table(first.files[0]);
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "D_S", "D_E", "D_E_1", "D_E_2", "D_E_3",
                                                "sigma_S", "sigma_E"}));
  ASSERT_EQ(t.rows.size(), 301u);
  EXPECT_NEAR(t.rows[0][1], 1.0, 1e-12);
  EXPECT_NEAR(t.rows[0][2], 0.0, 1e-12);
  for (const auto& row : t.rows) {
    for (std::size_t k = 1; k <= 5; ++k) {
      EXPECT_GE(row[k], -1e-12);
      EXPECT_LE(row[k], 1.0 + 1e-12);
    }
  }
  EXPECT_EQ(t.meta.rfind("# params scenario=fig2 N=3", 0), 0u);
  EXPECT_FALSE(t.meta_value("t_A").empty());
  EXPECT_GT(std::stod(t.meta_value("blp_S")), 0.0);
}

TEST(ScenarioTest, DecoupledFig2KeepsFullDistinguishability) {
  const fs::path dir = scratch("fig2_free");
  const RunReport r = run_scenario(
      config({{"n", "2"}, {"ratio", "0"}, {"tmax", "2"}, {"out", dir.string()}}));
  const Table t = read_table(r.files[0]);
  for (const auto& row : t.rows) EXPECT_NEAR(row[t.col("D_S")], 1.0, 1e-12);
  EXPECT_EQ(t.meta_value("points"), "none");
}

TEST(ScenarioTest, Fig3FullEnvironmentCarriesTwiceTheEntropy) {
  const fs::path dir = scratch("fig3");
  const RunReport r = run_scenario(config(
      {{"scenario", "fig3"}, {"n", "3"}, {"tmax", "8"}, {"out", dir.string()}}));
  const Table t = read_table(r.files[0]);
  ASSERT_EQ(t.rows.size(), 4u);
  const auto& last = t.rows.back();
  EXPECT_NEAR(last[t.col("I_at_A")], 2.0 * std::stod(t.meta_value("S_S_A")), 1e-6);
  EXPECT_NEAR(last[t.col("I_at_C")], 2.0 * std::stod(t.meta_value("S_S_C")), 1e-6);
  for (std::size_t m = 1; m < t.rows.size(); ++m) {
    for (std::size_t j = 1; j <= 3; ++j) EXPECT_GE(t.rows[m][j], t.rows[m - 1][j] - 1e-10);
  }
}

TEST(ScenarioTest, InequalityAndMutualInformationTables) {
  const fs::path dir = scratch("sm");
  const RunReport r = run_scenario(config(
      {{"scenario", "sm_inequality"}, {"n", "2"}, {"tmax", "4"}, {"out", dir.string()}}));
  const Table t = read_table(r.files[0]);
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "lhs_sup", "d_env", "corr_plus",
                                                "corr_minus", "slack"}));
  for (const auto& row : t.rows) EXPECT_GE(row[5], -1e-9);

  const RunReport mi = run_scenario(config(
      {{"scenario", "sm_mi_time"}, {"n", "2"}, {"tmax", "1"}, {"out", dir.string()}}));
  const Table m = read_table(mi.files[0]);
  EXPECT_EQ(m.header, (std::vector<std::string>{"t", "I_F1", "I_F2", "I_q1", "I_q2"}));
  EXPECT_EQ(m.rows.size(), 51u);
}

TEST(ScenarioTest, DiscordFiles) {
  const fs::path dir = scratch("discord");
  const RunReport r = run_scenario(config(
      {{"scenario", "sm_discord"}, {"n", "2"}, {"tmax", "8"}, {"out", dir.string()}}));
  ASSERT_EQ(r.files.size(), 3u);
  for (const auto& f : r.files) {
    const Table t = read_table(f);
    ASSERT_EQ(t.rows.size(), 2u);
    const double s_s = std::stod(t.meta_value("S_S"));
    const auto& full = t.rows.back();
    EXPECT_NEAR(full[t.col("discord")], s_s, 2e-3) << f;
    EXPECT_NEAR(full[t.col("mutual_information")], 2.0 * full[t.col("discord")], 4e-3);
  }
}

TEST(ScenarioTest, SweepSummaryMarksFailures) {
  const fs::path dir = scratch("sweep");
  const RunReport r = run_scenario(config({{"scenario", "sm_sweep_jse"},
                                           {"n", "3"},
                                           {"sweep_ratio", "0,0.71"},
                                           {"tmax", "8"},
                                           {"steps", "400"},
                                           {"out", dir.string()}}));
  ASSERT_EQ(r.files.size(), 3u);
  const Table s = read_table(r.files.back());
  EXPECT_EQ(s.header, (std::vector<std::string>{"param", "t_A", "t_B"}));
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_TRUE(std::isnan(s.rows[0][1]));
  EXPECT_FALSE(std::isnan(s.rows[1][1]));
  EXPECT_EQ(s.meta_value("flagged"), "0:weak_coupling");

  // Same physics in J_SE units for the J_E sweep.
  const RunReport je = run_scenario(config({{"scenario", "sm_sweep_je"},
                                            {"n", "3"},
                                            {"sweep_ratio", "0.71"},
                                            {"tmax", "8"},
                                            {"steps", "400"},
                                            {"out", dir.string()}}));
  const Table sj = read_table(je.files.back());
  EXPECT_NEAR(sj.rows[0][0], 1.0 / 0.71, 1e-12);
  EXPECT_NEAR(sj.rows[0][1], 0.71 * s.rows[1][1], 1e-12);
}

TEST(ScenarioTest, CheckpointMatchesReplay) {
  const fs::path dir = scratch("ckpt");
  const std::string bin = (dir / "traj.bin").string();
  const RunReport r = run_scenario(config(
      {{"n", "2"}, {"tmax", "1"}, {"out", dir.string()}, {"checkpoint", bin}}));
  ASSERT_EQ(r.files.size(), 2u);
  const Trajectory back = read_checkpoint(bin);
  ASSERT_EQ(back.size(), 51u);
  const auto picked = states_at(ModelParams::dimensionless(2, 0.71), 1.0, 50, {37});
  EXPECT_EQ(back.states_minus[37].amplitudes(), picked.at(37).second.amplitudes());
}

TEST(ScenarioTest, UnwritableOutputIsAnIoError) {
  const fs::path dir = scratch("io");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(run_scenario(config({{"n", "1"}, {"tmax", "1"},
                                    {"out", (dir / "file" / "sub").string()}})),
               IoError);
}

}  // namespace
}  // namespace qflow::experiments
