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

// Scenario runner. Every scenario streams the two conditional trajectories
// once; states needed afterwards (points A, B, C) are re-propagated on the
// same grid, which reproduces them bit for bit without holding the whole
// trajectory in memory.
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qflow/checkpoint.hpp"
#include "qflow/experiments/config.hpp"
#include "qflow/experiments/csv.hpp"
#include "qflow/experiments/points.hpp"
#include "qflow/measures.hpp"

namespace qflow::experiments {

/// Distance series of one run plus the located points, if any.
struct DistanceRun {
  std::vector<double> times;
  Series d_s, d_e;
  std::vector<std::vector<double>> d_e_qubit;  // [k-1][grid], chain a
  std::optional<PointsABC> points;
  std::string points_error;
};

struct RunReport {
  std::vector<std::string> files;
};

namespace detail {

inline ModelParams params_for(int n, double ratio) {
  return ModelParams::dimensionless(n, ratio);
}

inline std::unique_ptr<CheckpointWriter> open_checkpoint(const ScenarioConfig& c,
                                                         const ModelParams& p) {
  if (c.checkpoint.empty()) return nullptr;
  return std::make_unique<CheckpointWriter>(c.checkpoint, p, uniform_grid(c.t_max, c.n_steps));
}

inline Metadata base_meta(const ScenarioConfig& c, const ModelParams& p) {
  return {{"scenario", scenario_name(c.scenario)},
          {"N", std::to_string(p.layout.n_per_chain())},
          {"j_se", format_double(p.j_se)},
          {"j_e", format_double(p.j_e)},
          {"j_e_rad_s", format_double(kPhysicalJeRadPerSecond)},
          {"tmax", format_double(c.t_max)},
          {"steps", std::to_string(c.n_steps)},
          {"dt", format_double(c.t_max / c.n_steps)}};
}

inline std::string path_in(const ScenarioConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

inline void add_points(Metadata& meta, const DistanceRun& run, double scale = 1.0) {
  const PlateauOptions opt;
  meta.emplace_back("sigma_threshold", format_double(opt.sigma_threshold));
  meta.emplace_back("plateau_band", format_double(opt.band));
  if (run.points) {
    meta.emplace_back("t_A", format_double(run.points->t_A * scale));
    meta.emplace_back("t_B", format_double(run.points->t_B * scale));
    meta.emplace_back("t_C", format_double(run.points->t_C * scale));
  } else {
    meta.emplace_back("points", "none");
  }
}

}  // namespace detail

/// D_S, D_E and (optionally) per-qubit D_E,k over the grid.
inline DistanceRun distance_run(const ModelParams& p, double t_max, int n_steps,
                                bool per_qubit, CheckpointWriter* checkpoint = nullptr) {
  const int n = p.layout.n_per_chain();
  DistanceRun run;
  run.times = uniform_grid(t_max, n_steps);
  run.d_s.resize(run.times.size());
  run.d_e.resize(run.times.size());
  if (per_qubit) run.d_e_qubit.assign(n, std::vector<double>(run.times.size()));
  for_each_grid_point(p, t_max, n_steps,
                      [&](std::size_t i, double t, const PureState& plus, const PureState& minus) {
                        if (checkpoint) checkpoint->append(plus, minus);
                        run.d_s[i] = {t, system_distance(plus, minus)};
                        run.d_e[i] = {t, env_distance(plus, minus)};
                        for (int k = 1; per_qubit && k <= n; ++k) {
                          run.d_e_qubit[k - 1][i] = env_qubit_distance(plus, minus, Chain::a, k);
                        }
                      });
  if (checkpoint) checkpoint->close();
  try {
    run.points = locate_points(run.d_s, run.d_e);
  } catch (const AnalysisError& e) {
    run.points_error = e.what();
  }
  return run;
}

/// fig2-style file. `time_scale` converts the native 1/J_E unit.
inline std::string write_distance_file(const std::string& path, const DistanceRun& run,
                                       Metadata meta, double time_scale = 1.0) {
  const std::size_t n = run.d_e_qubit.size();
  std::vector<std::string> header{"t", "D_S", "D_E"};
  for (std::size_t k = 1; k <= n; ++k) header.push_back("D_E_" + std::to_string(k));
  header.insert(header.end(), {"sigma_S", "sigma_E"});

  const Series sig_s = sigma(run.d_s), sig_e = sigma(run.d_e);
  detail::add_points(meta, run, time_scale);
  meta.emplace_back("blp_S", format_double(blp_accumulated(run.d_s)));

  CsvWriter csv(path, meta, header);
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    std::vector<double> row{run.times[i] * time_scale, run.d_s[i].value, run.d_e[i].value};
    for (std::size_t k = 0; k < n; ++k) row.push_back(run.d_e_qubit[k][i]);
    row.push_back(sig_s[i].value / time_scale);
    row.push_back(sig_e[i].value / time_scale);
    csv.row(row);
  }
  csv.close();
  return path;
}

namespace detail {

inline const PointsABC& require_points(const DistanceRun& run) {
  if (!run.points) throw AnalysisError(run.points_error);
  return *run.points;
}

inline RunReport run_fig2(const ScenarioConfig& c) {
  const ModelParams p = params_for(c.n, c.ratio);
  auto ckpt = open_checkpoint(c, p);
  const DistanceRun run = distance_run(p, c.t_max, c.n_steps, true, ckpt.get());
  Metadata meta = base_meta(c, p);
  if (!ckpt) {
    return {{write_distance_file(path_in(c, scenario_name(c.scenario) + ".csv"), run, meta)}};
  }
  meta.emplace_back("checkpoint", c.checkpoint);
  return {{write_distance_file(path_in(c, scenario_name(c.scenario) + ".csv"), run, meta),
           c.checkpoint}};
}

inline RunReport run_fig3(const ScenarioConfig& c) {
  const ModelParams p = params_for(c.n, c.ratio);
  auto ckpt = open_checkpoint(c, p);
  const DistanceRun run = distance_run(p, c.t_max, c.n_steps, false, ckpt.get());
  const PointsABC& pts = require_points(run);
  const auto states = states_at(p, c.t_max, c.n_steps, {pts.i_A, pts.i_B, pts.i_C});
  const PureState* at[3] = {&states.at(pts.i_A).first, &states.at(pts.i_B).first,
                            &states.at(pts.i_C).first};

  Metadata meta = base_meta(c, p);
  add_points(meta, run);
  meta.emplace_back("state", "plus");
  const char* labels[3] = {"A", "B", "C"};
  for (int j = 0; j < 3; ++j) {
    meta.emplace_back(std::string("S_S_") + labels[j],
                      format_double(entropy_of_subset(*at[j], {QubitLayout::system()})));
  }
  CsvWriter csv(path_in(c, "fig3.csv"), meta, {"m", "I_at_A", "I_at_B", "I_at_C"});
  for (int m = 0; m <= c.n; ++m) {
    csv.row({double(m), mutual_information(*at[0], m), mutual_information(*at[1], m),
             mutual_information(*at[2], m)});
  }
  csv.close();
  RunReport r{{csv.path()}};
  if (ckpt) r.files.push_back(c.checkpoint);
  return r;
}

inline RunReport run_inequality(const ScenarioConfig& c) {
  const ModelParams p = params_for(c.n, c.ratio);
  auto ckpt = open_checkpoint(c, p);
  const std::vector<double> times = uniform_grid(c.t_max, c.n_steps);
  std::vector<double> d_s(times.size());
  std::vector<LaineRhs> rhs(times.size());
  for_each_grid_point(p, c.t_max, c.n_steps,
                      [&](std::size_t i, double, const PureState& plus, const PureState& minus) {
                        if (ckpt) ckpt->append(plus, minus);
                        d_s[i] = system_distance(plus, minus);
                        rhs[i] = laine_rhs(plus, minus);
                      });
  if (ckpt) ckpt->close();
  const std::vector<LaineTerms> terms = laine_series(d_s, rhs);

  double min_slack = terms.front().slack, max_corr_gap = 0.0;
  for (const auto& t : terms) {
    min_slack = std::min(min_slack, t.slack);
    max_corr_gap = std::max(max_corr_gap, std::abs(t.corr_plus - t.corr_minus));
  }
  Metadata meta = base_meta(c, p);
  meta.emplace_back("min_slack", format_double(min_slack));
  meta.emplace_back("max_corr_gap", format_double(max_corr_gap));
  CsvWriter csv(path_in(c, "sm_inequality.csv"), meta,
                {"t", "lhs_sup", "d_env", "corr_plus", "corr_minus", "slack"});
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    csv.row({times[i], t.lhs_sup, t.d_env, t.corr_plus, t.corr_minus, t.slack});
  }
  csv.close();
  RunReport r{{csv.path()}};
  if (ckpt) r.files.push_back(c.checkpoint);
  return r;
}

inline RunReport run_mi_time(const ScenarioConfig& c) {
  const ModelParams p = params_for(c.n, c.ratio);
  auto ckpt = open_checkpoint(c, p);
  std::vector<std::string> header{"t"};
  for (int m = 1; m <= c.n; ++m) header.push_back("I_F" + std::to_string(m));
  for (int k = 1; k <= c.n; ++k) header.push_back("I_q" + std::to_string(k));
  Metadata meta = base_meta(c, p);
  meta.emplace_back("state", "plus");
  meta.emplace_back("qubits", "chain_a");
  CsvWriter csv(path_in(c, "sm_mi_time.csv"), meta, header);
  for_each_grid_point(p, c.t_max, c.n_steps,
                      [&](std::size_t, double t, const PureState& plus, const PureState& minus) {
                        if (ckpt) ckpt->append(plus, minus);
                        std::vector<double> row{t};
                        for (int m = 1; m <= c.n; ++m) row.push_back(mutual_information(plus, m));
                        for (int k = 1; k <= c.n; ++k) {
                          row.push_back(qubit_mutual_information(plus, p.layout.qubit(Chain::a, k)));
                        }
                        csv.row(row);
                      });
  if (ckpt) ckpt->close();
  csv.close();
  RunReport r{{csv.path()}};
  if (ckpt) r.files.push_back(c.checkpoint);
  return r;
}

inline RunReport run_discord(const ScenarioConfig& c) {
  const ModelParams p = params_for(c.n, c.ratio);
  auto ckpt = open_checkpoint(c, p);
  const DistanceRun run = distance_run(p, c.t_max, c.n_steps, false, ckpt.get());
  const PointsABC& pts = require_points(run);
  const std::size_t idx[3] = {pts.i_A, pts.i_B, pts.i_C};
  const auto states = states_at(p, c.t_max, c.n_steps, {idx[0], idx[1], idx[2]});
  const char* labels[3] = {"A", "B", "C"};

  RunReport r;
  for (int j = 0; j < 3; ++j) {
    const PureState& psi = states.at(idx[j]).first;
    Metadata meta = base_meta(c, p);
    meta.emplace_back("point", labels[j]);
    meta.emplace_back("t", format_double(run.times[idx[j]]));
    meta.emplace_back("state", "plus");
    meta.emplace_back("S_S", format_double(entropy_of_subset(psi, {QubitLayout::system()})));
    meta.emplace_back("grid", "64x64");
    CsvWriter csv(path_in(c, std::string("sm_discord_") + labels[j] + ".csv"), meta,
                  {"m", "discord", "mutual_information", "holevo_max"});
    for (int m = 1; m <= c.n; ++m) {
      const DiscordResult d = discord(psi, m);
      csv.row({double(m), d.discord, d.mutual_information, d.holevo_max});
    }
    csv.close();
    r.files.push_back(csv.path());
  }
  if (ckpt) r.files.push_back(c.checkpoint);
  return r;
}

inline RunReport run_sweep(const ScenarioConfig& c) {
  const bool over_n = !c.sweep_n.empty();
  const bool je = c.scenario == Scenario::sm_sweep_je;
  const std::size_t count = over_n ? c.sweep_n.size() : c.sweep_ratio.size();
  const std::string name = scenario_name(c.scenario);

  RunReport r;
  std::vector<std::vector<double>> summary;
  std::string flagged;
  for (std::size_t v = 0; v < count; ++v) {
    const int n = over_n ? c.sweep_n[v] : c.n;
    const double ratio = over_n ? c.ratio : c.sweep_ratio[v];
    const ModelParams p = params_for(n, ratio);
    // The J_E sweep measures time in 1/J_SE and reports J_E / J_SE.
    const double scale = je ? ratio : 1.0;
    const double param = over_n ? double(n) : (je ? 1.0 / ratio : ratio);
    const std::string label = over_n ? "N" + std::to_string(n) : "p" + format_double(param);

    const DistanceRun run = distance_run(p, c.t_max, c.n_steps, true);
    Metadata meta = base_meta(c, p);
    meta.emplace_back("param", format_double(param));
    meta.emplace_back("time_unit", je ? "1/J_SE" : "1/J_E");
    const std::string regime = regime_flag(ratio);
    if (!regime.empty()) {
      meta.emplace_back("regime", regime);
      flagged += (flagged.empty() ? "" : ";") + format_double(param) + ":" + regime;
    }
    r.files.push_back(write_distance_file(path_in(c, name + "_" + label + ".csv"), run, meta,
                                          scale));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    summary.push_back({param, run.points ? run.points->t_A * scale : nan,
                       run.points ? run.points->t_B * scale : nan});
  }

  Metadata meta{{"scenario", name},
                {"param", over_n ? "N" : (je ? "J_E/J_SE" : "J_SE/J_E")},
                {"time_unit", je ? "1/J_SE" : "1/J_E"},
                {"tmax", format_double(c.t_max)},
                {"steps", std::to_string(c.n_steps)},
                {"flagged", flagged.empty() ? "none" : flagged}};
  if (over_n) meta.emplace_back("ratio", format_double(c.ratio));
  else meta.emplace_back("N", std::to_string(c.n));
  CsvWriter csv(path_in(c, name + "_summary.csv"), meta, {"param", "t_A", "t_B"});
  for (const auto& row : summary) csv.row(row);
  csv.close();
  r.files.push_back(csv.path());
  return r;
}

}  // namespace detail

inline RunReport run_scenario(const ScenarioConfig& c) {
  try {
    std::filesystem::create_directories(c.out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    throw IoError("cannot create output directory " + c.out_dir + ": " + e.what());
  }
  try {
    switch (c.scenario) {
      case Scenario::fig2:
      case Scenario::custom:
        return detail::run_fig2(c);
      case Scenario::fig3:
        return detail::run_fig3(c);
      case Scenario::sm_inequality:
        return detail::run_inequality(c);
      case Scenario::sm_mi_time:
        return detail::run_mi_time(c);
      case Scenario::sm_discord:
        return detail::run_discord(c);
      case Scenario::sm_sweep_je:
      case Scenario::sm_sweep_jse:
        return detail::run_sweep(c);
    }
  } catch (const AnalysisError& e) {
    throw AnalysisError(scenario_name(c.scenario) + ": " + e.what());
  } catch (const PropagationError& e) {
    throw PropagationError(scenario_name(c.scenario) + ": " + e.what(), e.residual(),
                           e.grid_index());
  }
  throw ConfigError("unhandled scenario");
}

}  // namespace qflow::experiments
