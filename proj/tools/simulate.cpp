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

// simulate <scenario> [--config PATH] [--n N] [--ratio R] [--tmax T]
//          [--steps K] [--out DIR] [--threads M] [--sweep-n LIST]
//          [--sweep-ratio LIST] [--checkpoint FILE]
//
// Exit codes: 0 success, 1 configuration, 2 physics or convergence, 3 I/O.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "qflow/experiments/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kPhysics = 2, kIo = 3 };

int run(int argc, char** argv) {
  using namespace qflow::experiments;

  CLI::App app{"Information flow between a qubit and two spin chains"};
  std::string scenario;
  std::optional<std::string> config_path;
  ConfigValues flags;
  std::string n, ratio, tmax, steps, out, threads, sweep_n, sweep_ratio, checkpoint;

  app.add_option("scenario", scenario,
                 "fig2, fig3, sm_inequality, sm_sweep_je, sm_sweep_jse, "
                 "sm_mi_time, sm_discord or custom");
  app.add_option("--config", config_path, "key = value file; flags take precedence");
  app.add_option("--n", n, "chain length N");
  app.add_option("--ratio", ratio, "J_SE / J_E");
  app.add_option("--tmax", tmax, "final time in units of 1/J_E");
  app.add_option("--steps", steps, "number of grid intervals");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "OpenMP threads (fallback: QFLOW_THREADS)");
  app.add_option("--sweep-n", sweep_n, "comma separated chain lengths");
  app.add_option("--sweep-ratio", sweep_ratio, "comma separated ratios");
  app.add_option("--checkpoint", checkpoint, "write the trajectory to this binary file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) flags[key] = v;
  };
  set("scenario", scenario);
  set("n", n);
  set("ratio", ratio);
  set("tmax", tmax);
  set("steps", steps);
  set("out", out);
  set("threads", threads);
  set("sweep_n", sweep_n);
  set("sweep_ratio", sweep_ratio);
  set("checkpoint", checkpoint);
  if (threads.empty()) {
    if (const char* env = std::getenv("QFLOW_THREADS"); env && *env) flags["threads"] = env;
  }

  ScenarioConfig cfg;
  try {
    cfg = parse_config(config_path, flags);
  } catch (const qflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }

#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif

  try {
    const RunReport report = run_scenario(cfg);
    for (const auto& f : report.files) std::cout << f << '\n';
  } catch (const qflow::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const qflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const qflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPhysics;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return kPhysics;
  }
}
