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

// Scenario configuration: a plain "key = value" file merged with command
// line flags. Flags win. Keys are case-insensitive; '#' starts a comment.
//
//   scenario     fig2 | fig3 | sm_inequality | sm_sweep_je | sm_sweep_jse |
//                sm_mi_time | sm_discord | custom
//   n            chain length N (2N environment qubits)
//   ratio        J_SE / J_E
//   tmax         final time, in units of 1/J_E
//   steps        grid intervals (default: ceil(tmax / 0.02))
//   out          output directory
//   threads      OpenMP threads, 0 = runtime default
//   sweep_n      comma separated chain lengths (sweep scenarios only)
//   sweep_ratio  comma separated ratios (sweep scenarios only)
//   checkpoint   binary trajectory file to write (single-run scenarios)
#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qflow/errors.hpp"
#include "qflow/qreg.hpp"

namespace qflow::experiments {

enum class Scenario {
  fig2,
  fig3,
  sm_inequality,
  sm_sweep_je,
  sm_sweep_jse,
  sm_mi_time,
  sm_discord,
  custom,
};

inline constexpr std::array<std::pair<Scenario, std::string_view>, 8> kScenarioNames{{
    {Scenario::fig2, "fig2"},
    {Scenario::fig3, "fig3"},
    {Scenario::sm_inequality, "sm_inequality"},
    {Scenario::sm_sweep_je, "sm_sweep_je"},
    {Scenario::sm_sweep_jse, "sm_sweep_jse"},
    {Scenario::sm_mi_time, "sm_mi_time"},
    {Scenario::sm_discord, "sm_discord"},
    {Scenario::custom, "custom"},
}};

inline std::string scenario_name(Scenario s) {
  for (auto [id, name] : kScenarioNames) {
    if (id == s) return std::string(name);
  }
  return "?";
}

inline Scenario scenario_from_name(std::string_view name) {
  for (auto [id, n] : kScenarioNames) {
    if (n == name) return id;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

inline bool is_sweep(Scenario s) {
  return s == Scenario::sm_sweep_je || s == Scenario::sm_sweep_jse;
}

/// Grid spacing used to derive the default number of steps.
inline constexpr double kDefaultMaxDt = 0.02;
inline constexpr double kDefaultRatio = 0.71;
inline const std::vector<double> kDefaultSweepRatios{0.25, 0.5, 0.71, 1.0};

inline constexpr std::array<std::string_view, 10> kConfigKeys{
    "scenario", "n", "ratio", "tmax", "steps",
    "out", "threads", "sweep_n", "sweep_ratio", "checkpoint"};

struct ScenarioConfig {
  Scenario scenario = Scenario::fig2;
  int n = 7;
  double ratio = kDefaultRatio;
  double t_max = 20.0;
  int n_steps = 1000;
  std::string out_dir = ".";
  int threads = 0;
  std::vector<int> sweep_n;
  std::vector<double> sweep_ratio;
  std::string checkpoint;
};

/// Raw key/value pairs, keys already lower-cased and checked.
using ConfigValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::string check_key(const std::string& raw) {
  std::string key = lower(raw);
  // Accept the CLI spelling sweep-n as well as sweep_n.
  std::replace(key.begin(), key.end(), '-', '_');
  if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
    throw ConfigError("unknown config key '" + raw + "'");
  }
  return key;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  }
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError("empty entry in '" + key + "'");
    out.push_back(parse_number<T>(key, t));
  }
  if (out.empty()) throw ConfigError("'" + key + "' must list at least one value");
  return out;
}

}  // namespace detail

/// Parses "key = value" lines. Blank lines and '#' comments are skipped.
inline ConfigValues parse_config_text(std::string_view text,
                                      const std::string& origin = "config") {
  ConfigValues values;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::check_key(detail::trim(body.substr(0, eq)));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (value.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty value for " + key);
    }
    if (!values.emplace(key, value).second) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
    }
  }
  return values;
}

inline ConfigValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// Merges file values with flags (flags win), fills scenario-dependent
/// defaults and validates the result.
inline ScenarioConfig resolve_config(const ConfigValues& file, const ConfigValues& flags) {
  ConfigValues v;
  for (const auto& [k, val] : file) v[detail::check_key(k)] = val;
  for (const auto& [k, val] : flags) v[detail::check_key(k)] = val;
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = v.find(key);
    if (it == v.end()) return std::nullopt;
    return it->second;
  };

  ScenarioConfig c;
  if (auto s = get("scenario")) c.scenario = scenario_from_name(*s);
  const bool long_run = c.scenario == Scenario::fig2 || c.scenario == Scenario::fig3 ||
                        c.scenario == Scenario::custom;
  const bool big_default = long_run || c.scenario == Scenario::sm_mi_time ||
                           c.scenario == Scenario::sm_discord;
  c.n = big_default ? 7 : 6;
  c.t_max = long_run ? 20.0 : 12.0;

  if (auto s = get("n")) c.n = detail::parse_number<int>("n", *s);
  if (auto s = get("ratio")) c.ratio = detail::parse_number<double>("ratio", *s);
  if (auto s = get("tmax")) c.t_max = detail::parse_number<double>("tmax", *s);
  if (auto s = get("out")) c.out_dir = *s;
  if (auto s = get("threads")) c.threads = detail::parse_number<int>("threads", *s);
  if (auto s = get("checkpoint")) c.checkpoint = *s;
  if (auto s = get("sweep_n")) c.sweep_n = detail::parse_list<int>("sweep_n", *s);
  if (auto s = get("sweep_ratio")) {
    c.sweep_ratio = detail::parse_list<double>("sweep_ratio", *s);
  }

  if (c.n < 1 || c.n > QubitLayout::kMaxChainLength) {
    throw ConfigError("n must be in [1, " + std::to_string(QubitLayout::kMaxChainLength) +
                      "], got " + std::to_string(c.n));
  }
  if (!std::isfinite(c.ratio) || c.ratio < 0.0) {
    throw ConfigError("ratio must be finite and >= 0");
  }
  if (!std::isfinite(c.t_max) || c.t_max <= 0.0) throw ConfigError("tmax must be > 0");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");

  c.n_steps = static_cast<int>(std::ceil(c.t_max / kDefaultMaxDt - 1e-9));
  if (auto s = get("steps")) c.n_steps = detail::parse_number<int>("steps", *s);
  if (c.n_steps < 2) throw ConfigError("steps must be >= 2");

  if (is_sweep(c.scenario)) {
    if (!c.sweep_n.empty() && !c.sweep_ratio.empty()) {
      throw ConfigError("set either sweep_n or sweep_ratio, not both");
    }
    if (!c.checkpoint.empty()) {
      throw ConfigError("checkpoint is only available for single-run scenarios");
    }
    if (c.sweep_n.empty() && c.sweep_ratio.empty()) c.sweep_ratio = kDefaultSweepRatios;
    for (int n : c.sweep_n) {
      if (n < 1 || n > QubitLayout::kMaxChainLength) {
        throw ConfigError("sweep_n entries must be in [1, " +
                          std::to_string(QubitLayout::kMaxChainLength) + "]");
      }
    }
    for (double r : c.sweep_ratio) {
      if (!std::isfinite(r) || r < 0.0) throw ConfigError("sweep_ratio entries must be >= 0");
    }
    // J_SE sets the time unit of the J_E sweep, so it cannot vanish.
    if (c.scenario == Scenario::sm_sweep_je) {
      const bool zero = c.sweep_n.empty()
                            ? std::any_of(c.sweep_ratio.begin(), c.sweep_ratio.end(),
                                          [](double r) { return r == 0.0; })
                            : c.ratio == 0.0;
      if (zero) throw ConfigError("sm_sweep_je needs ratio > 0");
    }
  } else if (!c.sweep_n.empty() || !c.sweep_ratio.empty()) {
    throw ConfigError("sweep lists only apply to sm_sweep_je and sm_sweep_jse");
  }
  return c;
}

inline ScenarioConfig parse_config(const std::optional<std::string>& path,
                                   const ConfigValues& flags = {}) {
  return resolve_config(path ? read_config_file(*path) : ConfigValues{}, flags);
}

/// Regimes where the timing laws are not expected to hold.
inline std::string regime_flag(double ratio) {
  if (ratio >= 0.9) return "strong_coupling";
  if (ratio <= 0.25) return "weak_coupling";
  return "";
}

}  // namespace qflow::experiments
