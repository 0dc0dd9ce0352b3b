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

// Locating the plateau of environment distinguishability.
//
// A: first local maximum of D_E that is at least `min_height` tall and is
//    followed by `confirm_steps` samples with d D_E/dt below
//    `sigma_threshold`, i.e. D_E has stopped growing.
// B: last sample of the contiguous run after A where D_E stays within
//    `band` of D_E(A). On the plateau D_E wobbles with |dD_E/dt| of a few
//    percent, so a pure derivative test would end it on the first wobble.
// C: first local maximum of D_S after B.
#pragma once

#include <string>

#include "qflow/measures.hpp"

namespace qflow::experiments {

struct PlateauOptions {
  double sigma_threshold = 1e-3;
  int confirm_steps = 3;
  double band = 0.2;
  double min_height = 0.1;
};

struct PointsABC {
  double t_A = 0.0, t_B = 0.0, t_C = 0.0;
  std::size_t i_A = 0, i_B = 0, i_C = 0;
};

namespace detail {

/// Interior strict-left local maximum: v[i-1] < v[i] >= v[i+1].
inline bool local_max(const std::vector<double>& v, std::size_t i) {
  return i > 0 && i + 1 < v.size() && v[i - 1] < v[i] && v[i] >= v[i + 1];
}

}  // namespace detail

inline PointsABC locate_points(const Series& d_s, const Series& d_e,
                               const PlateauOptions& opt = {}) {
  if (d_s.size() != d_e.size()) {
    throw DimensionError("D_S and D_E series differ in length");
  }
  const std::vector<double> e = values(d_e);
  const std::vector<double> s = values(d_s);
  const std::vector<double> sig = values(sigma(d_e));
  const std::size_t n = e.size();
  const auto confirm = static_cast<std::size_t>(opt.confirm_steps);

  PointsABC p;
  bool found = false;
  for (std::size_t i = 1; i + confirm < n; ++i) {
    if (!detail::local_max(e, i) || e[i] < opt.min_height) continue;
    bool flat = true;
    for (std::size_t k = 1; k <= confirm; ++k) flat = flat && sig[i + k] < opt.sigma_threshold;
    if (flat) {
      p.i_A = i;
      found = true;
      break;
    }
  }
  if (!found) {
    throw AnalysisError("no D_E plateau: no local maximum >= " + std::to_string(opt.min_height) +
                        " followed by " + std::to_string(opt.confirm_steps) +
                        " steps with sigma_E < " + std::to_string(opt.sigma_threshold));
  }

  const double floor = e[p.i_A] - opt.band;
  std::size_t b = p.i_A;
  while (b + 1 < n && e[b + 1] >= floor) ++b;
  if (b + 1 == n) {
    throw AnalysisError("D_E plateau does not end before t_max (band " +
                        std::to_string(opt.band) + ")");
  }
  p.i_B = b;

  found = false;
  for (std::size_t i = p.i_B + 1; i + 1 < n; ++i) {
    if (detail::local_max(s, i)) {
      p.i_C = i;
      found = true;
      break;
    }
  }
  if (!found) throw AnalysisError("no D_S revival after the plateau before t_max");

  p.t_A = d_e[p.i_A].t;
  p.t_B = d_e[p.i_B].t;
  p.t_C = d_s[p.i_C].t;
  return p;
}

}  // namespace qflow::experiments
