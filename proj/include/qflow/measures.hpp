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

/**
 * @file
 * Information-theoretic functionals on conditional states: trace distances
 * (with the 1/2 normalization, so orthogonal pure states are at distance 1),
 * their time derivatives, accumulated backflow, the system-environment
 * information-flow bound, mutual information, Holevo information and discord.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qflow/evolve.hpp"
#include "qflow/reduce.hpp"

namespace qflow {

struct SeriesPoint {
  double t = 0.0;
  double value = 0.0;
};

using Series = std::vector<SeriesPoint>;

// ---------------------------------------------------------------------------
// Trace distances

/// (1/2) sum |eig(a - b)| for Hermitian a, b.
inline double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("trace distance between " + std::to_string(a.rows()) +
                         "- and " + std::to_string(b.rows()) +
                         "-dimensional operators");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Trace distance of B1 B1^dagger and B2 B2^dagger without forming either:
/// the difference is projected onto an orthonormal basis of the joint
/// column span, which contains both ranges.
inline double trace_distance_lowrank(const CMatrix& b1, const CMatrix& b2) {
  if (b1.rows() != b2.rows()) {
    throw DimensionError("low-rank factors with " + std::to_string(b1.rows()) +
                         " and " + std::to_string(b2.rows()) + " rows");
  }
  if (b1.cols() + b2.cols() == 0) return 0.0;
  CMatrix joint(b1.rows(), b1.cols() + b2.cols());
  joint << b1, b2;
  Eigen::JacobiSVD<CMatrix> svd(joint, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s[k] > kRankCutoff) ++k;
  if (k == 0) return 0.0;
  const auto q = svd.matrixU().leftCols(k);
  const CMatrix p1 = q.adjoint() * b1;
  const CMatrix p2 = q.adjoint() * b2;
  return trace_distance(CMatrix(p1 * p1.adjoint()), CMatrix(p2 * p2.adjoint()));
}

inline double trace_distance_lowrank(const DensityOp& r1, const DensityOp& r2) {
  if (r1.qubits() != r2.qubits()) {
    throw DimensionError("trace distance between operators on different qubits");
  }
  if (!r1.is_factored() || !r2.is_factored()) {
    throw DimensionError("low-rank trace distance needs factored operators");
  }
  return trace_distance_lowrank(r1.data(), r2.data());
}

inline double trace_distance(const DensityOp& r1, const DensityOp& r2) {
  if (r1.qubits() != r2.qubits()) {
    throw DimensionError("trace distance between operators on different qubits");
  }
  if (r1.is_factored() && r2.is_factored()) {
    return trace_distance_lowrank(r1.data(), r2.data());
  }
  return trace_distance(r1.to_dense(), r2.to_dense());
}

/// Single-qubit form: |r1 - r2| / 2.
inline double trace_distance(const BlochVector& r1, const BlochVector& r2) {
  const double dx = r1.x - r2.x, dy = r1.y - r2.y, dz = r1.z - r2.z;
  return 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz);
}

// ---------------------------------------------------------------------------
// Distances between conditional states at one instant

namespace detail {

inline auto system_split(const PureState& psi) {
  const Eigen::Index env_dim = Eigen::Index{1} << psi.layout().env_qubits();
  return Eigen::Map<const CMatrix>(psi.amplitudes().data(), 2, env_dim);
}

inline void check_pair(const PureState& plus, const PureState& minus) {
  if (!(plus.layout() == minus.layout())) {
    throw DimensionError("conditional states live on different registers");
  }
}

}  // namespace detail

/// rho_S of a pure register state.
inline Eigen::Matrix2cd system_state(const PureState& psi) {
  const auto a = detail::system_split(psi);
  return a * a.adjoint();
}

inline double system_distance(const PureState& plus, const PureState& minus) {
  detail::check_pair(plus, minus);
  return trace_distance(CMatrix(system_state(plus)), CMatrix(system_state(minus)));
}

inline double env_distance(const PureState& plus, const PureState& minus) {
  detail::check_pair(plus, minus);
  return trace_distance_lowrank(env_factor(plus), env_factor(minus));
}

inline double qubit_distance(const PureState& plus, const PureState& minus,
                             int qubit) {
  detail::check_pair(plus, minus);
  return trace_distance(partial_trace(plus, {qubit}),
                        partial_trace(minus, {qubit}));
}

inline double env_qubit_distance(const PureState& plus, const PureState& minus,
                                 Chain chain, int depth) {
  return qubit_distance(plus, minus, plus.layout().qubit(chain, depth));
}

/// D(|psi><psi|, rho_S (x) rho_E); the product has rank <= 4.
inline double system_env_correlation(const PureState& psi) {
  const Eigen::Matrix2cd rho_s = system_state(psi);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho_s);
  Eigen::Matrix2cd s_factor =
      es.eigenvectors() *
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const CMatrix e_factor = env_factor(psi).data();

  const Eigen::Index dim = psi.amplitudes().size();
  CMatrix product(dim, 2 * e_factor.cols());
  for (Eigen::Index c = 0; c < 2; ++c) {
    for (Eigen::Index b = 0; b < e_factor.cols(); ++b) {
      auto col = product.col(c * e_factor.cols() + b);
      // Full index = s + 2 e.
      for (Eigen::Index e = 0; e < e_factor.rows(); ++e) {
        col[2 * e] = e_factor(e, b) * s_factor(0, c);
        col[2 * e + 1] = e_factor(e, b) * s_factor(1, c);
      }
    }
  }
  return trace_distance_lowrank(psi.amplitudes(), product);
}

// ---------------------------------------------------------------------------
// Series over a stored trajectory

inline Series system_distance_series(const Trajectory& traj) {
  Series s(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    s[i] = {traj.times[i], system_distance(traj.states_plus[i], traj.states_minus[i])};
  }
  return s;
}

inline Series env_distance_series(const Trajectory& traj) {
  Series s(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    s[i] = {traj.times[i], env_distance(traj.states_plus[i], traj.states_minus[i])};
  }
  return s;
}

inline Series env_qubit_distance_series(const Trajectory& traj, Chain chain,
                                        int depth) {
  Series s(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    s[i] = {traj.times[i], env_qubit_distance(traj.states_plus[i],
                                              traj.states_minus[i], chain, depth)};
  }
  return s;
}

inline std::vector<double> values(const Series& s) {
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v[i] = s[i].value;
  return v;
}

// ---------------------------------------------------------------------------
// Derivative and accumulated backflow

/// d/dt of a uniformly sampled series: central differences inside,
/// one-sided at the two ends.
inline Series sigma(const Series& series) {
  const std::size_t n = series.size();
  if (n < 3) {
    throw AnalysisError("derivative needs at least 3 samples, got " +
                        std::to_string(n));
  }
  const double dt = series[1].t - series[0].t;
  if (!(dt > 0.0)) throw AnalysisError("time grid must be increasing");
  for (std::size_t i = 1; i < n; ++i) {
    const double step = series[i].t - series[i - 1].t;
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(series[i].t))) {
      throw AnalysisError("time grid is not uniform at index " +
                          std::to_string(i));
    }
  }
  Series d(n);
  d[0] = {series[0].t, (series[1].value - series[0].value) / dt};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = {series[i].t, (series[i + 1].value - series[i - 1].value) / (2.0 * dt)};
  }
  d[n - 1] = {series[n - 1].t, (series[n - 1].value - series[n - 2].value) / dt};
  return d;
}

/// Integral of max(dD/dt, 0) over the piecewise-linear interpolant of the
/// series, i.e. the sum of its positive increments.
inline double blp_accumulated(const Series& series) {
  double total = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    total += std::max(series[i].value - series[i - 1].value, 0.0);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Information-flow bound
//
//   D_S(t) - D_S(tau) <= D(rho_E+(tau), rho_E-(tau))
//                        + sum_j D(rho_SE^j(tau), rho_S^j(tau) (x) rho_E^j(tau))
//   for every t > tau.

/// Right-hand-side terms at a single instant.
struct LaineRhs {
  double d_env = 0.0;
  double corr_plus = 0.0;
  double corr_minus = 0.0;
};

struct LaineTerms {
  double lhs_sup = 0.0;  // max over t > tau of D_S(t) - D_S(tau), clipped at 0
  double d_env = 0.0;
  double corr_plus = 0.0;
  double corr_minus = 0.0;
  double slack = 0.0;  // d_env + corr_plus + corr_minus - lhs_sup
};

inline LaineRhs laine_rhs(const PureState& plus, const PureState& minus) {
  return LaineRhs{env_distance(plus, minus), system_env_correlation(plus),
                  system_env_correlation(minus)};
}

/// Combines the system distance series with per-instant right-hand sides.
inline std::vector<LaineTerms> laine_series(const std::vector<double>& d_s,
                                            const std::vector<LaineRhs>& rhs) {
  if (d_s.size() != rhs.size()) {
    throw DimensionError("distance series and bound terms differ in length");
  }
  const std::size_t n = d_s.size();
  std::vector<LaineTerms> out(n);
  double future_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = n; i-- > 0;) {
    const double lhs = std::isfinite(future_max) ? std::max(future_max - d_s[i], 0.0) : 0.0;
    const auto& r = rhs[i];
    out[i] = LaineTerms{lhs, r.d_env, r.corr_plus, r.corr_minus,
                        r.d_env + r.corr_plus + r.corr_minus - lhs};
    future_max = std::max(future_max, d_s[i]);
  }
  return out;
}

inline LaineTerms laine_terms(const Trajectory& traj, std::size_t tau_index) {
  if (tau_index >= traj.size()) {
    throw DimensionError("grid index " + std::to_string(tau_index) +
                         " outside trajectory of " + std::to_string(traj.size()));
  }
  const std::vector<double> d_s = values(system_distance_series(traj));
  double lhs = 0.0;
  for (std::size_t i = tau_index + 1; i < d_s.size(); ++i) {
    lhs = std::max(lhs, d_s[i] - d_s[tau_index]);
  }
  const LaineRhs r = laine_rhs(traj.states_plus[tau_index], traj.states_minus[tau_index]);
  return LaineTerms{lhs, r.d_env, r.corr_plus, r.corr_minus,
                    r.d_env + r.corr_plus + r.corr_minus - lhs};
}

// ---------------------------------------------------------------------------
// Mutual information, Holevo information, discord

/// I(S : F_m) in bits; F_0 gives 0.
inline double mutual_information(const PureState& psi, int m) {
  const auto& lay = psi.layout();
  const std::vector<int> frag = lay.fragment(m);  // range-checks m
  if (m == 0) return 0.0;
  std::vector<int> joint = frag;
  joint.insert(joint.begin(), QubitLayout::system());
  const double s_sys = entropy_of_subset(psi, {QubitLayout::system()});
  const double s_frag = entropy_of_subset(psi, frag);
  const double s_joint = entropy_of_subset(psi, joint);
  return s_sys + s_frag - s_joint;
}

/// Mutual information between the system and a single qubit.
inline double qubit_mutual_information(const PureState& psi, int qubit) {
  const double s_sys = entropy_of_subset(psi, {QubitLayout::system()});
  const double s_q = entropy_of_subset(psi, {qubit});
  const double s_joint = entropy_of_subset(psi, {QubitLayout::system(), qubit});
  return s_sys + s_q - s_joint;
}

/// Two-outcome projective measurement on the system:
///   |m0> = cos(theta)|0> + e^{i phi} sin(theta)|1>
///   |m1> = e^{-i phi} sin(theta)|0> - cos(theta)|1>
struct MeasurementSetting {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)

  void validate() const {
    if (!std::isfinite(theta) || !std::isfinite(phi) || theta < 0.0 ||
        theta > std::numbers::pi || phi < 0.0 || phi >= 2.0 * std::numbers::pi) {
      throw ConfigError("measurement angles out of range: theta=" +
                        std::to_string(theta) + " phi=" + std::to_string(phi));
    }
  }

  Eigen::Vector2cd outcome(int k) const {
    const Complex e = std::exp(kI * phi);
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Vector2cd v;
    if (k == 0) {
      v << c, e * s;
    } else {
      v << std::conj(e) * s, -c;
    }
    return v;
  }
};

/// Outcome probabilities below this contribute nothing to the Holevo sum.
inline constexpr double kMinOutcomeProbability = 1e-14;

/// Holevo information S(F_m) - sum_k p_k S(F_m | k) of fragment F_m for
/// measurements on the system, reusing the setting-independent parts.
///
/// The post-measurement environment state for outcome k is
/// conj(m_k0) a_0 + conj(m_k1) a_1, with a_s the environment amplitudes for
/// system bit s. Its reduced state on the smaller of F_m and E \ F_m is a
/// quadratic form in the four blocks M_s M_s'^dagger, built once here.
class HolevoEvaluator {
 public:
  HolevoEvaluator(const PureState& psi, int m) {
    const auto& lay = psi.layout();
    frag_entropy_ = entropy_of_subset(psi, lay.fragment(m));
    const int env_n = lay.env_qubits();
    std::vector<int> frag_local;
    for (int q : lay.fragment(m)) frag_local.push_back(q - 1);
    const std::vector<int> rest_local = detail::complement(frag_local, env_n);
    const std::vector<int>& side =
        frag_local.size() <= rest_local.size() ? frag_local : rest_local;

    const auto a = detail::system_split(psi);
    const Eigen::Index env_dim = a.cols();
    CMatrix ms[2];
    for (int s = 0; s < 2; ++s) {
      const CVector row = a.row(s).transpose();
      const std::span<const Complex> amps(row.data(), static_cast<std::size_t>(env_dim));
      // An empty side yields a single row: the state's overlap structure.
      ms[s] = detail::split_matrix(amps, env_n, side);
    }
    g00_ = ms[0] * ms[0].adjoint();
    g01_ = ms[0] * ms[1].adjoint();
    g11_ = ms[1] * ms[1].adjoint();
  }

  double fragment_entropy() const noexcept { return frag_entropy_; }

  double operator()(const MeasurementSetting& setting) const {
    double conditional = 0.0;
    for (int k = 0; k < 2; ++k) {
      const Eigen::Vector2cd v = setting.outcome(k);
      // rho = sum_{s,s'} conj(v_s) v_s' M_s M_s'^dagger
      const Complex c01 = std::conj(v[0]) * v[1];
      CMatrix rho = std::norm(v[0]) * g00_ + std::norm(v[1]) * g11_ +
                    c01 * g01_ + std::conj(c01) * g01_.adjoint();
      const double p = rho.trace().real();
      if (p < kMinOutcomeProbability) continue;
      conditional += p * von_neumann_entropy(rho / p);
    }
    return frag_entropy_ - conditional;
  }

 private:
  double frag_entropy_ = 0.0;
  CMatrix g00_, g01_, g11_;
};

inline double holevo(const PureState& psi, int m,
                     const MeasurementSetting& setting) {
  setting.validate();
  return HolevoEvaluator(psi, m)(setting);
}

struct DiscordOptions {
  int theta_points = 64;
  int phi_points = 64;
  /// Refinement stops once both angular steps are below this (radians).
  double min_step = 1e-3;
};

struct DiscordResult {
  double discord = 0.0;
  double mutual_information = 0.0;
  double holevo_max = 0.0;
  MeasurementSetting best;
  long evaluations = 0;
};

/// I(S:F_m) minus the largest Holevo information over measurement settings.
/// Coarse grid over theta in [0, pi] and phi in [0, 2 pi), then coordinate
/// ascent with step halving. Ties go to the lexicographically lowest
/// (theta, phi).
inline DiscordResult discord(const PureState& psi, int m,
                             const DiscordOptions& opts = {}) {
  if (m < 1) throw DimensionError("discord needs a fragment of size >= 1");
  if (opts.theta_points < 2 || opts.phi_points < 1) {
    throw ConfigError("discord grid needs at least 2 x 1 points");
  }
  constexpr double pi = std::numbers::pi;
  const HolevoEvaluator holevo_at(psi, m);
  DiscordResult res;
  res.mutual_information = mutual_information(psi, m);

  const double d_theta = pi / (opts.theta_points - 1);
  const double d_phi = 2.0 * pi / opts.phi_points;
  const int n_grid = opts.theta_points * opts.phi_points;
  std::vector<double> grid(static_cast<std::size_t>(n_grid));
#pragma omp parallel for schedule(dynamic)
  for (int g = 0; g < n_grid; ++g) {
    const int i = g / opts.phi_points, j = g % opts.phi_points;
    grid[g] = holevo_at({i * d_theta, j * d_phi});
  }
  res.evaluations = n_grid;
  int best = 0;
  for (int g = 1; g < n_grid; ++g) {
    if (grid[g] > grid[best]) best = g;
  }
  MeasurementSetting cur{(best / opts.phi_points) * d_theta,
                         (best % opts.phi_points) * d_phi};
  double cur_val = grid[best];

  auto wrap_phi = [&](double p) {
    p = std::fmod(p, 2.0 * pi);
    if (p < 0.0) p += 2.0 * pi;
    return p >= 2.0 * pi ? 0.0 : p;
  };
  double step_theta = d_theta, step_phi = d_phi;
  while (std::max(step_theta, step_phi) >= opts.min_step) {
    bool improved = false;
    for (double dir : {-1.0, 1.0}) {
      MeasurementSetting trial{std::clamp(cur.theta + dir * step_theta, 0.0, pi), cur.phi};
      const double v = holevo_at(trial);
      ++res.evaluations;
      if (v > cur_val) {
        cur = trial;
        cur_val = v;
        improved = true;
      }
    }
    for (double dir : {-1.0, 1.0}) {
      MeasurementSetting trial{cur.theta, wrap_phi(cur.phi + dir * step_phi)};
      const double v = holevo_at(trial);
      ++res.evaluations;
      if (v > cur_val) {
        cur = trial;
        cur_val = v;
        improved = true;
      }
    }
    if (!improved) {
      step_theta *= 0.5;
      step_phi *= 0.5;
    }
  }
  res.best = cur;
  res.holevo_max = cur_val;
  res.discord = res.mutual_information - cur_val;
  return res;
}

}  // namespace qflow
