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
 * Unitary evolution psi(t + dt) = exp(-i H dt) psi(t) by a Lanczos subspace
 * exponential, and paired conditional trajectories started from |+> and |->.
 *
 * The global state stays pure, so rho_SE(t) = |psi(t)><psi(t)| and only the
 * 2^(2N+1) amplitudes are propagated.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qflow/hamiltonian.hpp"

namespace qflow {

struct KrylovOptions {
  int start_dim = 20;
  int max_dim = 120;
  /// Bound on the a-posteriori residual estimate of one Krylov step.
  double tolerance = 1e-10;
  int max_substeps = 1000;
  /// Largest |dt| * spectral_bound attempted in a single Krylov step.
  double max_step_norm = 10.0;
};

/// Lanczos propagator with full reorthogonalization. Holds its own
/// workspace, so one instance per concurrent trajectory.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(const Hamiltonian& h, KrylovOptions opts = {})
      : h_(&h), opts_(opts) {}

  const KrylovOptions& options() const noexcept { return opts_; }

  /// Largest subspace dimension used since construction.
  int max_dim_used() const noexcept { return max_dim_used_; }
  long substeps_taken() const noexcept { return substeps_taken_; }

  CVector propagate(const CVector& psi, double dt) {
    if (static_cast<std::size_t>(psi.size()) != h_->dimension()) {
      throw DimensionError("state of length " + std::to_string(psi.size()) +
                           " does not match Hamiltonian dimension " +
                           std::to_string(h_->dimension()));
    }
    if (!std::isfinite(dt)) throw PropagationError("non-finite time step", 0.0);
    if (dt == 0.0) return psi;

    const double scaled = std::abs(dt) * h_->spectral_bound();
    const int pieces = std::max(1, static_cast<int>(std::ceil(scaled / opts_.max_step_norm)));
    if (pieces > opts_.max_substeps) {
      throw PropagationError("time step needs " + std::to_string(pieces) +
                                 " substeps, cap is " +
                                 std::to_string(opts_.max_substeps),
                             std::numeric_limits<double>::infinity());
    }
    budget_ = opts_.max_substeps;
    CVector v = psi;
    const double h = dt / pieces;
    for (int p = 0; p < pieces; ++p) advance(v, h);
    return v;
  }

  PureState propagate(const PureState& psi, double dt) {
    return PureState(psi.layout(), propagate(psi.amplitudes(), dt));
  }

 private:
  struct StepResult {
    bool converged = false;
    double residual = 0.0;
  };

  void advance(CVector& v, double h) {
    if (--budget_ < 0) {
      throw PropagationError("Krylov substep budget of " +
                                 std::to_string(opts_.max_substeps) +
                                 " exhausted",
                             last_residual_);
    }
    StepResult r = krylov_step(v, h);
    if (r.converged) {
      ++substeps_taken_;
      return;
    }
    last_residual_ = r.residual;
    advance(v, 0.5 * h);
    advance(v, 0.5 * h);
  }

  /// exp(-i h T) e_1 for the leading m x m block of the Lanczos matrix.
  Eigen::VectorXcd small_exponential(int m, double h) const {
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha_.data(), m);
    if (m == 1) {
      Eigen::VectorXcd c(1);
      c[0] = std::exp(-kI * h * diag[0]);
      return c;
    }
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta_.data(), m - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::VectorXcd phase(m);
    for (int i = 0; i < m; ++i) {
      phase[i] = std::exp(-kI * h * es.eigenvalues()[i]) * q(0, i);
    }
    return q.cast<Complex>() * phase;
  }

  StepResult krylov_step(CVector& v, double h) {
    const double beta0 = v.norm();
    if (beta0 == 0.0) return {true, 0.0};

    const Eigen::Index dim = v.size();
    const int cap = static_cast<int>(std::min<Eigen::Index>(opts_.max_dim, dim));
    const int first_check = std::min(opts_.start_dim, cap);
    // Invariant-subspace threshold relative to the operator scale.
    const double breakdown = 1e-13 * std::max(1.0, h_->spectral_bound());

    if (basis_.size() < static_cast<std::size_t>(cap + 1)) basis_.resize(cap + 1);
    alpha_.assign(cap, 0.0);
    beta_.assign(cap, 0.0);
    basis_[0] = v / beta0;
    work_.resize(dim);

    double residual = 0.0;
    for (int j = 0; j < cap; ++j) {
      h_->apply(std::span<const Complex>(basis_[j].data(), static_cast<std::size_t>(dim)),
                std::span<Complex>(work_.data(), static_cast<std::size_t>(dim)));
      alpha_[j] = basis_[j].dot(work_).real();
      work_ -= alpha_[j] * basis_[j];
      if (j > 0) work_ -= beta_[j - 1] * basis_[j - 1];
      for (int i = 0; i <= j; ++i) work_ -= basis_[i].dot(work_) * basis_[i];
      beta_[j] = work_.norm();

      const int m = j + 1;
      const bool invariant = beta_[j] < breakdown || m == dim;
      if (m >= first_check || invariant) {
        Eigen::VectorXcd c = small_exponential(m, h);
        residual = invariant ? 0.0 : beta0 * beta_[j] * std::abs(c[m - 1]);
        if (residual < opts_.tolerance) {
          max_dim_used_ = std::max(max_dim_used_, m);
          v.setZero();
          for (int i = 0; i < m; ++i) v += c[i] * basis_[i];
          v *= beta0;
          return {true, residual};
        }
      }
      if (m == cap) break;
      basis_[j + 1] = work_ / beta_[j];
    }
    return {false, residual};
  }

  const Hamiltonian* h_;
  KrylovOptions opts_;
  std::vector<CVector> basis_;
  CVector work_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  int budget_ = 0;
  int max_dim_used_ = 0;
  long substeps_taken_ = 0;
  double last_residual_ = 0.0;
};

/// One-shot propagation of `psi` by `dt` under `terms`.
inline PureState propagate(const PureState& psi,
                           const std::vector<PauliTerm>& terms, double dt,
                           KrylovOptions opts = {}) {
  Hamiltonian h(terms, psi.layout().total_qubits());
  KrylovPropagator prop(h, opts);
  return prop.propagate(psi, dt);
}

/// Uniform grid t_i = i * t_max / n_steps, i = 0..n_steps.
inline std::vector<double> uniform_grid(double t_max, int n_steps) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw ConfigError("t_max must be positive and finite");
  }
  if (n_steps < 2) throw ConfigError("need at least 2 time steps");
  std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i) t[i] = i * t_max / n_steps;
  return t;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<PureState> states_plus;
  std::vector<PureState> states_minus;
  ModelParams params;

  std::size_t size() const noexcept { return times.size(); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Called once per grid point, in order, with both conditional states.
using GridVisitor = std::function<void(std::size_t index, double t,
                                       const PureState& plus,
                                       const PureState& minus)>;

namespace detail {

inline void walk_grid(const ModelParams& params, double t_max, int n_steps,
                      std::size_t stop_index, const GridVisitor& visit,
                      const KrylovOptions& opts) {
  const std::vector<double> grid = uniform_grid(t_max, n_steps);
  const Hamiltonian h(params);
  KrylovPropagator prop_plus(h, opts);
  KrylovPropagator prop_minus(h, opts);
  auto [plus, minus] = make_initial_states(params.layout);
  const double dt = t_max / n_steps;
  const std::size_t stop = std::min(stop_index, grid.size() - 1);

  visit(0, grid[0], plus, minus);
  for (std::size_t i = 1; i <= stop; ++i) {
    std::exception_ptr failure[2];
#pragma omp parallel sections
    {
#pragma omp section
      {
        try {
          plus.amplitudes() = prop_plus.propagate(plus.amplitudes(), dt);
        } catch (...) {
          failure[0] = std::current_exception();
        }
      }
#pragma omp section
      {
        try {
          minus.amplitudes() = prop_minus.propagate(minus.amplitudes(), dt);
        } catch (...) {
          failure[1] = std::current_exception();
        }
      }
    }
    for (const auto& f : failure) {
      if (!f) continue;
      try {
        std::rethrow_exception(f);
      } catch (const PropagationError& e) {
        throw PropagationError(std::string(e.what()) + " at grid index " +
                                   std::to_string(i),
                               e.residual(), static_cast<std::ptrdiff_t>(i));
      }
    }
    visit(i, grid[i], plus, minus);
  }
}

}  // namespace detail

/// Propagates psi(+) and psi(-) across the grid without storing states.
inline void for_each_grid_point(const ModelParams& params, double t_max,
                                int n_steps, const GridVisitor& visit,
                                KrylovOptions opts = {}) {
  detail::walk_grid(params, t_max, n_steps,
                    static_cast<std::size_t>(n_steps), visit, opts);
}

inline Trajectory run_trajectory(const ModelParams& params, double t_max,
                                 int n_steps, KrylovOptions opts = {}) {
  Trajectory traj{{}, {}, {}, params};
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  for_each_grid_point(
      params, t_max, n_steps,
      [&](std::size_t, double t, const PureState& p, const PureState& m) {
        traj.times.push_back(t);
        traj.states_plus.push_back(p);
        traj.states_minus.push_back(m);
      },
      opts);
  return traj;
}

/// Conditional states at selected grid indices only (same propagation path
/// as run_trajectory, so the states are bit-identical).
inline std::map<std::size_t, std::pair<PureState, PureState>> states_at(
    const ModelParams& params, double t_max, int n_steps,
    const std::vector<std::size_t>& indices, KrylovOptions opts = {}) {
  std::map<std::size_t, std::pair<PureState, PureState>> out;
  if (indices.empty()) return out;
  const std::size_t last = *std::max_element(indices.begin(), indices.end());
  if (last > static_cast<std::size_t>(n_steps)) {
    throw DimensionError("grid index " + std::to_string(last) +
                         " beyond n_steps " + std::to_string(n_steps));
  }
  detail::walk_grid(
      params, t_max, n_steps, last,
      [&](std::size_t i, double, const PureState& p, const PureState& m) {
        if (std::find(indices.begin(), indices.end(), i) != indices.end()) {
          out.emplace(i, std::make_pair(p, m));
        }
      },
      opts);
  return out;
}

}  // namespace qflow
