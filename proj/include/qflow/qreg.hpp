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
 * Register layout and state containers for a central qubit coupled to two
 * qubit chains.
 *
 * Global qubit 0 is the system. Chain a occupies qubits 1..N and chain b
 * qubits N+1..2N, both ordered outward from the system. Basis index bit k
 * holds the state of qubit k, with 0 <-> |0> (sigma_z = +1) and
 * 1 <-> |1> (sigma_z = -1).
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qflow/errors.hpp"

namespace qflow {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class Chain { a, b };

inline char chain_name(Chain c) { return c == Chain::a ? 'a' : 'b'; }

/// Position of a global qubit: either the system or (chain, depth).
struct Site {
  bool is_system = false;
  Chain chain = Chain::a;
  int depth = 0;  // 1..N along the chain, 0 for the system

  friend bool operator==(const Site&, const Site&) = default;
};

class QubitLayout {
 public:
  /// 2^(2N+1) must fit an index and an allocation.
  static constexpr int kMaxChainLength = 14;

  explicit QubitLayout(int n_per_chain) : n_(n_per_chain) {
    if (n_per_chain < 1) {
      throw ConfigError("chain length must be positive, got " +
                        std::to_string(n_per_chain));
    }
    if (n_per_chain > kMaxChainLength) {
      throw ConfigError("register of " + std::to_string(total_qubits()) +
                        " qubits is too large");
    }
  }

  int n_per_chain() const noexcept { return n_; }
  int total_qubits() const noexcept { return 2 * n_ + 1; }
  int env_qubits() const noexcept { return 2 * n_; }
  std::size_t dimension() const noexcept {
    return std::size_t{1} << total_qubits();
  }

  static constexpr int system() noexcept { return 0; }

  /// Global index of chain qubit `depth` (1-based).
  int qubit(Chain c, int depth) const {
    if (depth < 1 || depth > n_) {
      throw DimensionError("chain depth " + std::to_string(depth) +
                           " outside 1.." + std::to_string(n_));
    }
    return c == Chain::a ? depth : n_ + depth;
  }

  Site site(int global) const {
    if (global < 0 || global >= total_qubits()) {
      throw DimensionError("qubit index " + std::to_string(global) +
                           " outside register");
    }
    if (global == 0) return Site{true, Chain::a, 0};
    if (global <= n_) return Site{false, Chain::a, global};
    return Site{false, Chain::b, global - n_};
  }

  /// All environment qubits, 1..2N.
  std::vector<int> environment() const {
    std::vector<int> q(env_qubits());
    std::iota(q.begin(), q.end(), 1);
    return q;
  }

  /// Fragment F_m: depths 1..m of both chains (2m qubits).
  std::vector<int> fragment(int m) const {
    if (m < 0 || m > n_) {
      throw DimensionError("fragment size " + std::to_string(m) +
                           " outside 0.." + std::to_string(n_));
    }
    std::vector<int> q;
    q.reserve(2 * m);
    for (int k = 1; k <= m; ++k) q.push_back(qubit(Chain::a, k));
    for (int k = 1; k <= m; ++k) q.push_back(qubit(Chain::b, k));
    return q;
  }

  friend bool operator==(const QubitLayout&, const QubitLayout&) = default;

 private:
  int n_;
};

/// Normalized amplitude vector over the whole register.
class PureState {
 public:
  PureState(QubitLayout layout, CVector amplitudes)
      : layout_(layout), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != layout_.dimension()) {
      throw DimensionError("amplitude vector of length " +
                           std::to_string(amps_.size()) +
                           " does not match register dimension " +
                           std::to_string(layout_.dimension()));
    }
  }

  const QubitLayout& layout() const noexcept { return layout_; }
  const CVector& amplitudes() const noexcept { return amps_; }
  CVector& amplitudes() noexcept { return amps_; }
  std::span<const Complex> span() const noexcept {
    return {amps_.data(), static_cast<std::size_t>(amps_.size())};
  }
  double norm() const { return amps_.norm(); }

 private:
  QubitLayout layout_;
  CVector amps_;
};

/// Hermitian, trace-one operator on an ordered qubit subset. Local bit i of
/// the operator's index corresponds to qubits()[i].
///
/// A factored operator stores B with rho = B B^dagger; the column count is
/// the rank.
class DensityOp {
 public:
  enum class Form { dense, factored };

  static DensityOp dense(std::vector<int> qubits, CMatrix rho) {
    check_rows(qubits, rho);
    if (rho.rows() != rho.cols()) {
      throw DimensionError("dense density operator must be square");
    }
    return DensityOp(std::move(qubits), std::move(rho), Form::dense);
  }

  static DensityOp factored(std::vector<int> qubits, CMatrix factor) {
    check_rows(qubits, factor);
    return DensityOp(std::move(qubits), std::move(factor), Form::factored);
  }

  Form form() const noexcept { return form_; }
  bool is_factored() const noexcept { return form_ == Form::factored; }
  const std::vector<int>& qubits() const noexcept { return qubits_; }
  std::size_t num_qubits() const noexcept { return qubits_.size(); }
  Eigen::Index dim() const noexcept { return data_.rows(); }

  /// Matrix for dense form, factor B for factored form.
  const CMatrix& data() const noexcept { return data_; }

  Eigen::Index rank() const {
    return is_factored() ? data_.cols() : dim();
  }

  CMatrix to_dense() const {
    if (is_factored()) return data_ * data_.adjoint();
    return data_;
  }

  double trace() const {
    if (is_factored()) return data_.squaredNorm();
    return data_.trace().real();
  }

  /// Hermiticity, positivity and unit trace, all within `tol`.
  bool is_valid(double tol = 1e-10) const {
    if (std::abs(trace() - 1.0) > tol) return false;
    if (is_factored()) return true;
    if ((data_ - data_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(data_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }

 private:
  DensityOp(std::vector<int> q, CMatrix d, Form f)
      : qubits_(std::move(q)), data_(std::move(d)), form_(f) {}

  static void check_rows(const std::vector<int>& qubits, const CMatrix& m) {
    if (qubits.size() >= 31 ||
        m.rows() != (Eigen::Index{1} << qubits.size())) {
      throw DimensionError("operator with " + std::to_string(m.rows()) +
                           " rows does not act on " +
                           std::to_string(qubits.size()) + " qubits");
    }
  }

  std::vector<int> qubits_;
  CMatrix data_;
  Form form_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  /// (I + r.sigma) / 2
  Eigen::Matrix2cd to_matrix() const {
    Eigen::Matrix2cd m;
    m << Complex(1.0 + z, 0.0), Complex(x, -y),  //
        Complex(x, y), Complex(1.0 - z, 0.0);
    return 0.5 * m;
  }
};

/// psi(+) = |+>|0...0> and psi(-) = |->|0...0>.
inline std::pair<PureState, PureState> make_initial_states(
    const QubitLayout& layout) {
  const double h = 1.0 / std::sqrt(2.0);
  CVector plus = CVector::Zero(static_cast<Eigen::Index>(layout.dimension()));
  CVector minus = plus;
  plus[0] = h;
  plus[1] = h;
  minus[0] = h;
  minus[1] = -h;
  return {PureState(layout, std::move(plus)),
          PureState(layout, std::move(minus))};
}

inline BlochVector bloch_of(const Eigen::Ref<const CMatrix>& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw DimensionError("Bloch vector needs a single-qubit operator, got " +
                         std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()));
  }
  // Tr(rho sigma_x) = 2 Re rho_10, Tr(rho sigma_y) = 2 Im rho_10.
  return BlochVector{2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(),
                     (rho(0, 0) - rho(1, 1)).real()};
}

inline BlochVector bloch_of(const DensityOp& rho) {
  if (rho.num_qubits() != 1) {
    throw DimensionError("Bloch vector needs a single-qubit operator, got " +
                         std::to_string(rho.num_qubits()) + " qubits");
  }
  return bloch_of(rho.to_dense());
}

}  // namespace qflow
