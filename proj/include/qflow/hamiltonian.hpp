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
 * Pauli-string Hamiltonian of a system qubit coupled to two chains, and its
 * matrix-free application to state vectors.
 *
 *   H_SE = J_SE sum_alpha (2 Z0 Z_{alpha,1} + X0 X_{alpha,1} + Y0 Y_{alpha,1})
 *   H_E  = J_E  sum_alpha sum_k (2 ZZ - XX - YY) on (alpha,k), (alpha,k+1)
 *
 * Operators are Pauli matrices (eigenvalues +-1). Time is dimensionless,
 * t = J_E tau, when J_E = 1.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qflow/qreg.hpp"

namespace qflow {

/// Physical intra-chain coupling of the NMR platform, used for axis labels.
inline constexpr double kPhysicalJeRadPerSecond = 700.0;

struct ModelParams {
  QubitLayout layout;
  double j_se = 0.71;
  double j_e = 1.0;

  /// J_E = 1, so H and the time grid are in units of J_E.
  static ModelParams dimensionless(int n_per_chain, double ratio) {
    ModelParams p{QubitLayout(n_per_chain), ratio, 1.0};
    p.validate();
    return p;
  }

  void validate() const {
    if (!(j_e > 0.0) || !std::isfinite(j_e)) {
      throw ConfigError("J_E must be positive and finite");
    }
    if (!(j_se >= 0.0) || !std::isfinite(j_se)) {
      throw ConfigError("J_SE must be non-negative and finite");
    }
  }
};

enum class Pauli : std::uint8_t { X, Y, Z };

inline char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    default: return 'Z';
  }
}

/// coefficient * (tensor product of single-qubit Paulis, identity elsewhere)
struct PauliTerm {
  double coefficient = 0.0;
  std::vector<std::pair<int, Pauli>> ops;  // sorted by qubit, unique

  std::string to_string() const {
    std::string s = std::to_string(coefficient) + " *";
    for (auto [q, p] : ops) {
      s += ' ';
      s += pauli_char(p);
      s += std::to_string(q);
    }
    return s;
  }
};

namespace detail {

inline PauliTerm two_body(double c, Pauli p, int q1, int q2) {
  if (q1 > q2) std::swap(q1, q2);
  return PauliTerm{c, {{q1, p}, {q2, p}}};
}

/// Bit-mask form: P|b> = phase * (-1)^popcount(b & z_mask) |b ^ x_mask>.
struct MaskedTerm {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  Complex factor;  // coefficient * i^(number of Y)
};

inline MaskedTerm to_masks(const PauliTerm& t) {
  MaskedTerm m;
  int n_y = 0;
  for (auto [q, p] : t.ops) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    // Y = i X Z
    if (p == Pauli::X || p == Pauli::Y) m.x_mask |= bit;
    if (p == Pauli::Z || p == Pauli::Y) m.z_mask |= bit;
    if (p == Pauli::Y) ++n_y;
  }
  static constexpr Complex kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  m.factor = t.coefficient * kPow[n_y % 4];
  return m;
}

inline void check_term_range(const std::vector<PauliTerm>& terms,
                             int total_qubits) {
  for (const auto& t : terms) {
    for (auto [q, p] : t.ops) {
      if (q < 0 || q >= total_qubits) {
        throw DimensionError("term " + t.to_string() + " acts outside a " +
                             std::to_string(total_qubits) + "-qubit register");
      }
    }
  }
}

}  // namespace detail

/// Terms in fixed order: system-chain couplings for chain a then b, then
/// intra-chain bonds by (chain, k). Each bond contributes ZZ, XX, YY.
inline std::vector<PauliTerm> build_terms(const ModelParams& params) {
  params.validate();
  const auto& lay = params.layout;
  const int n = lay.n_per_chain();
  std::vector<PauliTerm> terms;
  terms.reserve(6 * static_cast<std::size_t>(n));
  const int sys = QubitLayout::system();
  for (Chain c : {Chain::a, Chain::b}) {
    const int first = lay.qubit(c, 1);
    terms.push_back(detail::two_body(2.0 * params.j_se, Pauli::Z, sys, first));
    terms.push_back(detail::two_body(params.j_se, Pauli::X, sys, first));
    terms.push_back(detail::two_body(params.j_se, Pauli::Y, sys, first));
  }
  for (Chain c : {Chain::a, Chain::b}) {
    for (int k = 1; k < n; ++k) {
      const int q1 = lay.qubit(c, k);
      const int q2 = lay.qubit(c, k + 1);
      terms.push_back(detail::two_body(2.0 * params.j_e, Pauli::Z, q1, q2));
      terms.push_back(detail::two_body(-params.j_e, Pauli::X, q1, q2));
      terms.push_back(detail::two_body(-params.j_e, Pauli::Y, q1, q2));
    }
  }
  return terms;
}

/// Sum of |coefficients|; an upper bound on the operator norm.
inline double spectral_bound(const std::vector<PauliTerm>& terms) {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.coefficient);
  return s;
}

/// Matrix-free Hamiltonian bound to a register size.
///
/// Each output amplitude is accumulated over terms in their stored order, so
/// results are identical for any thread count.
class Hamiltonian {
 public:
  Hamiltonian(std::vector<PauliTerm> terms, int total_qubits)
      : terms_(std::move(terms)), n_qubits_(total_qubits) {
    detail::check_term_range(terms_, n_qubits_);
    masked_.reserve(terms_.size());
    for (const auto& t : terms_) masked_.push_back(detail::to_masks(t));
    bound_ = qflow::spectral_bound(terms_);
  }

  explicit Hamiltonian(const ModelParams& params)
      : Hamiltonian(build_terms(params), params.layout.total_qubits()) {}

  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  int total_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept {
    return std::size_t{1} << n_qubits_;
  }
  double spectral_bound() const noexcept { return bound_; }

  /// out = H in. `in` and `out` must not alias.
  void apply(std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t dim = dimension();
    if (in.size() != dim || out.size() != dim) {
      throw DimensionError("vector of length " + std::to_string(in.size()) +
                           " applied to Hamiltonian of dimension " +
                           std::to_string(dim));
    }
    const auto* terms = masked_.data();
    const std::size_t n_terms = masked_.size();
    const Complex* src = in.data();
    Complex* dst = out.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(dim); ++bi) {
      const auto b = static_cast<std::uint64_t>(bi);
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < n_terms; ++t) {
        const std::uint64_t from = b ^ terms[t].x_mask;
        const Complex v = terms[t].factor * src[from];
        if (std::popcount(from & terms[t].z_mask) & 1) {
          acc -= v;
        } else {
          acc += v;
        }
      }
      dst[b] = acc;
    }
  }

  CVector apply(const CVector& in) const {
    CVector out(in.size());
    apply(std::span<const Complex>(in.data(), static_cast<std::size_t>(in.size())),
          std::span<Complex>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
  }

  /// <psi|H|psi>; real for Hermitian H up to rounding.
  Complex expectation(const CVector& psi) const {
    return psi.dot(apply(psi));
  }

 private:
  std::vector<PauliTerm> terms_;
  std::vector<detail::MaskedTerm> masked_;
  int n_qubits_;
  double bound_ = 0.0;
};

inline PureState apply(const std::vector<PauliTerm>& terms,
                       const PureState& psi) {
  Hamiltonian h(terms, psi.layout().total_qubits());
  return PureState(psi.layout(), h.apply(psi.amplitudes()));
}

/// Largest register build_dense accepts.
inline constexpr int kMaxDenseQubits = 12;

/// Dense matrix of the same Hamiltonian, assembled from Kronecker products
/// of 2x2 Pauli matrices. Intended as a test oracle for small registers.
inline CMatrix build_dense(const std::vector<PauliTerm>& terms,
                           int total_qubits) {
  if (total_qubits > kMaxDenseQubits) {
    throw DimensionError("dense Hamiltonian limited to " +
                         std::to_string(kMaxDenseQubits) + " qubits, got " +
                         std::to_string(total_qubits));
  }
  detail::check_term_range(terms, total_qubits);
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;

  const Eigen::Index dim = Eigen::Index{1} << total_qubits;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (const auto& t : terms) {
    // Qubit k is bit k, so the highest qubit is the leftmost factor.
    CMatrix acc = CMatrix::Identity(1, 1);
    for (int q = total_qubits - 1; q >= 0; --q) {
      const Eigen::Matrix2cd* f = &id;
      for (auto [tq, p] : t.ops) {
        if (tq == q) f = p == Pauli::X ? &sx : p == Pauli::Y ? &sy : &sz;
      }
      CMatrix next(acc.rows() * 2, acc.cols() * 2);
      for (Eigen::Index i = 0; i < acc.rows(); ++i) {
        for (Eigen::Index j = 0; j < acc.cols(); ++j) {
          next.block(2 * i, 2 * j, 2, 2) = acc(i, j) * (*f);
        }
      }
      acc = std::move(next);
    }
    h += t.coefficient * acc;
  }
  return h;
}

inline CMatrix build_dense(const ModelParams& params) {
  return build_dense(build_terms(params), params.layout.total_qubits());
}

}  // namespace qflow
