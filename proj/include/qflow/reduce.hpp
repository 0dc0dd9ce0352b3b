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
 * Partial traces, low-rank environment factors and entanglement entropies of
 * pure register states.
 *
 * Every reduction starts from the same reshape: a pure state on n qubits is
 * viewed as a matrix M with rows indexed by the kept qubits and columns by
 * the rest, so rho_keep = M M^dagger. For a pure global state the kept side
 * and its complement share their nonzero spectrum, which is why entropies are
 * always taken on the smaller side.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qflow/qreg.hpp"

namespace qflow {

/// Largest kept subset partial_trace will materialize densely.
inline constexpr int kMaxDenseReducedQubits = 12;

/// Eigenvalues below this are treated as exact zeros in entropies.
inline constexpr double kEntropyClip = 1e-12;

/// Singular values below this are dropped from low-rank factors.
inline constexpr double kRankCutoff = 1e-12;

namespace detail {

inline void check_subset(const std::vector<int>& qubits, int n_qubits,
                         bool allow_empty) {
  if (qubits.empty() && !allow_empty) {
    throw DimensionError("qubit subset is empty");
  }
  std::uint64_t seen = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw DimensionError("qubit " + std::to_string(q) + " outside a " +
                           std::to_string(n_qubits) + "-qubit register");
    }
    const std::uint64_t bit = std::uint64_t{1} << q;
    if (seen & bit) {
      throw DimensionError("qubit " + std::to_string(q) +
                           " repeated in subset");
    }
    seen |= bit;
  }
}

inline std::vector<int> complement(const std::vector<int>& qubits,
                                   int n_qubits) {
  std::vector<bool> in(static_cast<std::size_t>(n_qubits), false);
  for (int q : qubits) in[q] = true;
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q) {
    if (!in[q]) rest.push_back(q);
  }
  return rest;
}

inline std::uint64_t gather_bits(std::uint64_t b, const std::vector<int>& qs) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    r |= ((b >> qs[i]) & 1u) << i;
  }
  return r;
}

/// M(row, col) = amps[b], row = bits of `keep` (in the given order), col =
/// bits of the remaining qubits in ascending order.
inline CMatrix split_matrix(std::span<const Complex> amps, int n_qubits,
                            const std::vector<int>& keep) {
  const std::vector<int> rest = complement(keep, n_qubits);
  const Eigen::Index rows = Eigen::Index{1} << keep.size();
  const Eigen::Index cols = Eigen::Index{1} << rest.size();
  CMatrix m(rows, cols);
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    m(static_cast<Eigen::Index>(gather_bits(b, keep)),
      static_cast<Eigen::Index>(gather_bits(b, rest))) = amps[b];
  }
  return m;
}

inline std::size_t checked_qubits(std::span<const Complex> amps) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(amps.size()));
  if (amps.empty() || (std::size_t{1} << n) != amps.size()) {
    throw DimensionError("amplitude vector length " +
                         std::to_string(amps.size()) +
                         " is not a power of two");
  }
  return n;
}

}  // namespace detail

/// Entropy in bits of a spectrum; eigenvalues are clipped to [0, 1] and
/// values below kEntropyClip contribute nothing.
inline double entropy_from_eigenvalues(const Eigen::Ref<const Eigen::VectorXd>& eig) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double p = std::min(eig[i], 1.0);
    if (p > kEntropyClip) s -= p * std::log2(p);
  }
  return std::max(s, 0.0);
}

inline double von_neumann_entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  return entropy_from_eigenvalues(es.eigenvalues());
}

/// Reduced density matrix of the amplitude vector on `keep`.
inline CMatrix reduced_density(std::span<const Complex> amps,
                               const std::vector<int>& keep) {
  const int n = static_cast<int>(detail::checked_qubits(amps));
  detail::check_subset(keep, n, false);
  if (static_cast<int>(keep.size()) > kMaxDenseReducedQubits) {
    throw DimensionError("dense reduced state limited to " +
                         std::to_string(kMaxDenseReducedQubits) +
                         " qubits, requested " + std::to_string(keep.size()));
  }
  const CMatrix m = detail::split_matrix(amps, n, keep);
  CMatrix rho = m * m.adjoint();
  return rho;
}

/// Dense reduced state of psi on the ordered subset `keep`.
inline DensityOp partial_trace(const PureState& psi,
                               const std::vector<int>& keep) {
  detail::check_subset(keep, psi.layout().total_qubits(), false);
  return DensityOp::dense(keep, reduced_density(psi.span(), keep));
}

/// Partial trace of a dense operator onto a subset of its own qubits.
/// `keep` lists positions within rho.qubits().
inline DensityOp partial_trace(const DensityOp& rho,
                               const std::vector<int>& keep_positions) {
  const int n = static_cast<int>(rho.num_qubits());
  detail::check_subset(keep_positions, n, false);
  const std::vector<int> rest = detail::complement(keep_positions, n);
  const CMatrix full = rho.to_dense();
  const Eigen::Index kd = Eigen::Index{1} << keep_positions.size();
  CMatrix out = CMatrix::Zero(kd, kd);
  const std::uint64_t dim = static_cast<std::uint64_t>(full.rows());
  for (std::uint64_t i = 0; i < dim; ++i) {
    for (std::uint64_t j = 0; j < dim; ++j) {
      if (detail::gather_bits(i, rest) != detail::gather_bits(j, rest)) continue;
      out(static_cast<Eigen::Index>(detail::gather_bits(i, keep_positions)),
          static_cast<Eigen::Index>(detail::gather_bits(j, keep_positions))) +=
          full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  std::vector<int> qubits;
  for (int p : keep_positions) qubits.push_back(rho.qubits()[p]);
  return DensityOp::dense(std::move(qubits), std::move(out));
}

/// Drops directions of B with singular value <= cutoff; returns U_k S_k so
/// the product B B^dagger is preserved.
inline CMatrix compress_factor(const CMatrix& b, double cutoff = kRankCutoff) {
  if (b.cols() == 0) return b;
  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s[k] > cutoff) ++k;
  return svd.matrixU().leftCols(k) * s.head(k).asDiagonal();
}

/// rho_E = B B^dagger with B(e, s) = psi[s + 2e]; rank <= 2.
inline DensityOp env_factor(const PureState& psi) {
  const auto& lay = psi.layout();
  const Eigen::Index env_dim = Eigen::Index{1} << lay.env_qubits();
  // System is bit 0, so psi reshapes column-major into a 2 x env_dim matrix.
  Eigen::Map<const CMatrix> a(psi.amplitudes().data(), 2, env_dim);
  return DensityOp::factored(lay.environment(), compress_factor(a.transpose()));
}

/// Entropy in bits of psi reduced to `subset`, evaluated on whichever of
/// subset and complement is smaller. An empty or full subset gives 0.
inline double entropy_of_subset(std::span<const Complex> amps,
                                const std::vector<int>& subset) {
  const int n = static_cast<int>(detail::checked_qubits(amps));
  detail::check_subset(subset, n, true);
  const std::vector<int> rest = detail::complement(subset, n);
  const std::vector<int>& side = subset.size() <= rest.size() ? subset : rest;
  if (side.empty()) return 0.0;
  const CMatrix m = detail::split_matrix(amps, n, side);
  const double norm2 = m.squaredNorm();
  return von_neumann_entropy(m * m.adjoint() / norm2);
}

inline double entropy_of_subset(const PureState& psi,
                                const std::vector<int>& subset) {
  return entropy_of_subset(psi.span(), subset);
}

}  // namespace qflow
