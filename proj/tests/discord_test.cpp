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

#include <numbers>

#include "qflow/measures.hpp"
#include "test_util.hpp"

namespace qflow {
namespace {

using std::numbers::pi;
using testing::dense_entropy_bits;
using testing::naive_partial_trace;

// Holevo information from scratch: collapse the system onto each outcome,
// trace the whole register down to the fragment with the index-pair loop.
double holevo_oracle(const PureState& psi, int m, double theta, double phi) {
  const auto& lay = psi.layout();
  const int nq = lay.total_qubits();
  const std::vector<int> frag = lay.fragment(m);
  const CVector& a = psi.amplitudes();
  const Complex e = std::exp(Complex(0.0, phi));
  const Complex mk[2][2] = {{std::cos(theta), e * std::sin(theta)},
                            {std::conj(e) * std::sin(theta), -std::cos(theta)}};
  double conditional = 0.0;
  for (int k = 0; k < 2; ++k) {
    CVector post = CVector::Zero(a.size());
    for (Eigen::Index i = 0; i < a.size(); i += 2) {
      post[i] = std::conj(mk[k][0]) * a[i] + std::conj(mk[k][1]) * a[i + 1];
    }
    const double p = post.squaredNorm();
    if (p < 1e-14) continue;
    conditional += p * dense_entropy_bits(naive_partial_trace(post / std::sqrt(p), nq, frag));
  }
  return dense_entropy_bits(naive_partial_trace(a, nq, frag)) - conditional;
}

PureState evolved(int n, double t) {
  const ModelParams p = ModelParams::dimensionless(n, 0.71);
  return states_at(p, t, 10, {10}).at(10).first;
}

TEST(HolevoTest, ProductStateCarriesNothing) {
  auto [plus, minus] = make_initial_states(QubitLayout(2));
  for (double th : {0.0, 0.4, pi / 2, pi}) {
    for (double ph : {0.0, 1.0, 5.0}) {
      EXPECT_NEAR(holevo(plus, 1, {th, ph}), 0.0, 1e-12);
      EXPECT_NEAR(holevo(minus, 2, {th, ph}), 0.0, 1e-12);
    }
  }
}

TEST(HolevoTest, BellPairIsPerfectlyCorrelated) {
  // System and qubit 1 maximally entangled, qubit 2 idle.
  const QubitLayout lay(1);
  CVector v = CVector::Zero(8);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  const PureState bell(lay, v);
  EXPECT_NEAR(holevo(bell, 1, {0.0, 0.0}), 1.0, 1e-14);
  // Maximal entanglement correlates every basis.
  EXPECT_NEAR(holevo(bell, 1, {pi / 4, 0.0}), 1.0, 1e-12);
}

TEST(HolevoTest, FullEnvironmentKeepsEntropy) {
  const PureState psi = evolved(3, 2.0);
  const double s_env = entropy_of_subset(psi, psi.layout().environment());
  ASSERT_GT(s_env, 0.1);
  for (double th : {0.3, 1.1, 2.9}) {
    EXPECT_NEAR(holevo(psi, 3, {th, 4.0}), s_env, 1e-10);
  }
}

TEST(HolevoTest, MatchesCollapseOracle) {
  for (int n : {2, 3}) {
    const PureState psi = evolved(n, 1.7);
    for (int m = 1; m <= n; ++m) {
      const HolevoEvaluator h(psi, m);
      for (auto [th, ph] : {std::pair{0.0, 0.0}, {0.7, 2.2}, {2.0, 5.9}, {pi, 1.0}}) {
        EXPECT_NEAR(h({th, ph}), holevo_oracle(psi, m, th, ph), 1e-10)
            << "n=" << n << " m=" << m;
      }
    }
  }
}

TEST(HolevoTest, RejectsAnglesOutOfRange) {
  auto [plus, minus] = make_initial_states(QubitLayout(1));
  EXPECT_THROW(holevo(plus, 1, {-0.1, 0.0}), ConfigError);
  EXPECT_THROW(holevo(plus, 1, {0.0, 2.0 * pi}), ConfigError);
  EXPECT_THROW(holevo(plus, 2, {0.0, 0.0}), DimensionError);
}

TEST(DiscordTest, ProductStateIsZeroWithLowestTieBreak) {
  auto [plus, minus] = make_initial_states(QubitLayout(2));
  const DiscordResult r = discord(plus, 2);
  EXPECT_NEAR(r.discord, 0.0, 1e-12);
  EXPECT_EQ(r.best.theta, 0.0);
  EXPECT_EQ(r.best.phi, 0.0);
  EXPECT_GE(r.evaluations, 64 * 64);
}

TEST(DiscordTest, FullEnvironmentEqualsSystemEntropy) {
  const PureState psi = evolved(3, 2.5);
  const double s_sys = entropy_of_subset(psi, {0});
  const DiscordResult r = discord(psi, 3);
  EXPECT_NEAR(r.discord, s_sys, 2e-3);
  EXPECT_NEAR(r.mutual_information, 2.0 * r.discord, 4e-3);
}

TEST(DiscordTest, ClassicalCorrelationsHaveNone) {
  // (|000> + |111>)/sqrt2 on system, a1 and the ancilla a2; fragment F_1 is
  // {a1, b1}, so rho_SF = (|00><00| + |11><11|)/2 (x) |0><0|.
  const QubitLayout lay(2);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(lay.dimension()));
  const int a1 = lay.qubit(Chain::a, 1), a2 = lay.qubit(Chain::a, 2);
  v[0] = 1.0 / std::sqrt(2.0);
  v[1 | (1 << a1) | (1 << a2)] = 1.0 / std::sqrt(2.0);
  const PureState psi(lay, v);
  const DiscordResult r = discord(psi, 1);
  EXPECT_NEAR(r.mutual_information, 1.0, 1e-12);
  EXPECT_NEAR(r.discord, 0.0, 2e-3);
}

TEST(DiscordTest, AgreesWithFineGridSearch) {
  const PureState psi = evolved(2, 1.3);
  constexpr int kTheta = 121, kPhi = 120;
  double best = -1.0;
  for (int i = 0; i < kTheta; ++i) {
    for (int j = 0; j < kPhi; ++j) {
      best = std::max(best, holevo_oracle(psi, 1, i * pi / (kTheta - 1), j * 2 * pi / kPhi));
    }
  }
  const DiscordResult r = discord(psi, 1);
  EXPECT_NEAR(r.holevo_max, best, 2e-3);
  EXPECT_GE(r.holevo_max, best - 1e-9);
  EXPECT_GE(r.discord, -1e-12);
  EXPECT_LE(r.holevo_max, r.mutual_information + 1e-12);
}

}  // namespace
}  // namespace qflow
