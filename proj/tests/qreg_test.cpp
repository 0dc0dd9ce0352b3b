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

#include <set>

#include "qflow/qreg.hpp"
#include "test_util.hpp"

namespace qflow {
namespace {

TEST(QubitLayoutTest, SizesFollowChainLength) {
  for (int n = 1; n <= 7; ++n) {
    QubitLayout lay(n);
    EXPECT_EQ(lay.total_qubits(), 2 * n + 1);
    EXPECT_EQ(lay.dimension(), std::size_t{1} << (2 * n + 1));
  }
  EXPECT_THROW(QubitLayout(0), ConfigError);
}

TEST(QubitLayoutTest, SiteMapIsBijective) {
  QubitLayout lay(5);
  std::set<int> seen;
  for (Chain c : {Chain::a, Chain::b}) {
    for (int k = 1; k <= 5; ++k) {
      const int q = lay.qubit(c, k);
      EXPECT_TRUE(seen.insert(q).second);
      const Site s = lay.site(q);
      EXPECT_FALSE(s.is_system);
      EXPECT_EQ(s.chain, c);
      EXPECT_EQ(s.depth, k);
    }
  }
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_EQ(seen.count(0), 0u);
  EXPECT_TRUE(lay.site(0).is_system);
  EXPECT_THROW(lay.qubit(Chain::a, 6), DimensionError);
  EXPECT_THROW(lay.site(11), DimensionError);
}

TEST(QubitLayoutTest, FragmentTakesBothChains) {
  QubitLayout lay(4);
  EXPECT_EQ(lay.fragment(2), (std::vector<int>{1, 2, 5, 6}));
  EXPECT_TRUE(lay.fragment(0).empty());
  EXPECT_EQ(lay.fragment(4).size(), 8u);
  EXPECT_THROW(lay.fragment(5), DimensionError);
}

TEST(InitialStatesTest, SingleChainQubitAmplitudes) {
  auto [plus, minus] = make_initial_states(QubitLayout(1));
  const double h = 1.0 / std::sqrt(2.0);
  ASSERT_EQ(plus.amplitudes().size(), 8);
  EXPECT_DOUBLE_EQ(plus.amplitudes()[0].real(), h);
  EXPECT_DOUBLE_EQ(plus.amplitudes()[1].real(), h);
  EXPECT_DOUBLE_EQ(minus.amplitudes()[1].real(), -h);
  for (int i = 2; i < 8; ++i) EXPECT_EQ(plus.amplitudes()[i], Complex(0.0));
}

TEST(InitialStatesTest, NormalizedAndOrthogonal) {
  for (int n : {1, 2, 4, 7}) {
    auto [plus, minus] = make_initial_states(QubitLayout(n));
    EXPECT_NEAR(plus.norm(), 1.0, 1e-15);
    EXPECT_NEAR(minus.norm(), 1.0, 1e-15);
    EXPECT_EQ(plus.amplitudes().dot(minus.amplitudes()), Complex(0.0));
  }
}

TEST(InitialStatesTest, FifteenQubitRegisterHasTwoNonzeros) {
  auto [plus, minus] = make_initial_states(QubitLayout(7));
  EXPECT_EQ(plus.amplitudes().size(), 32768);
  EXPECT_EQ((plus.amplitudes().array() != Complex(0.0)).count(), 2);
  EXPECT_EQ((minus.amplitudes().array() != Complex(0.0)).count(), 2);
}

TEST(BlochTest, BasisStates) {
  Eigen::Matrix2cd zero;
  zero << 1, 0, 0, 0;
  BlochVector r = bloch_of(CMatrix(zero));
  EXPECT_EQ(r.x, 0.0);
  EXPECT_EQ(r.y, 0.0);
  EXPECT_EQ(r.z, 1.0);

  Eigen::Matrix2cd plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  r = bloch_of(CMatrix(plus));
  EXPECT_DOUBLE_EQ(r.x, 1.0);
  EXPECT_EQ(r.y, 0.0);
  EXPECT_EQ(r.z, 0.0);

  r = bloch_of(CMatrix(0.5 * Eigen::Matrix2cd::Identity()));
  EXPECT_EQ(r.norm(), 0.0);
}

TEST(BlochTest, RoundTripOnRandomStates) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const CMatrix rho = testing::random_density(2, rng);
    const BlochVector r = bloch_of(rho);
    EXPECT_LE(r.norm(), 1.0 + 1e-10);
    EXPECT_LT((r.to_matrix() - rho).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BlochTest, RejectsMultiQubitOperators) {
  const DensityOp two = DensityOp::dense({0, 1}, CMatrix::Identity(4, 4) / 4.0);
  EXPECT_THROW(bloch_of(two), DimensionError);
}

TEST(DensityOpTest, FactoredAndDenseAgree) {
  std::mt19937_64 rng(3);
  CMatrix b(8, 2);
  b.col(0) = testing::random_vector(8, rng) * std::sqrt(0.3);
  b.col(1) = testing::random_vector(8, rng) * std::sqrt(0.7);
  const DensityOp f = DensityOp::factored({1, 2, 3}, b);
  EXPECT_EQ(f.rank(), 2);
  const DensityOp d = DensityOp::dense({1, 2, 3}, f.to_dense());
  EXPECT_LT((f.to_dense() - d.to_dense()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(d.trace(), f.trace(), 1e-14);
  EXPECT_THROW(DensityOp::dense({1, 2}, CMatrix::Identity(8, 8)), DimensionError);
}

}  // namespace
}  // namespace qflow
