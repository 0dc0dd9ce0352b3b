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

#include <filesystem>

#include "qflow/checkpoint.hpp"

namespace qflow {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qflow_checkpoint_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_all(const Trajectory& traj, const fs::path& path) {
  CheckpointWriter w(path.string(), traj.params, traj.times);
  for (std::size_t i = 0; i < traj.size(); ++i) w.append(traj.states_plus[i], traj.states_minus[i]);
  w.close();
}

TEST(CheckpointTest, RoundTripIsExact) {
  const Trajectory traj = run_trajectory(ModelParams::dimensionless(2, 0.71), 1.0, 12);
  const fs::path path = scratch("round_trip.bin");
  write_all(traj, path);

  const std::uintmax_t header = 8 + 4 + 4 + 3 * 8 + 8 + 13 * 8;
  EXPECT_EQ(fs::file_size(path), header + 13 * 2 * 32 * 16);

  const Trajectory back = read_checkpoint(path.string());
  EXPECT_EQ(back.params.layout, traj.params.layout);
  EXPECT_EQ(back.params.j_se, traj.params.j_se);
  EXPECT_EQ(back.params.j_e, traj.params.j_e);
  EXPECT_EQ(back.times, traj.times);
  ASSERT_EQ(back.size(), traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_EQ(back.states_plus[i].amplitudes(), traj.states_plus[i].amplitudes());
    EXPECT_EQ(back.states_minus[i].amplitudes(), traj.states_minus[i].amplitudes());
  }
}

TEST(CheckpointTest, RejectsDamagedFiles) {
  const Trajectory traj = run_trajectory(ModelParams::dimensionless(1, 0.5), 1.0, 4);
  const fs::path path = scratch("damaged.bin");
  write_all(traj, path);
  fs::resize_file(path, fs::file_size(path) - 3);
  EXPECT_THROW(read_checkpoint(path.string()), IoError);

  {
    std::ofstream bad(path, std::ios::binary | std::ios::trunc);
    bad << "NOTATRAJECTORY";
  }
  EXPECT_THROW(read_checkpoint(path.string()), IoError);
  EXPECT_THROW(read_checkpoint((scratch("missing") / "x.bin").string()), IoError);
}

TEST(CheckpointTest, WriterCountsGridPoints) {
  const Trajectory traj = run_trajectory(ModelParams::dimensionless(1, 0.5), 1.0, 4);
  CheckpointWriter w(scratch("short.bin").string(), traj.params, traj.times);
  w.append(traj.states_plus[0], traj.states_minus[0]);
  EXPECT_THROW(w.close(), IoError);

  const PureState wrong(QubitLayout(2), CVector::Zero(32));
  CheckpointWriter w2(scratch("wrong.bin").string(), traj.params, traj.times);
  EXPECT_THROW(w2.append(wrong, wrong), DimensionError);
}

}  // namespace
}  // namespace qflow
