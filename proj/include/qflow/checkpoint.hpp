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

// Binary trajectory checkpoints.
//
// Layout, all fields little-endian:
//
//   char[8]  magic "QFLOWTRJ"
//   u32      version (1)
//   u32      chain length N
//   f64      J_SE, f64 J_E (dimensionless)
//   f64      J_E in rad/s
//   u64      number of grid points P
//   f64[P]   grid times
//   then for each grid point: psi+ amplitudes, psi- amplitudes, each
//   2^(2N+1) complex values stored as (re, im) f64 pairs.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "qflow/evolve.hpp"

namespace qflow {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

inline constexpr std::array<char, 8> kCheckpointMagic{'Q', 'F', 'L', 'O', 'W', 'T', 'R', 'J'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw IoError("truncated checkpoint: " + path);
  }
  return v;
}

}  // namespace detail

/// Streams a trajectory to disk one grid point at a time.
class CheckpointWriter {
 public:
  CheckpointWriter(const std::string& path, const ModelParams& params,
                   const std::vector<double>& times)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc),
        dim_(params.layout.dimension()), expected_(times.size()) {
    if (!out_) throw IoError("cannot open checkpoint for writing: " + path);
    out_.write(kCheckpointMagic.data(), kCheckpointMagic.size());
    detail::put(out_, kCheckpointVersion);
    detail::put(out_, static_cast<std::uint32_t>(params.layout.n_per_chain()));
    detail::put(out_, params.j_se);
    detail::put(out_, params.j_e);
    detail::put(out_, kPhysicalJeRadPerSecond);
    detail::put(out_, static_cast<std::uint64_t>(times.size()));
    for (double t : times) detail::put(out_, t);
    check();
  }

  void append(const PureState& plus, const PureState& minus) {
    if (written_ == expected_) throw IoError("checkpoint already holds every grid point");
    for (const PureState* s : {&plus, &minus}) {
      if (static_cast<std::size_t>(s->amplitudes().size()) != dim_) {
        throw DimensionError("state does not match checkpoint register");
      }
      // std::complex<double> is layout-compatible with double[2].
      out_.write(reinterpret_cast<const char*>(s->amplitudes().data()),
                 static_cast<std::streamsize>(dim_ * sizeof(Complex)));
    }
    check();
    ++written_;
  }

  /// Flushes and verifies that every announced grid point was written.
  void close() {
    if (written_ != expected_) {
      throw IoError("checkpoint " + path_ + " closed after " +
                    std::to_string(written_) + " of " +
                    std::to_string(expected_) + " grid points");
    }
    out_.close();
    if (out_.fail()) throw IoError("failed to close checkpoint: " + path_);
  }

 private:
  void check() {
    if (!out_) throw IoError("write failed: " + path_);
  }

  std::string path_;
  std::ofstream out_;
  std::size_t dim_;
  std::size_t expected_;
  std::size_t written_ = 0;
};

inline Trajectory read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kCheckpointMagic) {
    throw IoError("not a trajectory checkpoint: " + path);
  }
  const auto version = detail::get<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto n = detail::get<std::uint32_t>(in, path);
  const auto j_se = detail::get<double>(in, path);
  const auto j_e = detail::get<double>(in, path);
  (void)detail::get<double>(in, path);  // physical J_E, informational
  const auto points = detail::get<std::uint64_t>(in, path);

  const ModelParams params{QubitLayout(static_cast<int>(n)), j_se, j_e};
  const auto dim = static_cast<Eigen::Index>(params.layout.dimension());
  if (points > (std::uint64_t{1} << 32)) throw IoError("implausible grid size in " + path);
  std::vector<double> times(points);
  for (auto& t : times) t = detail::get<double>(in, path);
  std::vector<PureState> plus, minus;
  plus.reserve(points);
  minus.reserve(points);
  for (std::uint64_t i = 0; i < points; ++i) {
    for (auto* dst : {&plus, &minus}) {
      CVector v(dim);
      if (!in.read(reinterpret_cast<char*>(v.data()),
                   static_cast<std::streamsize>(dim * sizeof(Complex)))) {
        throw IoError("truncated checkpoint: " + path);
      }
      dst->emplace_back(params.layout, std::move(v));
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError("trailing bytes in checkpoint: " + path);
  }
  return Trajectory{std::move(times), std::move(plus), std::move(minus), params};
}

}  // namespace qflow
