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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qflow {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or qubit subsets that do not fit the register.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters or scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Krylov propagation failed to reach the requested accuracy.
class PropagationError : public Error {
 public:
  PropagationError(const std::string& what, double residual,
                   std::ptrdiff_t grid_index = -1)
      : Error(what), residual_(residual), grid_index_(grid_index) {}

  double residual() const noexcept { return residual_; }
  /// Index of the failing grid point, or -1 outside a trajectory.
  std::ptrdiff_t grid_index() const noexcept { return grid_index_; }

 private:
  double residual_;
  std::ptrdiff_t grid_index_;
};

/// A diagnostic could not be located in a series (e.g. no plateau).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qflow
