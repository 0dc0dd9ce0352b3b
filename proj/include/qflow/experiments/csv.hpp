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

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "qflow/errors.hpp"

namespace qflow::experiments {

/// Shortest text that reads back to the same double; "nan" for NaN.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// One header row, one "# params k=v ..." line above it, numeric rows below.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const Metadata& meta,
            std::vector<std::string> header)
      : path_(path), out_(path, std::ios::trunc), width_(header.size()) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
    out_ << "# params";
    for (const auto& [k, v] : meta) out_ << ' ' << k << '=' << v;
    out_ << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
    check();
  }

  void row(const std::vector<double>& cells) {
    if (cells.size() != width_) {
      throw IoError("row of " + std::to_string(cells.size()) + " cells for " +
                    std::to_string(width_) + " columns in " + path_);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out_ << (i ? "," : "") << format_double(cells[i]);
    }
    out_ << '\n';
    check();
  }

  void close() {
    out_.close();
    if (out_.fail()) throw IoError("failed to finish " + path_);
  }

  const std::string& path() const noexcept { return path_; }

 private:
  void check() {
    if (!out_) throw IoError("write failed: " + path_);
  }

  std::string path_;
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace qflow::experiments
