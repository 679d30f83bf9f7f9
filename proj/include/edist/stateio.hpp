// Copyright 2026 The edist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "edist/qmat.hpp"

/// State files and CSV output.
///
/// A state file is JSON:
///   {"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
/// with the matrix row-major. Numbers are written with enough digits to read
/// back bit-identically.
namespace edist::io {

/// Malformed or invalid input. The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReadOptions {
  /// Accept any Hermitian operator; otherwise the trace must be within 1e-6
  /// of 1 and the operator is rescaled to unit trace.
  bool operator_mode = false;
};

qmat::HermOp parse_state(const std::string& text, const ReadOptions& options = {});
qmat::HermOp read_state_file(const std::string& path, const ReadOptions& options = {});

std::string format_state(const qmat::HermOp& op);
void write_state_file(const std::string& path, const qmat::HermOp& op);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// Comma-separated rows with a fixed header. Fields are written as given.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(std::vector<std::string> fields);
  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws InputError if absent.
  int column(const std::string& name) const;
};

CsvTable read_csv_file(const std::string& path);

}  // namespace edist::io
