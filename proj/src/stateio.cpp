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


#include "edist/stateio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace edist::io {

using nlohmann::json;
using qmat::CMatrix;
using qmat::Complex;
using qmat::HermOp;

namespace {

double number(const json& v, const char* what) {
  if (!v.is_number()) throw InputError(std::string("state file: ") + what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string("state file: ") + what + " is not finite");
  return x;
}

int dimension(const json& v) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 4096) {
    throw InputError("state file: dims must be positive integers");
  }
  return static_cast<int>(v.get<long long>());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

HermOp parse_state(const std::string& text, const ReadOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("state file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix")) {
    throw InputError("state file: expected an object with dims and matrix");
  }
  const json& dims = doc["dims"];
  if (!dims.is_array() || dims.size() != 2) throw InputError("state file: dims must be [dA, dB]");
  const int da = dimension(dims[0]);
  const int db = dimension(dims[1]);
  const int side = da * db;

  const json& rows = doc["matrix"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != side) {
    throw InputError("state file: matrix must have dA*dB rows");
  }
  CMatrix m(side, side);
  for (int r = 0; r < side; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != side) {
      throw InputError("state file: row " + std::to_string(r) + " must have dA*dB entries");
    }
    for (int c = 0; c < side; ++c) {
      const json& e = rows[r][c];
      if (!e.is_array() || e.size() != 2) throw InputError("state file: entries are [re, im] pairs");
      m(r, c) = Complex(number(e[0], "re"), number(e[1], "im"));
    }
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw InputError("state file: matrix is not Hermitian");
  HermOp op(da, db, m, 1e-9);
  if (!options.operator_mode) {
    const double tr = op.trace();
    if (std::fabs(tr - 1.0) > 1e-6) throw InputError("state file: trace is not 1 (use --operator)");
    if (tr != 1.0) op = op * (1.0 / tr);
  }
  return op;
}

HermOp read_state_file(const std::string& path, const ReadOptions& options) {
  return parse_state(slurp(path), options);
}

std::string format_state(const HermOp& op) {
  json rows = json::array();
  for (int r = 0; r < op.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < op.size(); ++c) row.push_back({op(r, c).real(), op(r, c).imag()});
    rows.push_back(std::move(row));
  }
  json doc;
  doc["dims"] = {op.dim_a(), op.dim_b()};
  doc["matrix"] = std::move(rows);
  return doc.dump() + "\n";
}

void write_state_file(const std::string& path, const HermOp& op) { spill(path, format_state(op)); }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) throw std::logic_error("CsvWriter: row width differs from header");
  rows_.push_back(std::move(fields));
}

void CsvWriter::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

void CsvWriter::write_file(const std::string& path) const {
  std::ostringstream ss;
  write(ss);
  spill(path, ss.str());
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw InputError("csv: missing column " + name);
}

CsvTable read_csv_file(const std::string& path) {
  std::istringstream in(slurp(path));
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (t.header.empty()) {
      t.header = split(line);
      continue;
    }
    auto row = split(line);
    if (row.size() != t.header.size()) throw InputError("csv: row width differs from header in " + path);
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw InputError("csv: empty file " + path);
  return t;
}

}  // namespace edist::io
