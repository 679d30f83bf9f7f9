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


#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "edist/stateio.hpp"
#include "test_util.hpp"

using namespace edist;

TEST_CASE("state files round-trip bit for bit") {
  std::mt19937_64 rng(2);
  const auto path = std::filesystem::temp_directory_path() / "edist_roundtrip.json";
  for (int t = 0; t < 5; ++t) {
    const auto rho = testing::random_state(rng, 2, 3);
    io::write_state_file(path.string(), rho);
    const auto back = io::read_state_file(path.string(), io::ReadOptions{true});
    CHECK(back.dim_a() == 2);
    CHECK(back.dim_b() == 3);
    CHECK((back.matrix().array() == rho.matrix().array()).all());
  }
  std::filesystem::remove(path);
}

TEST_CASE("state file validation") {
  const std::string ok = R"({"dims":[1,2],"matrix":[[[0.5,0],[0,0.1]],[[0,-0.1],[0.5,0]]]})";
  const auto op = io::parse_state(ok);
  CHECK(op.trace() == doctest::Approx(1.0));
  CHECK(op(0, 1).imag() == doctest::Approx(0.1));

  CHECK_THROWS_AS(io::parse_state("{"), io::InputError);
  CHECK_THROWS_AS(io::parse_state(R"({"dims":[2,2]})"), io::InputError);
  CHECK_THROWS_AS(io::parse_state(R"({"dims":[1,2],"matrix":[[[1,0],[0,0]]]})"), io::InputError);
  CHECK_THROWS_AS(io::parse_state(R"({"dims":[1,2],"matrix":[[[0.5,0],[1,0]],[[0,0],[0.5,0]]]})"),
                  io::InputError);
  CHECK_THROWS_AS(io::parse_state(R"({"dims":[1,2],"matrix":[[[0.5,0],[0,0]],[[0,0],["x",0]]]})"),
                  io::InputError);
  CHECK_THROWS_AS(io::parse_state(R"({"dims":[0,2],"matrix":[]})"), io::InputError);

  // Trace 2 is rejected for states and accepted for operators.
  const std::string twice = R"({"dims":[1,2],"matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]})";
  CHECK_THROWS_AS(io::parse_state(twice), io::InputError);
  CHECK(io::parse_state(twice, io::ReadOptions{true}).trace() == doctest::Approx(2.0));

  // A trace off by less than 1e-6 is renormalized.
  const std::string near = R"({"dims":[1,2],"matrix":[[[0.5000004,0],[0,0]],[[0,0],[0.5,0]]]})";
  CHECK(io::parse_state(near).trace() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(io::read_state_file("/nonexistent/state.json"), io::InputError);
}

TEST_CASE("csv writing and reading") {
  io::CsvWriter csv({"n", "value"});
  csv.add_row({"1", io::format_double(0.1)});
  csv.add_row({"2", io::format_double(1.0 / 3.0)});
  CHECK_THROWS_AS(csv.add_row({"3"}), std::logic_error);
  std::ostringstream out;
  csv.write(out);
  CHECK(out.str() == "n,value\n1,0.1\n2,0.3333333333333333\n");

  const auto path = std::filesystem::temp_directory_path() / "edist_table.csv";
  csv.write_file(path.string());
  const auto table = io::read_csv_file(path.string());
  CHECK(table.header.size() == 2);
  REQUIRE(table.rows.size() == 2);
  CHECK(std::stod(table.rows[1][table.column("value")]) == 1.0 / 3.0);
  CHECK_THROWS_AS(table.column("missing"), io::InputError);
  std::filesystem::remove(path);
}

TEST_CASE("format_double is shortest round-trip") {
  for (double x : {0.1, 1e-300, -2.5, 123456789.123456789, 1.0 / 7.0}) {
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
}
