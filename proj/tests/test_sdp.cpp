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


#include <cmath>
#include <random>

#include "doctest.h"
#include "edist/lp.hpp"
#include "edist/sdp.hpp"
#include "edist/sdp_model.hpp"

using namespace edist::conic;

TEST_CASE("scalar eigenvalue bound") {
  // minimize t s.t. t - 2 >= 0 as a 1x1 block.
  SdpProblem p;
  const int t = p.add_variables(1);
  const int b = p.add_block("t-2", 1);
  p.add_constant(b, 0, 0, -2.0);
  p.add_coefficient(b, t, 0, 0, 1.0);
  p.set_objective({{t, 1.0}});
  const auto sol = solve_sdp(p);
  REQUIRE(sol.optimal());
  CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(sol.dual_value <= sol.primal_value + 1e-6);
}

TEST_CASE("top eigenvalue by trace-one SDP") {
  // maximize tr(diag(1,-1) X), tr X = 1, X >= 0.
  SdpProblem p;
  const auto x = HermVar::create(p, 2, false);
  add_psd(p, "X", x.expr());
  p.add_constraint(x.trace(), Sense::Equal, 1.0);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = -1.0;
  p.set_objective(x.trace_with(c), 0.0, true);
  const auto sol = solve_sdp(p);
  REQUIRE(sol.optimal());
  CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.duality_gap <= 1e-7 * (1 + std::abs(sol.primal_value)));
}

TEST_CASE("complex Hermitian variable") {
  // Largest eigenvalue of a complex Hermitian H by max tr(HX), tr X = 1.
  std::mt19937_64 rng(9);
  std::normal_distribution<> g;
  Eigen::MatrixXcd a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = {g(rng), g(rng)};
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  SdpProblem p;
  const auto x = HermVar::create(p, 3, true);
  add_psd(p, "X", x.expr());
  p.add_constraint(x.trace(), Sense::Equal, 1.0);
  p.set_objective(x.trace_with(h), 0.0, true);
  const auto sol = solve_sdp(p);
  REQUIRE(sol.optimal());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  CHECK(sol.primal_value == doctest::Approx(es.eigenvalues()(2)).epsilon(1e-7));
  const auto xv = x.value(sol.y);
  CHECK((xv * h).trace().real() == doctest::Approx(es.eigenvalues()(2)).epsilon(1e-6));
}

TEST_CASE("infeasible problem is reported") {
  SdpProblem p;
  const int t = p.add_variables(1);
  p.add_constraint({{t, 1.0}}, Sense::GreaterEqual, 1.0);
  p.add_constraint({{t, 1.0}}, Sense::LessEqual, 0.0);
  p.set_objective({{t, 1.0}});
  const auto sol = solve_sdp(p);
  CHECK_FALSE(sol.optimal());
  CHECK_THROWS_AS(require_optimal(sol, "test"), SolverError);
}

TEST_CASE("LP solved as an SDP matches the exact simplex") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 4, m = 3;
    RationalLp lp;
    SdpProblem sdp;
    sdp.add_variables(n);
    LinearForm obj;
    for (int j = 0; j < n; ++j) {
      lp.add_variable(Rational(0), Rational(coef(rng) + 7));
      const int c = coef(rng);
      lp.set_objective(j, c);
      obj.push_back({j, static_cast<double>(c)});
      sdp.add_constraint({{j, 1.0}}, Sense::GreaterEqual, 0.0);
      sdp.add_constraint({{j, 1.0}}, Sense::LessEqual, to_double(*lp.upper()[j]));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, Rational>> row;
      LinearForm form;
      for (int j = 0; j < n; ++j) {
        const int c = coef(rng);
        row.push_back({j, c});
        form.push_back({j, static_cast<double>(c)});
      }
      const int rhs = coef(rng) + 6;
      lp.add_constraint(row, Sense::LessEqual, rhs);
      sdp.add_constraint(form, Sense::LessEqual, rhs);
    }
    sdp.set_objective(obj);
    const auto exact = solve_lp_exact(lp);
    REQUIRE(exact.status == LpStatus::Optimal);
    CHECK(lp.satisfied_by(exact.assignment));
    const auto sol = solve_sdp(sdp);
    REQUIRE(sol.optimal());
    CHECK(std::abs(sol.primal_value - to_double(exact.optimum)) < 1e-6);
  }
}

TEST_CASE("weak duality on a random SDP") {
  // min tr(C X) s.t. tr X = 1, X_00 >= 0.2, X >= 0.
  std::mt19937_64 rng(2);
  std::normal_distribution<> g;
  Eigen::MatrixXcd c(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c(i, j) = g(rng);
  c = (0.5 * (c + c.adjoint())).eval();
  SdpProblem p;
  const auto x = HermVar::create(p, 4, false);
  add_psd(p, "X", x.expr());
  p.add_constraint(x.trace(), Sense::Equal, 1.0);
  Eigen::MatrixXcd e00 = Eigen::MatrixXcd::Zero(4, 4);
  e00(0, 0) = 1.0;
  p.add_constraint(x.trace_with(e00), Sense::GreaterEqual, 0.2);
  p.set_objective(x.trace_with(c));
  const auto sol = solve_sdp(p);
  REQUIRE(sol.optimal());
  CHECK(sol.primal_value >= sol.dual_value - 1e-6);
  CHECK(sol.primal_residual <= 1e-7);
  CHECK(sol.dual_residual <= 1e-7);
  for (const auto& blk : sol.block_values) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk);
    CHECK(es.eigenvalues()(0) >= -1e-8);
  }
}
