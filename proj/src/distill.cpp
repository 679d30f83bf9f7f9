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


#include "edist/distill.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "edist/sdp_model.hpp"

namespace edist::distill {

using conic::HermExpr;
using conic::HermVar;
using conic::LinearForm;
using conic::SdpProblem;
using conic::Sense;
using qmat::CMatrix;

namespace {

void check_epsilon(double epsilon, const char* what) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::domain_error(std::string(what) + ": epsilon must lie in (0, 1)");
  }
}

SolverReport report(const conic::SdpSolution& s) {
  return {s.status, s.iterations, s.duality_gap, s.primal_residual, s.dual_residual};
}

HermExpr scalar_identity(int side, int var, double coeff) {
  HermExpr e(side);
  for (int i = 0; i < side; ++i) e.add_term(i, i, var, coeff);
  return e;
}

double appendix_sdp(const HermOp& rho, double epsilon, bool positive_c,
                    const conic::SdpOptions& options) {
  check_epsilon(epsilon, positive_c ? "sdp2" : "sdp1");
  qmat::require_state(rho, positive_c ? "sdp2" : "sdp1");
  const int n = rho.size();
  const bool cx = !rho.is_real();
  SdpProblem p;
  const HermVar x = HermVar::create(p, n, cx);
  const HermVar cp = HermVar::create(p, n, cx);
  const HermVar cm = HermVar::create(p, n, cx);
  const int t = p.add_variables(1);

  const HermExpr c = (cp.expr() - cm.expr()).partial_transpose(rho.dim_a(), rho.dim_b());
  HermExpr lhs = c + x.expr();
  // −tρ
  for (int r = 0; r < n; ++r) {
    for (int col = r; col < n; ++col) {
      if (rho(r, col) != qmat::Complex(0.0, 0.0)) lhs.add_term(r, col, t, -rho(r, col));
    }
  }
  conic::add_psd(p, "C+X-t*rho", lhs);
  conic::add_psd(p, "X", x.expr());
  conic::add_psd(p, "C+", cp.expr());
  conic::add_psd(p, "C-", cm.expr());
  if (positive_c) conic::add_psd(p, "C", c);
  p.add_constraint(conic::concat(cp.trace(), cm.trace()), Sense::LessEqual, 1.0);
  p.add_constraint({{t, 1.0}}, Sense::GreaterEqual, 0.0);
  LinearForm obj = conic::scaled_form(x.trace(), -1.0);
  obj.push_back({t, 1.0 - epsilon});
  p.set_objective(obj, 0.0, true);
  const auto sol = conic::solve_sdp(p, options);
  conic::require_optimal(sol, positive_c ? "sdp2" : "sdp1");
  return sol.primal_value;
}

}  // namespace

OneShotResult one_shot_ppt_ed(const HermOp& rho, double epsilon, const conic::SdpOptions& options) {
  check_epsilon(epsilon, "one_shot_ppt_ed");
  qmat::require_state(rho, "one_shot_ppt_ed");
  const int n = rho.size();
  SdpProblem p;
  const HermVar m = HermVar::create(p, n, !rho.is_real());
  const int eta = p.add_variables(1);

  const HermExpr mt = m.expr().partial_transpose(rho.dim_a(), rho.dim_b());
  conic::add_psd(p, "M", m.expr());
  HermExpr upper(n);
  upper.add_identity(1.0);
  conic::add_psd(p, "1-M", upper - m.expr());
  conic::add_psd(p, "eta-MT", scalar_identity(n, eta, 1.0) - mt);
  conic::add_psd(p, "eta+MT", scalar_identity(n, eta, 1.0) + mt);
  p.add_constraint(m.trace_with(rho.matrix()), Sense::GreaterEqual, 1.0 - epsilon);
  p.set_objective({{eta, 1.0}});

  const auto sol = conic::solve_sdp(p, options);
  conic::require_optimal(sol, "one_shot_ppt_ed");

  OneShotResult out;
  out.epsilon = epsilon;
  out.solver = report(sol);
  out.eta = std::min(1.0, std::max(sol.primal_value, 1e-300));
  out.rate_bits = -std::log2(out.eta);
  // Round k = 1/η down, forgiving solver noise just below an integer.
  const double k = std::floor(1.0 / out.eta * (1.0 + 1e-7));
  out.rate_integer_bits = k >= 1.0 ? std::min(std::log2(k), out.rate_bits) : 0.0;
  return out;
}

HypothesisResult hypothesis_testing_re(const HermOp& rho0, const HermOp& rho1, double epsilon,
                                       const conic::SdpOptions& options) {
  check_epsilon(epsilon, "hypothesis_testing_re");
  qmat::require_state(rho0, "hypothesis_testing_re");
  if (rho1.size() != rho0.size()) {
    throw std::invalid_argument("hypothesis_testing_re: dimension mismatch");
  }
  const auto e1 = qmat::herm_eig(rho1);
  const double radius = e1.eigenvalues.cwiseAbs().maxCoeff();
  if (e1.eigenvalues(0) < -1e-9 * std::max(1.0, radius)) {
    throw std::domain_error("hypothesis_testing_re: rho1 is not positive semidefinite");
  }
  // The test onto ker ρ1 has zero type-II error; if it also meets the type-I
  // constraint the quantity is infinite.
  const int n = rho0.size();
  CMatrix kernel = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (e1.eigenvalues(i) <= 1e-12 * radius) {
      kernel += e1.eigenvectors.col(i) * e1.eigenvectors.col(i).adjoint();
    }
  }
  if ((kernel * rho0.matrix()).trace().real() >= 1.0 - epsilon) return {kHypothesisCapBits, true};

  SdpProblem p;
  const HermVar m = HermVar::create(p, n, !(rho0.is_real() && rho1.is_real()));
  conic::add_psd(p, "M", m.expr());
  HermExpr id(n);
  id.add_identity(1.0);
  conic::add_psd(p, "1-M", id - m.expr());
  p.add_constraint(m.trace_with(rho0.matrix()), Sense::GreaterEqual, 1.0 - epsilon);
  p.set_objective(m.trace_with(rho1.matrix()));
  const auto sol = conic::solve_sdp(p, options);
  conic::require_optimal(sol, "hypothesis_testing_re");
  const double beta = sol.primal_value;
  if (beta <= std::exp2(-kHypothesisCapBits)) return {kHypothesisCapBits, true};
  return {-std::log2(beta), false};
}

double sdp1(const HermOp& rho, double epsilon, const conic::SdpOptions& options) {
  return appendix_sdp(rho, epsilon, false, options);
}

double sdp2(const HermOp& rho, double epsilon, const conic::SdpOptions& options) {
  return appendix_sdp(rho, epsilon, true, options);
}

double dh_over_rains_set(const HermOp& rho, double epsilon, const conic::SdpOptions& options) {
  return -std::log2(sdp1(rho, epsilon, options));
}

HermOp appendix_state(double theta) {
  qmat::CVector phi1 = qmat::CVector::Zero(4);
  phi1(0) = std::cos(theta);
  phi1(3) = std::sin(theta);
  qmat::CVector phi2 = qmat::CVector::Zero(4);
  phi2(2) = 1.0;  // |10⟩
  return 0.75 * HermOp::projector(2, 2, phi1) + 0.25 * HermOp::projector(2, 2, phi2);
}

}  // namespace edist::distill
