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


#include "edist/rains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "edist/sdp_model.hpp"

namespace edist::rains {

using conic::HermExpr;
using conic::HermVar;
using conic::SdpProblem;
using conic::Sense;
using qmat::Complex;

namespace {

constexpr double kAlphaMin = 1e-9;
constexpr double kAlphaTol = 1e-10;
constexpr double kSlopeTol = 1e-12;
constexpr double kEigenFloor = 1e-12;
constexpr double kNudge = 1e-6;
constexpr int kMaxCutFailures = 3;
constexpr double kShrink = 0.1;

// tr ρ Dln[σ](Δ) with ρ and Δ already rotated into σ's eigenbasis.
double directional(const RMatrix& d, const CMatrix& w, const CMatrix& delta) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j) acc += d(i, j) * (w(i, j) * delta(j, i)).real();
  return acc;
}

HermOp mix(const HermOp& z, const HermOp& s, double alpha) {
  return alpha * z + (1.0 - alpha) * s;
}

// Clips the tiny negative eigenvalues an interior-point answer may carry and
// scales back into PPT′ when ‖σ^{T_B}‖₁ drifted above 1.
HermOp sanitize(const HermOp& s) {
  const auto e = qmat::herm_eig(s);
  const CMatrix clipped = qmat::spectral_apply(e, [](double l) { return std::max(l, 0.0); });
  HermOp out(s.dim_a(), s.dim_b(), 0.5 * (clipped + clipped.adjoint()), 1e-9);
  const double tn = qmat::trace_norm(qmat::partial_transpose(out));
  if (tn > 1.0) out = out * (1.0 / tn);
  return out;
}

double slope(const HermOp& rho, const HermOp& s, const HermOp& delta) {
  const auto e = qmat::herm_eig(s);
  const CMatrix w = e.eigenvectors.adjoint() * rho.matrix() * e.eigenvectors;
  const CMatrix dr = e.eigenvectors.adjoint() * delta.matrix() * e.eigenvectors;
  return -directional(d_matrix(e.eigenvalues.cwiseMax(std::numeric_limits<double>::min())), w, dr);
}

}  // namespace

RMatrix d_matrix(const RVector& lambda) {
  const Eigen::Index n = lambda.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lambda(i) > 0.0)) throw std::domain_error("d_matrix: eigenvalues must be positive");
  }
  RMatrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 1.0 / lambda(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double li = lambda(i), lj = lambda(j);
      const double v = std::abs(li - lj) <= 1e-12 * std::max(li, lj)
                           ? 1.0 / li
                           : std::log1p((li - lj) / lj) / (li - lj);
      d(i, j) = d(j, i) = v;
    }
  }
  return d;
}

CMatrix log_derivative(const qmat::EigenDecomp& sigma, const CMatrix& delta) {
  const RMatrix d = d_matrix(sigma.eigenvalues);
  const CMatrix rotated = sigma.eigenvectors.adjoint() * delta * sigma.eigenvectors;
  return sigma.eigenvectors * d.cast<Complex>().cwiseProduct(rotated) *
         sigma.eigenvectors.adjoint();
}

double neg_log_trace(const HermOp& rho, const HermOp& sigma) {
  const auto e = qmat::herm_eig(sigma);
  const double cutoff = 1e-12 * e.eigenvalues.cwiseAbs().maxCoeff();
  const CMatrix w = e.eigenvectors.adjoint() * rho.matrix() * e.eigenvectors;
  double value = 0.0, outside = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double wi = w(i, i).real();
    if (e.eigenvalues(i) > cutoff) {
      value -= wi * std::log(e.eigenvalues(i));
    } else {
      outside += wi;
    }
  }
  return outside > 1e-12 ? qmat::kInfinity : value;
}

HermOp cut_matrix(const HermOp& rho, const HermOp& sigma) {
  const CMatrix e = log_derivative(qmat::herm_eig(sigma), rho.matrix());
  return HermOp(rho.dim_a(), rho.dim_b(), 0.5 * (e + e.adjoint()), 1e-8);
}

namespace {

// ln[a, b, c]: second divided difference of the logarithm.
double log_dd2(double a, double b, double c) {
  double v[3] = {a, b, c};
  std::sort(v, v + 3);
  if (v[2] - v[0] <= 1e-9 * v[2]) return -1.0 / (2.0 * v[1] * v[1]);
  auto dd1 = [](double x, double y) {
    if (std::abs(x - y) <= 1e-12 * std::max(x, y)) return 1.0 / std::max(x, y);
    return std::log1p((x - y) / y) / (x - y);
  };
  return (dd1(v[0], v[1]) - dd1(v[1], v[2])) / (v[0] - v[2]);
}

}  // namespace

RMatrix neg_log_hessian(const HermOp& rho, const HermOp& sigma, const std::vector<CMatrix>& basis) {
  const auto e = qmat::herm_eig(sigma);
  const Eigen::Index n = e.eigenvalues.size();
  const int m = static_cast<int>(basis.size());
  const CMatrix w = e.eigenvectors.adjoint() * rho.matrix() * e.eigenvectors;
  std::vector<double> t(n * n * n);
  auto at = [n](Eigen::Index i, Eigen::Index k, Eigen::Index j) { return (i * n + k) * n + j; };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index j = 0; j < n; ++j)
        t[at(i, k, j)] = log_dd2(e.eigenvalues(i), e.eigenvalues(k), e.eigenvalues(j));

  std::vector<CMatrix> rotated(m);
  for (int a = 0; a < m; ++a) rotated[a] = e.eigenvectors.adjoint() * basis[a] * e.eigenvectors;
  RMatrix h(m, m);
  CMatrix kernel(n, n);
  for (int a = 0; a < m; ++a) {
    const CMatrix& x = rotated[a];
    // H_ab = −Σ_{kj} B_kj Σ_i T_ikj (W_ji A_ik + A_ji W_ik).
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += t[at(i, k, j)] * (w(j, i) * x(i, k) + x(j, i) * w(i, k));
        }
        kernel(k, j) = acc;
      }
    for (int b = 0; b <= a; ++b) {
      const double v = -(rotated[b].cwiseProduct(kernel)).sum().real();
      h(a, b) = h(b, a) = v;
    }
  }
  return 0.5 * (h + h.transpose());
}

double RainsResult::lower_bits() const { return lower_nats / std::log(2.0); }
double RainsResult::upper_bits() const { return upper_nats / std::log(2.0); }

namespace {

// argmin over α ∈ [alpha_min, 1] of −tr ρ ln(αp + (1−α)q); the objective is
// convex in α so the derivative is bisected.
double segment_alpha(const HermOp& rho, const HermOp& q, const HermOp& p, double alpha_min) {
  const HermOp delta = p - q;
  auto g = [&](double a) { return slope(rho, mix(p, q, a), delta); };
  double lo = alpha_min, hi = 1.0;
  if (g(lo) >= 0.0) return lo;
  if (g(hi) <= 0.0) return hi;
  while (hi - lo > kAlphaTol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) <= kSlopeTol) return mid;
    (gm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double line_search_alpha(const HermOp& rho, const HermOp& sigma_lower, const HermOp& z) {
  return segment_alpha(rho, sigma_lower, z, kAlphaMin);
}

HermOp line_search(const HermOp& rho, const HermOp& sigma_lower, const HermOp& z) {
  return mix(z, sigma_lower, line_search_alpha(rho, sigma_lower, z));
}

namespace {

struct CutSolution {
  HermOp sigma;
  double lower = 0.0;
  bool certified = false;
};

CutSolution solve_cut_sdp(const HermOp& rho, const TangentData& tangents, double floor,
                          const conic::SdpOptions& options) {
  const int n = rho.size();
  const bool cx = !rho.is_real();
  SdpProblem p;
  const HermVar sigma = HermVar::create(p, n, cx);
  const HermVar minus = HermVar::create(p, n, cx);
  const int t = p.add_variables(1);

  conic::add_psd(p, "sigma", sigma.expr());
  conic::add_psd(p, "sigma-", minus.expr());
  conic::add_psd(p, "sigma+", sigma.expr().partial_transpose(rho.dim_a(), rho.dim_b()) + minus.expr());
  // tr σ+ + tr σ− = tr σ + 2 tr σ−.
  p.add_constraint(conic::concat(sigma.trace(), conic::scaled_form(minus.trace(), 2.0)),
                   Sense::LessEqual, 1.0);
  p.add_constraint({{t, 1.0}}, Sense::GreaterEqual, floor);
  for (std::size_t i = 0; i < tangents.cuts.size(); ++i) {
    conic::LinearForm row = sigma.trace_with(tangents.cuts[i].matrix());
    row.push_back({t, 1.0});
    p.add_constraint(row, Sense::GreaterEqual, tangents.offsets[i]);
  }
  p.set_objective({{t, 1.0}});
  const auto sol = conic::solve_sdp(p, options);
  const CMatrix s = sigma.value(sol.y);
  // The dual value is only as good as the solver's stopping test; back it
  // off by that much so the bracket stays on the safe side.
  const double bound = std::min(sol.dual_value, sol.primal_value);
  return {HermOp(rho.dim_a(), rho.dim_b(), 0.5 * (s + s.adjoint()), 1e-6),
          bound - options.tolerance * (1.0 + std::abs(bound)), sol.optimal()};
}

// One projected Newton step from σ: minimize the second-order model of
// −tr ρ ln σ over PPT′, then search the segment towards that point.
HermOp newton_point(const HermOp& rho, const HermOp& sigma, const HermOp& z, double bracket,
                    const conic::SdpOptions& options) {
  const int n = rho.size();
  const bool cx = !rho.is_real();
  SdpProblem p;
  // The variable is the step Δ = σ′ − σ. Working relative to σ keeps the
  // objective near zero, where the solver's relative gap test is meaningful.
  const HermVar var = HermVar::create(p, n, cx);  // first, so scalars start at 0
  const int m = var.num_scalars();
  std::vector<CMatrix> basis(m);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(m);
  for (int a = 0; a < m; ++a) {
    unit(a) = 1.0;
    basis[a] = var.value(unit);
    unit(a) = 0.0;
  }
  const RMatrix h = neg_log_hessian(rho, sigma, basis);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  const double top = std::max(es.eigenvalues().maxCoeff(), 1e-300);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(1e-12 * top).cwiseSqrt();
  const RMatrix l = es.eigenvectors() * root.asDiagonal();  // H ≈ L Lᵀ

  const HermVar minus = HermVar::create(p, n, cx);
  const int s = p.add_variables(1);
  conic::HermExpr moved = var.expr();
  moved.add_constant(sigma.matrix());
  // σ′ ⪰ σ/10 rather than σ′ ⪰ 0: a step may shrink an eigenvalue tenfold
  // but not clip it, which keeps the next Hessian usable when the minimizer
  // sits on the boundary (pure states, for one).
  conic::HermExpr kept = var.expr();
  kept.add_constant((1.0 - kShrink) * sigma.matrix());
  conic::add_psd(p, "sigma", kept);
  conic::add_psd(p, "sigma-", minus.expr());
  conic::add_psd(p, "sigma+", moved.partial_transpose(rho.dim_a(), rho.dim_b()) + minus.expr());
  p.add_constraint(conic::concat(var.trace(), conic::scaled_form(minus.trace(), 2.0)),
                   Sense::LessEqual, 1.0 - sigma.trace());
  // [[𝟙, v], [vᵀ, 2s]] ⪰ 0 with v = LᵀΔ bounds s ≥ ½ΔᵀHΔ.
  const int epi = p.add_block("model", m + 1);
  for (int i = 0; i < m; ++i) {
    p.add_constant(epi, i, i, 1.0);
    for (int j = 0; j < m; ++j) {
      if (l(j, i) != 0.0) p.add_coefficient(epi, j, i, m, l(j, i));
    }
  }
  p.add_coefficient(epi, s, m, m, 2.0);
  // Linear term: gradient of −tr ρ ln σ is −E. The model decrease is at most
  // the bracket width, so scaling by its inverse keeps the optimal value O(1)
  // and out of reach of the solver's absolute stopping tolerance.
  const double scale = 1.0 / std::clamp(bracket, 1e-9, 1.0);
  conic::LinearForm obj = conic::scaled_form(var.trace_with(cut_matrix(rho, sigma).matrix()), -scale);
  obj.push_back({s, scale});
  p.set_objective(obj);
  const auto sol = conic::solve_sdp(p, options);
  // A stalled solve still leaves a usable candidate: the target is pulled
  // back into PPT′ below and the segment search never does worse than σ.
  if (sol.status == conic::SdpStatus::Infeasible || !sol.y.allFinite()) return sigma;
  const CMatrix target = sigma.matrix() + var.value(sol.y);
  HermOp far = sanitize(HermOp(rho.dim_a(), rho.dim_b(), 0.5 * (target + target.adjoint()), 1e-8));
  // Only lift off the boundary when the projection actually clipped; the
  // lift itself moves D by about kAlphaMin.
  if (qmat::min_eigenvalue(far) < kEigenFloor) far = mix(z, far, kAlphaMin);
  return mix(sigma, far, segment_alpha(rho, far, sigma, 0.0));
}

void add_tangent(TangentData& data, const HermOp& rho, const HermOp& point, double value) {
  const HermOp e = cut_matrix(rho, point);
  data.points.push_back(point);
  data.cuts.push_back(e);
  data.offsets.push_back(value + (e.matrix() * point.matrix()).trace().real());
}

}  // namespace

RainsResult rains_bound(const HermOp& rho, const RainsOptions& options) {
  qmat::require_state(rho, "rains_bound");
  RainsResult res;
  if (qmat::is_ppt_prime(rho)) {
    res.minimizer = rho;
    res.converged = true;
    res.trace.push_back({0, 0.0, 0.0, 0});
    return res;
  }
  const int n = rho.size();
  const HermOp z = HermOp::identity(rho.dim_a(), rho.dim_b()) * (1.0 / n);

  // The cutting planes bracket min −tr ρ ln σ; subtracting S(ρ) turns that
  // into a bracket on the relative entropy itself.
  const double s = qmat::entropy(rho, qmat::LogBase::E);
  double lower = s;
  double upper = std::log(static_cast<double>(n));
  res.minimizer = z;
  add_tangent(res.tangents, rho, z, upper);
  res.trace.push_back({0, lower - s, upper - s, 1});

  int failures = 0;
  while (upper - lower >= options.tol && res.iterations < options.max_iter) {
    ++res.iterations;
    const CutSolution cut = solve_cut_sdp(rho, res.tangents, lower, options.sdp);
    // An uncertified solve still proposes a point, but cannot move the
    // lower bound. Repeated failures end the run unconverged.
    if (cut.certified) {
      lower = std::max(lower, std::min(cut.lower, upper));
      failures = 0;
    } else if (++failures >= kMaxCutFailures) {
      break;
    }

    HermOp next = line_search(rho, sanitize(cut.sigma), z);
    if (qmat::min_eigenvalue(next) < kEigenFloor) next = mix(z, next, kNudge);
    const double value = neg_log_trace(rho, next);
    if (value < upper) {
      upper = value;
      res.minimizer = next;
    }
    add_tangent(res.tangents, rho, next, value);

    if (options.newton && upper - lower >= options.tol) {
      const HermOp refined = newton_point(rho, res.minimizer, z, upper - lower, options.sdp);
      const double rv = neg_log_trace(rho, refined);
      if (rv < upper) {
        upper = rv;
        res.minimizer = refined;
        add_tangent(res.tangents, rho, refined, rv);
      }
    }
    // Convexity gives f ≥ f(σ*) + ⟨∇f(σ*), σ − σ*⟩ on all of PPT′, so the
    // incumbent's own tangent yields a lower bound that closes as σ* nears
    // the minimizer, independent of the conditioning of the full cut model.
    if (upper - lower >= options.tol) {
      TangentData single;
      add_tangent(single, rho, res.minimizer, upper);
      const CutSolution fw = solve_cut_sdp(rho, single, lower, options.sdp);
      if (fw.certified) lower = std::max(lower, std::min(fw.lower, upper));
    }
    res.trace.push_back({res.iterations, lower - s, upper - s,
                         static_cast<int>(res.tangents.cuts.size())});
  }
  if (options.newton && upper - lower < options.tol) {
    for (int k = 0; k < options.polish; ++k) {
      const HermOp refined = newton_point(rho, res.minimizer, z, upper - lower, options.sdp);
      const double rv = neg_log_trace(rho, refined);
      if (!(rv < upper)) break;
      upper = rv;
      res.minimizer = refined;
    }
  }
  res.lower_nats = lower - s;
  res.upper_nats = upper - s;
  res.tangent_count = static_cast<int>(res.tangents.cuts.size());
  res.converged = upper - lower < options.tol;
  return res;
}

TwoCopyGap two_copy_gap(const HermOp& rho, const RainsOptions& options) {
  if (rho.size() > 9) throw std::invalid_argument("two_copy_gap: d_A*d_B must be at most 9");
  const RainsResult one = rains_bound(rho, options);
  const RainsResult two = rains_bound(qmat::tensor_product(rho, rho), options);
  return {2.0 * one.lower_nats, two.upper_nats};
}

}  // namespace edist::rains
