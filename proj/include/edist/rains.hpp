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

#include <utility>
#include <vector>

#include "edist/qmat.hpp"
#include "edist/sdp.hpp"

/// Rains bound R(ρ) = min over PPT′ of D(ρ‖σ) by a cutting-plane method that
/// keeps a certified bracket [lower, upper]. The cuts work on −tr ρ ln σ;
/// reported values are shifted by S(ρ) so they bound D(ρ‖σ) itself. Natural
/// log inside; bits at the boundary.
namespace edist::rains {

using qmat::CMatrix;
using qmat::HermOp;
using qmat::RMatrix;
using qmat::RVector;

/// D(λ)_ij = (ln λ_i − ln λ_j)/(λ_i − λ_j), with 1/λ_i on (near-)ties.
RMatrix d_matrix(const RVector& lambda);

/// Fréchet derivative of ln at σ applied to Δ: U[D(λ)∘U†ΔU]U†.
CMatrix log_derivative(const qmat::EigenDecomp& sigma, const CMatrix& delta);

/// −tr ρ ln σ in nats; +∞ if ρ has weight outside supp σ.
double neg_log_trace(const HermOp& rho, const HermOp& sigma);

/// Gradient matrix E = U[D(λ)∘U†ρU]U† of tr ρ ln σ at a positive definite σ.
HermOp cut_matrix(const HermOp& rho, const HermOp& sigma);

/// Hessian of σ ↦ −tr ρ ln σ at a positive definite σ, in the real
/// coordinates whose unit directions are `basis`.
RMatrix neg_log_hessian(const HermOp& rho, const HermOp& sigma, const std::vector<CMatrix>& basis);

struct TangentData {
  std::vector<HermOp> points;
  std::vector<HermOp> cuts;
  /// −tr ρ ln σ_i + tr E_i σ_i: each cut reads t + tr(E_i σ) ≥ offset_i.
  std::vector<double> offsets;
};

/// One bracket record per iteration.
struct TraceRow {
  int iter = 0;
  double lower_nats = 0.0;
  double upper_nats = 0.0;
  int tangents = 0;
};

struct RainsResult {
  double lower_nats = 0.0;
  double upper_nats = 0.0;
  HermOp minimizer;
  int iterations = 0;
  int tangent_count = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
  TangentData tangents;

  double lower_bits() const;
  double upper_bits() const;
};

struct RainsOptions {
  double tol = 1e-6;  // nats
  int max_iter = 500;
  /// Also try a projected-Newton point from the incumbent each iteration.
  /// Lower bounds still come only from tangent cuts; this just picks better
  /// points, which plain cutting planes need badly beyond 2⊗2.
  bool newton = true;
  /// Extra Newton steps on the incumbent once the bracket has closed. They
  /// only move the upper point; useful when σ* itself is consumed downstream.
  int polish = 0;
  conic::SdpOptions sdp = conic::default_sdp_options();
};

/// argmin over α ∈ [1e-9, 1] of −tr ρ ln(αZ + (1−α)σ_lower), by bisection on
/// the derivative. σ_lower must be PSD and Z positive definite.
HermOp line_search(const HermOp& rho, const HermOp& sigma_lower, const HermOp& z);
/// The α chosen by line_search.
double line_search_alpha(const HermOp& rho, const HermOp& sigma_lower, const HermOp& z);

RainsResult rains_bound(const HermOp& rho, const RainsOptions& options = {});

struct TwoCopyGap {
  double two_times_lower_1 = 0.0;  // 2 R̲(ρ), nats
  double upper_2 = 0.0;            // R̄(ρ⊗ρ), nats
};

/// Compares twice the single-copy lower bound with the two-copy upper bound.
/// ρ⊗ρ is regrouped to AA′:BB′ first. Requires d_A·d_B ≤ 9.
TwoCopyGap two_copy_gap(const HermOp& rho, const RainsOptions& options = {});

}  // namespace edist::rains
