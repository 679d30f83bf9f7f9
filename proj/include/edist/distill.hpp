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

#include "edist/qmat.hpp"
#include "edist/sdp.hpp"

/// One-shot PPT-assisted distillation quantities, each posed as an SDP.
namespace edist::distill {

using qmat::HermOp;

struct SolverReport {
  conic::SdpStatus status = conic::SdpStatus::MaxIter;
  int iterations = 0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct OneShotResult {
  double eta = 1.0;
  double rate_bits = 0.0;          // -log2 eta
  double rate_integer_bits = 0.0;  // log2 floor(1/eta), 0 when 1/eta < 1
  double epsilon = 0.0;
  SolverReport solver;
};

/// min η  s.t.  0 ⪯ M ⪯ 𝟙,  tr ρM ≥ 1 − ε,  −η𝟙 ⪯ M^{T_B} ⪯ η𝟙.
///
/// The optimal value gives the one-shot ε-infidelity PPT-assisted distillable
/// entanglement −log2 η with η = 1/k relaxed to a real number. The integer
/// reading rounds k = 1/η down.
OneShotResult one_shot_ppt_ed(const HermOp& rho, double epsilon,
                              const conic::SdpOptions& options = conic::default_sdp_options());

inline constexpr double kHypothesisCapBits = 30.0;

struct HypothesisResult {
  double bits = 0.0;
  /// Set when the supports are (numerically) disjoint enough that the optimal
  /// type-II error vanishes; bits is then kHypothesisCapBits.
  bool capped = false;
};

/// D_H^ε(ρ0‖ρ1) = −log2 min { tr Mρ1 : 0 ⪯ M ⪯ 𝟙, tr Mρ0 ≥ 1 − ε }.
HypothesisResult hypothesis_testing_re(const HermOp& rho0, const HermOp& rho1, double epsilon,
                                       const conic::SdpOptions& options = conic::default_sdp_options());

/// max −tr X + t(1−ε)  s.t.  C + X − tρ ⪰ 0, X ⪰ 0, t ≥ 0, ‖C^{T_B}‖₁ ≤ 1.
/// The trace-norm ball is written as C^{T_B} = C₊ − C₋ with C± ⪰ 0 and
/// tr(C₊ + C₋) ≤ 1. The optimum equals η of one_shot_ppt_ed.
double sdp1(const HermOp& rho, double epsilon,
            const conic::SdpOptions& options = conic::default_sdp_options());

/// sdp1 with the additional constraint C ⪰ 0.
double sdp2(const HermOp& rho, double epsilon,
            const conic::SdpOptions& options = conic::default_sdp_options());

/// min over ‖C^{T_B}‖₁ ≤ 1 of D_H^ε(ρ‖C), in bits: −log2 sdp1.
double dh_over_rains_set(const HermOp& rho, double epsilon,
                         const conic::SdpOptions& options = conic::default_sdp_options());

/// ρ_θ = ¾|φ1⟩⟨φ1| + ¼|10⟩⟨10| with |φ1⟩ = cos θ|00⟩ + sin θ|11⟩.
HermOp appendix_state(double theta);

}  // namespace edist::distill
