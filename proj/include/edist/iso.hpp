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

#include <vector>

#include "edist/lp.hpp"
#include "edist/qmat.hpp"

/// Isotropic states ρ_F = F·Φ + (1−F)(𝟙−Φ)/(d²−1) and the exact n-copy LP for
/// their one-shot PPT-assisted distillable entanglement.
///
/// Twirling reduces the n-copy SDP to a linear program. The test operator is
/// M = Σ_i m_i P_i, where P_i sums the n-fold products with exactly i copies
/// of Φ. Its partial transpose is diagonal in blocks Q_k, the products with
/// exactly k copies of the symmetric projector, with eigenvalue
/// t_k = Σ_i x_{i,k} m_i.
namespace edist::iso {

using conic::Rational;
using qmat::HermOp;

struct IsoParams {
  int d = 2;
  Rational fidelity;  // F
  int n = 1;
  Rational epsilon;
};

/// Largest supported copy count. The rationals grow with n; past this the
/// exact simplex has no useful time bound.
inline constexpr int kMaxCopies = 120;

void validate(const IsoParams& p);

struct IsoLpResult {
  Rational eta;
  double rate_bits = 0.0;  // −log2 η
  std::vector<Rational> m;
  std::vector<Rational> t;
  int pivots = 0;
};

HermOp iso_state(int d, double fidelity);

/// x_{i,k}; exact.
Rational x_coeff(int i, int k, int n, int d);

/// C(n,k)·(d(d+1)/2)^k·(d(d−1)/2)^{n−k}, the dimension of block Q_k.
mpz_class block_dimension(int k, int n, int d);

/// P_i for n copies, as a dense operator on (A^n : B^n). Test scale only:
/// throws when d^{2n} exceeds 2^14.
HermOp symmetrized_projector(int i, int n, int d);

/// Solves
///   min η  s.t.  Σ_i C(n,i) F^i (1−F)^{n−i} m_i ≥ 1 − ε,
///                −η ≤ Σ_i x_{i,k} m_i ≤ η  (k = 0..n),   0 ≤ m_i ≤ 1
/// in exact arithmetic.
IsoLpResult iso_lp(const IsoParams& p);

/// Closed-form Rains bound log2 d − (1−F) log2(d−1) − h(F) in bits.
/// Requires F > 1/d; below that the state is PPT.
double iso_rains_closed(int d, double fidelity);

/// Coherent information I(A⟩B) of ρ_F in bits (the hashing rate).
double iso_hashing(int d, double fidelity);

}  // namespace edist::iso
