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

#include <array>
#include <vector>

/// Least-squares fit of per-copy rates to c₁ + c₂/√n + c₃·log₂n/n + c₄/n.
/// c₃ uses log base 2; in natural log it would be c₃/ln 2.
namespace edist::fitkit {

struct RatePoint {
  int n = 1;
  double rate_per_copy_bits = 0.0;
};

struct RateCurve {
  std::vector<RatePoint> points;
  std::array<double, 4> coefficients{};
  double residual_norm = 0.0;  // √Σ (model − data)²
  std::vector<double> residuals;  // data − model, per point

  double evaluate(int n) const;
};

/// The four basis functions at n.
std::array<double, 4> basis(int n);

/// Householder QR with column pivoting, uniform weights. Needs at least 5
/// points with distinct n ≥ 1; throws std::invalid_argument otherwise or when
/// the design matrix is rank deficient.
RateCurve fit_rate_curve(const std::vector<RatePoint>& points);

}  // namespace edist::fitkit
