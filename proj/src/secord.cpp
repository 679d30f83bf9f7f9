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


#include "edist/secord.hpp"

#include <cmath>
#include <stdexcept>

#include "edist/sdp.hpp"

namespace edist::secord {

namespace {

void check_args(int n, double epsilon) {
  if (n < 1) throw std::invalid_argument("secord: n must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("secord: epsilon must lie in (0, 1)");
}

SecondOrderBound make(BoundKind kind, double first, double variance, int n, double epsilon) {
  SecondOrderBound b;
  b.kind = kind;
  b.n = n;
  b.epsilon = epsilon;
  b.first_order_bits = first;
  // Rounding can leave a zero variance slightly negative.
  b.second_order_bits = std::sqrt(std::max(variance, 0.0)) * qmat::inv_normal_cdf(epsilon);
  b.value_bits = n * b.first_order_bits + std::sqrt(static_cast<double>(n)) * b.second_order_bits;
  return b;
}

}  // namespace

UpperData upper_data(const HermOp& rho, const rains::RainsResult& run) {
  if (!run.converged) {
    throw conic::SolverError("secord: Rains cutting-plane run did not converge", conic::SdpStatus::MaxIter);
  }
  UpperData d;
  d.minimizer = run.minimizer;
  d.rains_bits = qmat::relative_entropy(rho, run.minimizer);
  d.variance_bits = qmat::relative_entropy_variance(rho, run.minimizer);
  return d;
}

UpperData upper_data(const HermOp& rho, const SecordOptions& options) {
  return upper_data(rho, rains::rains_bound(rho, options.rains));
}

SecondOrderBound upper_bound(const UpperData& data, int n, double epsilon) {
  check_args(n, epsilon);
  SecondOrderBound b = make(BoundKind::Upper, data.rains_bits, data.variance_bits, n, epsilon);
  b.single_minimizer = true;
  return b;
}

SecondOrderBound upper_bound(const HermOp& rho, int n, double epsilon, const SecordOptions& options) {
  check_args(n, epsilon);
  return upper_bound(upper_data(rho, options), n, epsilon);
}

SecondOrderBound lower_bound(const HermOp& rho, int n, double epsilon) {
  check_args(n, epsilon);
  qmat::require_state(rho, "secord::lower_bound");
  return make(BoundKind::Lower, qmat::coherent_info(rho), qmat::coherent_info_variance(rho), n, epsilon);
}

TightnessReport tightness_check(const HermOp& rho, double epsilon, const SecordOptions& options) {
  TightnessReport r;
  r.upper = upper_bound(rho, 1, epsilon, options);
  r.lower = lower_bound(rho, 1, epsilon);
  r.first_gap = std::fabs(r.upper.first_order_bits - r.lower.first_order_bits);
  r.second_gap = std::fabs(r.upper.second_order_bits - r.lower.second_order_bits);
  r.tight = r.first_gap <= 1e-6 && r.second_gap <= 1e-4;
  return r;
}

}  // namespace edist::secord
