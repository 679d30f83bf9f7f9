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
#include "edist/distill.hpp"
#include "test_util.hpp"

using namespace edist::distill;
using edist::qmat::CMatrix;
using edist::qmat::CVector;
using edist::qmat::max_entangled;
using edist::testing::random_pure_state;
using edist::testing::random_state;

namespace {

// Brute force over the U⊗Ū-invariant ansatz M = aΦ + b(𝟙−Φ) for d = 2,
// where M^{T_B} has eigenvalues (a+b)/2 on P+ and (3b−a)/2 on P−.
double symmetric_ansatz_eta(double phi_weight, double epsilon) {
  const int steps = 2000;
  double best = 1.0;
  for (int i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;
    // Smallest feasible b for this a (η is nondecreasing in b once a is set
    // unless 3b < a, so the grid over b stays coarse near the boundary).
    for (int j = 0; j <= steps; ++j) {
      const double b = static_cast<double>(j) / steps;
      const double fid = phi_weight * a + (1.0 - phi_weight) * b;
      if (fid < 1.0 - epsilon - 1e-12) continue;
      const double eta = std::max(std::abs(a + b), std::abs(3 * b - a)) / 2.0;
      best = std::min(best, eta);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("one_shot_ppt_ed on the Bell state") {
  const auto r = one_shot_ppt_ed(max_entangled(2), 1e-6);
  CHECK(r.eta == doctest::Approx((1 - 1e-6) / 2).epsilon(1e-7));
  CHECK(r.rate_bits == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.rate_integer_bits == doctest::Approx(1.0));
  CHECK(r.rate_integer_bits <= r.rate_bits + 1e-12);
}

TEST_CASE("one_shot_ppt_ed on the maximally mixed state matches the symmetric ansatz") {
  const auto r = one_shot_ppt_ed(edist::qmat::HermOp::identity(2, 2) * 0.25, 0.5);
  // Overlap of 𝟙/4 with Φ is 1/4.
  CHECK(std::abs(r.eta - symmetric_ansatz_eta(0.25, 0.5)) < 1e-4);
  CHECK(r.rate_integer_bits <= r.rate_bits + 1e-12);
}

TEST_CASE("one_shot_ppt_ed on a single isotropic copy") {
  const double f = 0.9;
  const auto phi = max_entangled(3);
  const auto iso = f * phi + ((1 - f) / 8.0) * (edist::qmat::HermOp::identity(3, 3) - phi);
  const auto r = one_shot_ppt_ed(iso, 0.001);
  CHECK(std::abs(r.rate_bits - (-std::log2(149.0 / 150.0))) < 1e-6);
}

TEST_CASE("one_shot_ppt_ed basic properties on random states") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 4; ++trial) {
    const auto rho = random_state(rng, 2, 2);
    double previous = -1.0;
    for (double eps : {0.01, 0.1, 0.3}) {
      const auto r = one_shot_ppt_ed(rho, eps);
      CHECK(r.rate_bits >= -1e-9);
      CHECK(r.eta <= 1.0);
      CHECK(r.rate_bits >= previous - 1e-7);
      previous = r.rate_bits;
    }
  }
}

TEST_CASE("one_shot_ppt_ed on product states stays near the trivial rate") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 3; ++trial) {
    const auto rho = edist::qmat::tensor_product(random_state(rng, 2, 1), random_state(rng, 1, 2));
    const double eps = 0.05;
    CHECK(one_shot_ppt_ed(rho, eps).rate_bits <= -std::log2(1 - eps) + 1e-5);
  }
}

TEST_CASE("one_shot_ppt_ed equals -log2 sdp1") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const auto rho = trial % 2 ? random_state(rng, 2, 2) : random_pure_state(rng, 2, 2);
    const double eps = 0.1;
    const double rate = one_shot_ppt_ed(rho, eps).rate_bits;
    CHECK(std::abs(rate - dh_over_rains_set(rho, eps)) < 1e-5);
  }
}

TEST_CASE("hypothesis_testing_re") {
  std::mt19937_64 rng(3);
  const auto rho = random_state(rng, 2, 2);
  const auto sigma = random_state(rng, 2, 2);
  const double eps = 0.2;
  const auto self = hypothesis_testing_re(rho, rho, eps);
  CHECK_FALSE(self.capped);
  CHECK(self.bits == doctest::Approx(-std::log2(1 - eps)).epsilon(1e-7));
  const double base = hypothesis_testing_re(rho, sigma, eps).bits;
  const double scaled = hypothesis_testing_re(rho, 0.25 * sigma, eps).bits;
  CHECK(scaled == doctest::Approx(base + 2.0).epsilon(1e-7));

  const auto k0 = edist::qmat::HermOp::diagonal(2, 1, Eigen::Vector2d(1, 0));
  const auto k1 = edist::qmat::HermOp::diagonal(2, 1, Eigen::Vector2d(0, 1));
  const auto disjoint = hypothesis_testing_re(k0, k1, 0.1);
  CHECK(disjoint.capped);
  CHECK(disjoint.bits >= kHypothesisCapBits);
}

TEST_CASE("appendix_state") {
  const auto r0 = appendix_state(0.0);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = 0.75;
  expected(2, 2) = 0.25;
  CHECK((r0.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
  for (double th : {0.1, 0.7, 2.0}) CHECK(appendix_state(th).trace() == doctest::Approx(1.0));
  CVector phi1 = CVector::Zero(4);
  phi1(0) = phi1(3) = std::sqrt(0.5);
  const auto r = appendix_state(M_PI / 4);
  CHECK((phi1.adjoint() * r.matrix() * phi1)(0, 0).real() == doctest::Approx(0.75));
}

TEST_CASE("sdp1 dominates sdp2 and they separate on the two-qubit family") {
  const double eps = 1 - std::sqrt(3.0) / 2;
  const auto rho = appendix_state(M_PI / 8);
  const double a = sdp1(rho, eps), b = sdp2(rho, eps);
  CHECK(a >= b - 1e-8);
  CHECK(a - b > 1e-3);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    const auto s = random_state(rng, 2, 2);
    CHECK(sdp1(s, 0.1) >= sdp2(s, 0.1) - 1e-8);
  }
}
