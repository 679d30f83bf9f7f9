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
#include "edist/iso.hpp"
#include "edist/secord.hpp"
#include "test_util.hpp"

using namespace edist;
using qmat::CVector;
using qmat::HermOp;

namespace {

HermOp ket(const CVector& v) { return HermOp::projector(2, 2, v / v.norm()); }

HermOp mixture(double p, const CVector& v1, const CVector& v2) { return p * ket(v1) + (1.0 - p) * ket(v2); }

CVector vec(double a, double b, double c, double d) {
  CVector v(4);
  v << a, b, c, d;
  return v;
}

const CVector phi_plus = vec(1, 0, 0, 1);
const CVector psi_plus = vec(0, 1, 1, 0);
const CVector uniform = vec(1, 1, 1, 1);

HermOp schmidt_state(double l0, double l1) { return ket(vec(std::sqrt(l0), 0, 0, std::sqrt(l1))); }

}  // namespace

TEST_CASE("pure state expansions match the entanglement spectrum") {
  const double eps = 0.05;
  const auto psi = schmidt_state(0.9, 0.1);
  const double s = qmat::binary_entropy(0.1);
  const double v = 0.9 * std::pow(std::log2(0.9), 2) + 0.1 * std::pow(std::log2(0.1), 2) - s * s;
  const double second = std::sqrt(v) * qmat::inv_normal_cdf(eps);
  const auto up = secord::upper_bound(psi, 1, eps);
  const auto lo = secord::lower_bound(psi, 1, eps);
  CHECK(up.first_order_bits == doctest::Approx(s).epsilon(1e-6));
  CHECK(up.second_order_bits == doctest::Approx(second).epsilon(1e-4));
  CHECK(lo.first_order_bits == doctest::Approx(s).epsilon(1e-10));
  CHECK(lo.second_order_bits == doctest::Approx(second).epsilon(1e-10));
  CHECK(up.kind == secord::BoundKind::Upper);
  CHECK(up.single_minimizer);
  CHECK(lo.kind == secord::BoundKind::Lower);
  CHECK(!lo.single_minimizer);
}

TEST_CASE("maximally entangled state has no second-order term") {
  const auto phi = ket(phi_plus);
  const auto up = secord::upper_bound(phi, 1, 0.01);
  const auto lo = secord::lower_bound(phi, 1, 0.01);
  CHECK(up.first_order_bits == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(lo.first_order_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(lo.second_order_bits) < 1e-12);
  CHECK(std::fabs(up.second_order_bits) < 1e-8);
}

TEST_CASE("Bell mixture lower bound closed form") {
  for (double p : {0.1, 0.3, 0.45}) {
    const auto rho = mixture(p, phi_plus, psi_plus);
    const double eps = 0.001;
    const auto lo = secord::lower_bound(rho, 7, eps);
    const double second = std::sqrt(p * (1 - p)) * std::fabs(std::log2((1 - p) / p)) * qmat::inv_normal_cdf(eps);
    CHECK(lo.first_order_bits == doctest::Approx(1 - qmat::binary_entropy(p)).epsilon(1e-10));
    CHECK(lo.second_order_bits == doctest::Approx(second).epsilon(1e-9));
    CHECK(lo.value_bits == doctest::Approx(7 * lo.first_order_bits + std::sqrt(7.0) * lo.second_order_bits));
  }
}

TEST_CASE("maximally mixed state reports negative coherent information") {
  const auto lo = secord::lower_bound(HermOp::identity(2, 2) * 0.25, 3, 0.1);
  CHECK(lo.first_order_bits == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("tightness") {
  CHECK(secord::tightness_check(mixture(0.3, phi_plus, psi_plus), 0.01).tight);
  CHECK(secord::tightness_check(mixture(0.5, phi_plus, uniform), 0.01).tight);
  const auto iso = secord::tightness_check(iso::iso_state(3, 0.9), 0.001);
  CHECK(!iso.tight);
  CHECK(iso.first_gap > 0.1);
}

TEST_CASE("isotropic upper expansion") {
  const auto up = secord::upper_bound(iso::iso_state(3, 0.9), 100, 0.001);
  CHECK(up.first_order_bits == doctest::Approx(1.016).epsilon(1e-3));
  CHECK(up.second_order_bits == doctest::Approx(-3.866).epsilon(0.05 / 3.866));
  CHECK(up.value_bits == doctest::Approx(100 * up.first_order_bits + 10 * up.second_order_bits));
}

TEST_CASE("expansion properties on random states") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 4; ++t) {
    const auto rho = testing::random_state(rng, 2, 2);
    const double eps = 0.02;
    const auto data = secord::upper_data(rho);
    const auto up = secord::upper_bound(data, 10, eps);
    const auto up_flip = secord::upper_bound(data, 10, 1 - eps);
    const auto lo = secord::lower_bound(rho, 10, eps);
    const auto lo_flip = secord::lower_bound(rho, 10, 1 - eps);
    CHECK(lo.first_order_bits <= up.first_order_bits + 1e-6);
    CHECK(up.second_order_bits <= 0.0);
    CHECK(lo.second_order_bits <= 0.0);
    CHECK(up.second_order_bits == doctest::Approx(-up_flip.second_order_bits).epsilon(1e-9));
    CHECK(lo.second_order_bits == doctest::Approx(-lo_flip.second_order_bits).epsilon(1e-9));
    // Per-copy value tends to the first-order term.
    const auto big = secord::upper_bound(data, 1000000, eps);
    CHECK(std::fabs(big.value_bits / big.n - big.first_order_bits) < 0.01);
  }
}

TEST_CASE("argument checks") {
  const auto phi = ket(phi_plus);
  CHECK_THROWS_AS(secord::lower_bound(phi, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(secord::lower_bound(phi, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(secord::lower_bound(phi, 1, 1.0), std::invalid_argument);
  rains::RainsResult unconverged;
  CHECK_THROWS_AS(secord::upper_data(phi, unconverged), conic::SolverError);
  CHECK(std::string(secord::SecondOrderBound::caveat) == "O(log n) omitted");
}
