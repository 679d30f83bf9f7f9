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


#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "edist/distill.hpp"
#include "edist/iso.hpp"

using namespace edist;
using conic::parse_rational;
using conic::Rational;

namespace {

iso::IsoParams params(int d, const char* f, int n, const char* eps) {
  return {d, parse_rational(f), n, parse_rational(eps)};
}

mpz_class binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

TEST_CASE("x_coeff single copy") {
  // Φ^{T_B} is the swap over d: +1/d on the symmetric space, −1/d on the
  // antisymmetric one.
  for (int d : {2, 3, 5}) {
    CHECK(iso::x_coeff(1, 1, 1, d) == Rational(1, d));
    CHECK(iso::x_coeff(1, 0, 1, d) == Rational(-1, d));
    CHECK(iso::x_coeff(0, 1, 1, d) == Rational(d - 1, d));
    CHECK(iso::x_coeff(0, 0, 1, d) == Rational(d + 1, d));
  }
  CHECK_THROWS_AS(iso::x_coeff(2, 0, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(iso::x_coeff(0, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("block dimensions and traces") {
  for (int d : {2, 3}) {
    for (int n : {1, 4, 9}) {
      mpz_class total = 0;
      for (int k = 0; k <= n; ++k) total += iso::block_dimension(k, n, d);
      mpz_class full;
      mpz_ui_pow_ui(full.get_mpz_t(), d * d, n);
      CHECK(total == full);
      // tr P_i^{T_B} = tr P_i = C(n,i)(d²−1)^{n−i}.
      for (int i = 0; i <= n; ++i) {
        Rational tr = 0;
        for (int k = 0; k <= n; ++k) tr += iso::x_coeff(i, k, n, d) * Rational(iso::block_dimension(k, n, d));
        mpz_class expect;
        mpz_ui_pow_ui(expect.get_mpz_t(), d * d - 1, n - i);
        CHECK(tr == Rational(binom(n, i) * expect));
      }
    }
  }
}

TEST_CASE("partial transpose spectrum of the symmetrized projectors") {
  struct Case {
    int n, d;
  };
  for (const Case c : {Case{1, 2}, Case{1, 3}, Case{2, 2}, Case{2, 3}, Case{3, 2}}) {
    for (int i = 0; i <= c.n; ++i) {
      const auto pt = qmat::partial_transpose(iso::symmetrized_projector(i, c.n, c.d));
      const auto eig = qmat::herm_eig(pt).eigenvalues;
      std::vector<double> expect;
      for (int k = 0; k <= c.n; ++k) {
        const int mult = static_cast<int>(iso::block_dimension(k, c.n, c.d).get_si());
        expect.insert(expect.end(), mult, conic::to_double(iso::x_coeff(i, k, c.n, c.d)));
      }
      std::sort(expect.begin(), expect.end());
      REQUIRE(static_cast<int>(expect.size()) == eig.size());
      double err = 0.0;
      for (int r = 0; r < eig.size(); ++r) err = std::max(err, std::fabs(eig(r) - expect[r]));
      CHECK(err < 1e-10);
    }
  }
  CHECK_THROWS_AS(iso::symmetrized_projector(0, 4, 4), std::invalid_argument);
}

TEST_CASE("partial transpose spectrum of a random combination") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto [n, d] : {std::pair{2, 3}, std::pair{3, 2}}) {
    std::vector<double> m(n + 1);
    for (double& v : m) v = u(rng);
    const int side = static_cast<int>(std::lround(std::pow(d, n)));
    auto sum = qmat::HermOp::zero(side, side);
    for (int i = 0; i <= n; ++i) sum = sum + m[i] * iso::symmetrized_projector(i, n, d);
    const auto eig = qmat::herm_eig(qmat::partial_transpose(sum)).eigenvalues;
    std::vector<double> expect;
    for (int k = 0; k <= n; ++k) {
      double t = 0.0;
      for (int i = 0; i <= n; ++i) t += conic::to_double(iso::x_coeff(i, k, n, d)) * m[i];
      expect.insert(expect.end(), iso::block_dimension(k, n, d).get_si(), t);
    }
    std::sort(expect.begin(), expect.end());
    double err = 0.0;
    for (int r = 0; r < eig.size(); ++r) err = std::max(err, std::fabs(eig(r) - expect[r]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("iso_state") {
  const auto rho = iso::iso_state(3, 0.9);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
  const auto phi = qmat::max_entangled(3);
  CHECK((rho.matrix() * phi.matrix()).trace().real() == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(qmat::min_eigenvalue(rho) == doctest::Approx(0.1 / 8).epsilon(1e-12));
  // F = 1/d² is the maximally mixed state.
  const auto mixed = iso::iso_state(2, 0.25);
  CHECK((mixed.matrix() - qmat::HermOp::identity(2, 2).matrix() / 4.0).norm() < 1e-14);
  CHECK_THROWS_AS(iso::iso_state(3, 1.1), std::invalid_argument);
}

TEST_CASE("iso_lp single copy is exact") {
  const auto r = iso::iso_lp(params(3, "9/10", 1, "1/1000"));
  CHECK(r.eta == Rational(149, 150));
  CHECK(r.rate_bits == doctest::Approx(-std::log2(149.0 / 150.0)).epsilon(1e-14));
}

TEST_CASE("iso_lp perfect fidelity gives a full ebit per copy") {
  for (int n : {1, 3, 6}) {
    const auto r = iso::iso_lp(params(2, "1", n, "1/1000000000"));
    CHECK(r.rate_bits / n == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("iso_lp solutions satisfy every row exactly") {
  for (int n : {2, 7, 15}) {
    const auto p = params(3, "9/10", n, "1/1000");
    const auto r = iso::iso_lp(p);
    Rational fid = 0;
    for (int i = 0; i <= n; ++i) {
      CHECK(r.m[i] >= 0);
      CHECK(r.m[i] <= 1);
      Rational w = Rational(binom(n, i));
      for (int c = 0; c < i; ++c) w *= p.fidelity;
      for (int c = i; c < n; ++c) w *= 1 - p.fidelity;
      fid += w * r.m[i];
    }
    CHECK(fid >= 1 - p.epsilon);
    for (int k = 0; k <= n; ++k) {
      Rational t = 0;
      for (int i = 0; i <= n; ++i) t += iso::x_coeff(i, k, n, p.d) * r.m[i];
      CHECK(t == r.t[k]);
      CHECK(abs(t) <= r.eta);
    }
  }
}

TEST_CASE("iso_lp per-copy rates stay below the Rains bound") {
  const double rains = iso::iso_rains_closed(3, 0.9);
  // Small n fluctuate; the trend is upward.
  double early = 0.0;
  double last = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const double rate = iso::iso_lp(params(3, "9/10", n, "1/1000")).rate_bits / n;
    CHECK(rate < rains);
    if (n <= 6) early = std::max(early, rate);
    last = rate;
  }
  CHECK(last > early);
}

TEST_CASE("iso_lp agrees with the n-copy SDP") {
  struct Case {
    int n, d;
    const char* f;
    const char* eps;
  };
  for (const Case c : {Case{1, 2, "4/5", "1/100"}, Case{1, 3, "9/10", "1/1000"}, Case{2, 2, "4/5", "1/100"},
                       Case{3, 2, "17/20", "1/20"}}) {
    const auto lp = iso::iso_lp(params(c.d, c.f, c.n, c.eps));
    const auto rho = qmat::tensor_power(iso::iso_state(c.d, conic::to_double(parse_rational(c.f))), c.n);
    const auto sdp = distill::one_shot_ppt_ed(rho, conic::to_double(parse_rational(c.eps)));
    CHECK(std::fabs(lp.rate_bits - sdp.rate_bits) < 1e-5);
  }
}

TEST_CASE("iso_lp validation") {
  CHECK_THROWS_AS(iso::iso_lp(params(3, "9/10", 0, "1/1000")), std::invalid_argument);
  CHECK_THROWS_AS(iso::iso_lp(params(3, "9/10", iso::kMaxCopies + 1, "1/1000")), std::invalid_argument);
  CHECK_THROWS_AS(iso::iso_lp(params(3, "11/10", 2, "1/1000")), std::invalid_argument);
  CHECK_THROWS_AS(iso::iso_lp(params(3, "9/10", 2, "0")), std::invalid_argument);
  CHECK_THROWS_AS(iso::iso_lp(params(1, "9/10", 2, "1/10")), std::invalid_argument);
}

TEST_CASE("closed forms") {
  CHECK(iso::iso_rains_closed(3, 0.9) == doctest::Approx(1.0160).epsilon(5e-4));
  CHECK(iso::iso_hashing(3, 0.9) == doctest::Approx(0.8160).epsilon(5e-4));
  CHECK(iso::iso_rains_closed(2, 1.0) == doctest::Approx(1.0));
  // Hashing is negative at the maximally mixed point.
  CHECK(iso::iso_hashing(3, 1.0 / 9) < 0.0);
  CHECK(iso::iso_hashing(3, 0.9) < iso::iso_rains_closed(3, 0.9));
  CHECK_THROWS_AS(iso::iso_rains_closed(3, 0.3), std::invalid_argument);
}
