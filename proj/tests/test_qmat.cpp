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
#include "edist/qmat.hpp"
#include "test_util.hpp"

using namespace edist::qmat;
using edist::testing::random_hermitian;
using edist::testing::random_state;

namespace {

// Φ(ε) by bisection on an independent erfc series (continued fraction in the
// tail, Taylor series of erf near the origin).
double oracle_cdf(double x) {
  const double z = std::abs(x) / std::sqrt(2.0);
  double erfc_z;
  if (z < 3.0) {
    // erf(z) = 2/√π Σ (-1)^n z^{2n+1} / (n! (2n+1))
    long double sum = 0.0L, term = z;
    for (int n = 0; n < 200; ++n) {
      sum += term / (2 * n + 1);
      term *= -static_cast<long double>(z) * z / (n + 1);
    }
    erfc_z = static_cast<double>(1.0L - 2.0L / std::sqrt(static_cast<long double>(M_PI)) * sum);
  } else {
    // Lentz continued fraction for erfc.
    long double f = 0.0L;
    for (int k = 200; k >= 1; --k) f = (k / 2.0L) / (z + f);
    erfc_z = static_cast<double>(std::exp(-static_cast<long double>(z) * z) /
                                 std::sqrt(static_cast<long double>(M_PI)) / (z + f));
  }
  return x < 0 ? 0.5 * erfc_z : 1.0 - 0.5 * erfc_z;
}

double oracle_inv_cdf(double eps) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle_cdf(mid) < eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Entry-wise partial transpose written independently of the library.
CMatrix brute_partial_transpose(const CMatrix& m, int da, int db) {
  CMatrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < db; ++l) out(i * db + j, k * db + l) = m(i * db + l, k * db + j);
  return out;
}

HermOp bell_mixture(double p) {
  CVector v1 = CVector::Zero(4), v2 = CVector::Zero(4);
  v1(0) = v1(3) = 1.0 / std::sqrt(2.0);
  v2(0) = 1.0 / std::sqrt(2.0);
  v2(3) = -1.0 / std::sqrt(2.0);
  return p * HermOp::projector(2, 2, v1) + (1.0 - p) * HermOp::projector(2, 2, v2);
}

}  // namespace

TEST_CASE("max_entangled") {
  CHECK(max_entangled(1).matrix()(0, 0).real() == doctest::Approx(1.0));
  const HermOp phi = max_entangled(2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
      CHECK(std::abs(phi(r, c) - Complex(corner ? 0.5 : 0.0, 0.0)) < 1e-15);
    }
  const auto e = herm_eig(max_entangled(3));
  CHECK(e.eigenvalues(8) == doctest::Approx(1.0));
  CHECK(e.eigenvalues.head(8).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("HermOp rejects non-Hermitian input") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermOp(1, 2, m), std::invalid_argument);
  CHECK_THROWS_AS(HermOp(2, 2, CMatrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("partial_transpose") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const HermOp m = random_hermitian(rng, 2, 3);
    const HermOp t = partial_transpose(m);
    CHECK((partial_transpose(t).matrix() - m.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((t.matrix() - brute_partial_transpose(m.matrix(), 2, 3)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(t.trace() == doctest::Approx(m.trace()));
    CHECK(t.matrix().norm() == doctest::Approx(m.matrix().norm()));
  }
  const auto e = herm_eig(partial_transpose(max_entangled(2)));
  CHECK(e.eigenvalues(0) == doctest::Approx(-0.5));
  for (int i = 1; i < 4; ++i) CHECK(e.eigenvalues(i) == doctest::Approx(0.5));

  const HermOp ra = random_state(rng, 2, 1), rb = random_state(rng, 3, 1);
  const HermOp prod = tensor_product(ra, rb);
  const auto e1 = herm_eig(prod), e2 = herm_eig(partial_transpose(prod));
  CHECK((e1.eigenvalues - e2.eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("herm_eig") {
  CHECK((herm_eig(HermOp::identity(2, 3)).eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-14);
  const auto d = herm_eig(HermOp::diagonal(3, 1, Eigen::Vector3d(3, 1, 2)));
  CHECK(d.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(d.eigenvalues(2) == doctest::Approx(3.0));
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 4, 9}) {
    const HermOp h = random_hermitian(rng, n, 1);
    const auto e = herm_eig(h);
    const CMatrix rec = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
    const double scale = 1.0 + h.matrix().cwiseAbs().rowwise().sum().maxCoeff();
    CHECK((rec - h.matrix()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    CHECK((e.eigenvectors.adjoint() * e.eigenvectors - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int i = 1; i < n; ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
  }
}

TEST_CASE("norms") {
  std::mt19937_64 rng(3);
  CHECK(trace_norm(random_state(rng, 2, 2)) == doctest::Approx(1.0));
  CHECK(trace_norm(partial_transpose(max_entangled(2))) == doctest::Approx(2.0));
  CHECK(trace_norm(HermOp::zero(2, 2)) == 0.0);
  CHECK(operator_norm(HermOp::identity(3, 1)) == doctest::Approx(1.0));
  CHECK(operator_norm(max_entangled(3)) == doctest::Approx(1.0));
  CHECK(operator_norm(HermOp::diagonal(2, 1, Eigen::Vector2d(-5, 2))) == doctest::Approx(5.0));
  for (int trial = 0; trial < 10; ++trial) {
    const HermOp m = random_hermitian(rng, 3, 2);
    CHECK(trace_norm(m) >= operator_norm(m));
    // Top eigenvector attains the dual characterization.
    const auto e = herm_eig(m);
    const int top = std::abs(e.eigenvalues(0)) > std::abs(e.eigenvalues(5)) ? 0 : 5;
    const CVector v = e.eigenvectors.col(top);
    const double value = std::abs((v.adjoint() * m.matrix() * v)(0, 0).real());
    CHECK(std::abs(value - operator_norm(m)) < 1e-6);
  }
  CVector v(3);
  v << 1.0, Complex(0, 2), -1.0;
  const HermOp rank1 = -2.5 * HermOp::projector(3, 1, v / v.norm());
  CHECK(trace_norm(rank1) == doctest::Approx(2.5));
  CHECK(operator_norm(rank1) == doctest::Approx(2.5));
}

TEST_CASE("relative_entropy") {
  std::mt19937_64 rng(8);
  const HermOp rho = random_state(rng, 2, 2);
  CHECK(std::abs(relative_entropy(rho, rho)) < 1e-10);
  CHECK(relative_entropy(max_entangled(2), HermOp::identity(2, 2) * 0.25) == doctest::Approx(2.0));
  const HermOp k0 = HermOp::diagonal(2, 1, Eigen::Vector2d(1, 0));
  const HermOp k1 = HermOp::diagonal(2, 1, Eigen::Vector2d(0, 1));
  CHECK(std::isinf(relative_entropy(k0, k1)));
  const HermOp bad = HermOp::diagonal(2, 1, Eigen::Vector2d(1.5, -0.5));
  CHECK_THROWS(relative_entropy(k0, bad));
  for (int trial = 0; trial < 20; ++trial) {
    const HermOp a = random_state(rng, 3, 1), b = random_state(rng, 3, 1);
    CHECK(relative_entropy(a, b) > 0.0);
    CHECK(relative_entropy_variance(a, b) >= -1e-9);
  }
  CHECK(relative_entropy(max_entangled(2), HermOp::identity(2, 2) * 0.25, LogBase::E) ==
        doctest::Approx(std::log(4.0)));
}

TEST_CASE("relative_entropy_variance on pure states") {
  CHECK(std::abs(relative_entropy_variance(bell_mixture(0.3), bell_mixture(0.3))) < 1e-10);
  const double p0 = 0.9, p1 = 0.1;
  CVector psi = CVector::Zero(4);
  psi(0) = std::sqrt(p0);
  psi(3) = std::sqrt(p1);
  const HermOp rho = HermOp::projector(2, 2, psi);
  RVector diag(4);
  diag << p0, 0, 0, p1;
  const HermOp sigma = HermOp::diagonal(2, 2, diag);
  const double s = -(p0 * std::log2(p0) + p1 * std::log2(p1));
  const double expected = p0 * std::pow(std::log2(p0), 2) + p1 * std::pow(std::log2(p1), 2) - s * s;
  CHECK(relative_entropy_variance(rho, sigma) == doctest::Approx(expected).epsilon(1e-9));
  RVector flat(4);
  flat << 0.5, 0, 0, 0.5;
  CHECK(std::abs(relative_entropy_variance(max_entangled(2), HermOp::diagonal(2, 2, flat))) < 1e-12);
}

TEST_CASE("coherent information") {
  std::mt19937_64 rng(21);
  CVector psi(9);
  for (int i = 0; i < 9; ++i) psi(i) = Complex(std::normal_distribution<>()(rng), std::normal_distribution<>()(rng));
  const HermOp pure = HermOp::projector(3, 3, psi / psi.norm());
  CHECK(coherent_info(pure) == doctest::Approx(entropy(partial_trace_b(pure))).epsilon(1e-9));

  for (double p : {0.1, 0.3}) {
    CHECK(coherent_info(bell_mixture(p)) == doctest::Approx(1.0 - binary_entropy(p)).epsilon(1e-9));
  }
  // Isotropic d=3, F=0.9 from its spectrum.
  const double f = 0.9, d = 3.0;
  const double expected = std::log2(d) + f * std::log2(f) + (1 - f) * std::log2((1 - f) / (d * d - 1));
  CHECK(expected == doctest::Approx(0.8160).epsilon(1e-4));
  const HermOp phi = max_entangled(3);
  const HermOp iso = f * phi + ((1 - f) / 8.0) * (HermOp::identity(3, 3) - phi);
  CHECK(coherent_info(iso) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(coherent_info(HermOp::identity(2, 2) * 0.25) == doctest::Approx(-1.0));
  CHECK(coherent_info_variance(max_entangled(2)) == doctest::Approx(0.0));
}

TEST_CASE("binary_entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.9) == doctest::Approx(0.46900).epsilon(1e-5));
}

TEST_CASE("inv_normal_cdf") {
  CHECK(inv_normal_cdf(0.5) == 0.0);
  CHECK(inv_normal_cdf(0.001) == doctest::Approx(-3.0902).epsilon(1e-4));
  CHECK(std::abs(inv_normal_cdf(0.001) - oracle_inv_cdf(0.001)) < 1e-9);
  CHECK(inv_normal_cdf(0.2) == doctest::Approx(-inv_normal_cdf(0.8)));
  CHECK_THROWS_AS(inv_normal_cdf(0.0), std::domain_error);
  CHECK_THROWS_AS(inv_normal_cdf(1.0), std::domain_error);
  for (double eps : {1e-12, 1e-6, 0.01, 0.3, 0.77, 0.999999}) {
    CHECK(std::abs(inv_normal_cdf(eps) - oracle_inv_cdf(eps)) < 1e-8 * (1 + std::abs(oracle_inv_cdf(eps))));
  }
}

TEST_CASE("is_ppt_prime") {
  CHECK(is_ppt_prime(HermOp::identity(3, 3) * (1.0 / 9.0)));
  CHECK_FALSE(is_ppt_prime(max_entangled(2)));
  CVector v1 = CVector::Zero(4), v2 = CVector::Zero(4);
  v1(0) = v1(3) = 1.0 / std::sqrt(2.0);
  v2(0) = 1.0 / std::sqrt(2.0);
  v2(3) = -1.0 / std::sqrt(2.0);
  CHECK(is_ppt_prime(0.5 * HermOp::projector(2, 2, v1) + 0.5 * HermOp::projector(2, 2, v2)));
}

TEST_CASE("tensor_product regroups to the AA':BB' cut") {
  std::mt19937_64 rng(4);
  const HermOp a = random_state(rng, 2, 2), b = random_state(rng, 2, 3);
  const HermOp ab = tensor_product(a, b);
  CHECK(ab.dim_a() == 4);
  CHECK(ab.dim_b() == 6);
  CHECK(ab.trace() == doctest::Approx(1.0));
  // Partial transpose on BB' of a product is the product of partial transposes.
  const HermOp lhs = partial_transpose(ab);
  const HermOp rhs = tensor_product(partial_transpose(a), partial_transpose(b));
  CHECK((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(trace_norm(partial_transpose(tensor_product(max_entangled(2), max_entangled(2)))) ==
        doctest::Approx(4.0));
}
