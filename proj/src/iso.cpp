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


#include "edist/iso.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edist::iso {

namespace {

mpz_class binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

mpz_class power(const mpz_class& base, int e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// dⁿ·x_{i,k}, an integer.
mpz_class x_scaled(int i, int k, int n, int d) {
  mpz_class acc = 0;
  for (int m = std::max(0, i + k - n); m <= std::min(i, k); ++m) {
    mpz_class term = binomial(k, m) * binomial(n - k, i - m) * power(d - 1, k - m) *
                     power(d + 1, n - k + m - i);
    if ((i - m) % 2 != 0) term = -term;
    acc += term;
  }
  return acc;
}

void check_indices(int i, int k, int n, int d) {
  if (d < 2) throw std::invalid_argument("iso: d must be at least 2");
  if (n < 1 || i < 0 || i > n || k < 0 || k > n) {
    throw std::invalid_argument("iso: indices must satisfy 0 <= i, k <= n, n >= 1");
  }
}

}  // namespace

void validate(const IsoParams& p) {
  if (p.d < 2) throw std::invalid_argument("iso: d must be at least 2");
  if (p.n < 1 || p.n > kMaxCopies) {
    throw std::invalid_argument("iso: n must lie in [1, " + std::to_string(kMaxCopies) + "]");
  }
  if (p.fidelity < 0 || p.fidelity > 1) throw std::invalid_argument("iso: F must lie in [0, 1]");
  if (p.epsilon <= 0 || p.epsilon >= 1) throw std::invalid_argument("iso: epsilon must lie in (0, 1)");
}

HermOp iso_state(int d, double fidelity) {
  if (d < 2) throw std::invalid_argument("iso_state: d must be at least 2");
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw std::invalid_argument("iso_state: F must lie in [0, 1]");
  const HermOp phi = qmat::max_entangled(d);
  return fidelity * phi + ((1.0 - fidelity) / (d * d - 1)) * (HermOp::identity(d, d) - phi);
}

Rational x_coeff(int i, int k, int n, int d) {
  check_indices(i, k, n, d);
  Rational r(x_scaled(i, k, n, d), power(d, n));
  r.canonicalize();
  return r;
}

mpz_class block_dimension(int k, int n, int d) {
  check_indices(0, k, n, d);
  return binomial(n, k) * power(d * (d + 1) / 2, k) * power(d * (d - 1) / 2, n - k);
}

HermOp symmetrized_projector(int i, int n, int d) {
  check_indices(i, 0, n, d);
  if (std::pow(static_cast<double>(d), 2 * n) > 16384.0) {
    throw std::invalid_argument("symmetrized_projector: d^(2n) above 2^14");
  }
  const HermOp phi = qmat::max_entangled(d);
  const HermOp perp = HermOp::identity(d, d) - phi;
  const int side = static_cast<int>(std::lround(std::pow(d, n)));
  HermOp sum = HermOp::zero(side, side);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != i) continue;
    HermOp term = (mask & 1u) ? phi : perp;
    for (int c = 1; c < n; ++c) term = qmat::tensor_product(term, (mask >> c) & 1u ? phi : perp);
    sum = sum + term;
  }
  return sum;
}

IsoLpResult iso_lp(const IsoParams& p) {
  validate(p);
  const int n = p.n;
  // Every row is scaled to integer coefficients: the fidelity row by qⁿ for
  // F = a/q, the block rows by dⁿ. Scaling rows leaves the LP unchanged.
  const mpz_class a = p.fidelity.get_num();
  const mpz_class q = p.fidelity.get_den();
  const mpz_class dn = power(p.d, n);

  conic::RationalLp lp;
  std::vector<int> m(n + 1);
  for (int i = 0; i <= n; ++i) m[i] = lp.add_variable(Rational(0), Rational(1));
  const int eta = lp.add_variable(Rational(0), std::nullopt);
  lp.set_objective(eta, 1);

  std::vector<std::pair<int, Rational>> fid;
  for (int i = 0; i <= n; ++i) {
    fid.push_back({m[i], Rational(binomial(n, i) * power(a, i) * power(q - a, n - i))});
  }
  lp.add_constraint(std::move(fid), conic::Sense::GreaterEqual, (1 - p.epsilon) * Rational(power(q, n)));

  std::vector<std::vector<mpz_class>> x(n + 1, std::vector<mpz_class>(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= n; ++k) x[i][k] = x_scaled(i, k, n, p.d);
  for (int k = 0; k <= n; ++k) {
    std::vector<std::pair<int, Rational>> row;
    for (int i = 0; i <= n; ++i) {
      if (x[i][k] != 0) row.push_back({m[i], Rational(x[i][k])});
    }
    auto upper = row;
    upper.push_back({eta, Rational(-dn)});
    lp.add_constraint(std::move(upper), conic::Sense::LessEqual, 0);
    row.push_back({eta, Rational(dn)});
    lp.add_constraint(std::move(row), conic::Sense::GreaterEqual, 0);
  }

  const conic::LpSolution sol = conic::solve_lp_exact(lp);
  // m_i = 1 with η large is always feasible and η ≥ 0 bounds the objective.
  if (sol.status != conic::LpStatus::Optimal || !lp.satisfied_by(sol.assignment)) {
    throw std::logic_error(std::string("iso_lp: exact LP returned ") + conic::to_string(sol.status));
  }

  IsoLpResult out;
  out.eta = sol.assignment[eta];
  out.pivots = sol.pivots;
  out.m.resize(n + 1);
  out.t.assign(n + 1, Rational(0));
  for (int i = 0; i <= n; ++i) out.m[i] = sol.assignment[m[i]];
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i <= n; ++i) out.t[k] += Rational(x[i][k]) * out.m[i];
    out.t[k] /= Rational(dn);
  }
  out.rate_bits = -std::log2(conic::to_double(out.eta));
  return out;
}

double iso_rains_closed(int d, double fidelity) {
  if (d < 2) throw std::invalid_argument("iso_rains_closed: d must be at least 2");
  if (!(fidelity > 1.0 / d && fidelity <= 1.0)) {
    throw std::invalid_argument("iso_rains_closed: requires 1/d < F <= 1");
  }
  const double tail = fidelity < 1.0 ? (1.0 - fidelity) * std::log2(d - 1.0) : 0.0;
  return std::log2(static_cast<double>(d)) - tail - qmat::binary_entropy(fidelity);
}

double iso_hashing(int d, double fidelity) { return qmat::coherent_info(iso_state(d, fidelity)); }

}  // namespace edist::iso
