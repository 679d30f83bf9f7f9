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

#include "edist/sdp_model.hpp"

#include <cmath>
#include <stdexcept>

namespace edist::conic {

namespace {
constexpr double kDiagImagTol = 1e-14;
}

HermExpr::Cell& HermExpr::cell(int row, int col) {
  if (row < 0 || col < 0 || row >= side_ || col >= side_) {
    throw std::out_of_range("HermExpr: entry outside matrix");
  }
  return cells_[{row, col}];
}

void HermExpr::add_cell(int row, int col, const Cell& c, double s, bool conj) {
  Cell& dst = cell(row, col);
  dst.constant += s * (conj ? std::conj(c.constant) : c.constant);
  for (const auto& [var, coeff] : c.coeffs) {
    dst.coeffs[var] += s * (conj ? std::conj(coeff) : coeff);
  }
}

HermExpr& HermExpr::add_constant(const CMatrix& m, double s) {
  if (m.rows() != side_ || m.cols() != side_) {
    throw std::invalid_argument("HermExpr::add_constant: shape mismatch");
  }
  for (int r = 0; r < side_; ++r) {
    for (int c = r; c < side_; ++c) {
      const Complex v = s * m(r, c);
      if (v != Complex(0.0, 0.0)) cell(r, c).constant += (r == c ? Complex(v.real(), 0.0) : v);
    }
  }
  return *this;
}

HermExpr& HermExpr::add_identity(double s) {
  for (int r = 0; r < side_; ++r) cell(r, r).constant += s;
  return *this;
}

HermExpr& HermExpr::add_term(int row, int col, int var, Complex coeff) {
  if (row == col && std::abs(coeff.imag()) > kDiagImagTol) {
    throw std::invalid_argument("HermExpr::add_term: diagonal coefficient must be real");
  }
  if (row <= col) {
    cell(row, col).coeffs[var] += coeff;
  } else {
    cell(col, row).coeffs[var] += std::conj(coeff);
  }
  return *this;
}

HermExpr& HermExpr::operator+=(const HermExpr& other) {
  if (other.side_ != side_) throw std::invalid_argument("HermExpr: side mismatch");
  for (const auto& [rc, c] : other.cells_) add_cell(rc.first, rc.second, c, 1.0, false);
  return *this;
}

HermExpr& HermExpr::operator-=(const HermExpr& other) {
  if (other.side_ != side_) throw std::invalid_argument("HermExpr: side mismatch");
  for (const auto& [rc, c] : other.cells_) add_cell(rc.first, rc.second, c, -1.0, false);
  return *this;
}

HermExpr HermExpr::scaled(double s) const {
  HermExpr out(side_);
  for (const auto& [rc, c] : cells_) out.add_cell(rc.first, rc.second, c, s, false);
  return out;
}

HermExpr HermExpr::partial_transpose(int dim_a, int dim_b) const {
  if (dim_a * dim_b != side_) throw std::invalid_argument("HermExpr::partial_transpose: bad split");
  HermExpr out(side_);
  for (const auto& [rc, c] : cells_) {
    // Entry (r, c) = ⟨i j|·|k l⟩ moves to ⟨i l|·|k j⟩; its conjugate partner
    // (c, r) moves to the transposed position, so only one of the pair is
    // needed.
    const int i = rc.first / dim_b, j = rc.first % dim_b;
    const int k = rc.second / dim_b, l = rc.second % dim_b;
    const int nr = i * dim_b + l;
    const int nc = k * dim_b + j;
    if (nr <= nc) {
      out.add_cell(nr, nc, c, 1.0, false);
    } else {
      out.add_cell(nc, nr, c, 1.0, true);
    }
  }
  return out;
}

std::pair<double, LinearForm> HermExpr::trace() const {
  double constant = 0.0;
  std::map<int, double> acc;
  for (const auto& [rc, c] : cells_) {
    if (rc.first != rc.second) continue;
    constant += c.constant.real();
    for (const auto& [var, coeff] : c.coeffs) acc[var] += coeff.real();
  }
  LinearForm form;
  for (const auto& [var, v] : acc) {
    if (v != 0.0) form.push_back({var, v});
  }
  return {constant, form};
}

bool HermExpr::is_real() const {
  for (const auto& [rc, c] : cells_) {
    if (c.constant.imag() != 0.0) return false;
    for (const auto& [var, coeff] : c.coeffs) {
      if (coeff.imag() != 0.0) return false;
    }
  }
  return true;
}

CMatrix HermExpr::evaluate(const Eigen::VectorXd& y) const {
  CMatrix out = CMatrix::Zero(side_, side_);
  for (const auto& [rc, c] : cells_) {
    Complex v = c.constant;
    for (const auto& [var, coeff] : c.coeffs) v += coeff * y(var);
    out(rc.first, rc.second) += v;
    if (rc.first != rc.second) out(rc.second, rc.first) += std::conj(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

HermVar HermVar::create(SdpProblem& problem, int side, bool complex) {
  if (side < 1) throw std::invalid_argument("HermVar: side must be >= 1");
  HermVar v;
  v.side_ = side;
  v.complex_ = complex;
  const int n_re = side * (side + 1) / 2;
  const int n_im = complex ? side * (side - 1) / 2 : 0;
  v.count_ = n_re + n_im;
  v.first_ = problem.add_variables(v.count_);
  return v;
}

int HermVar::re_index(int p, int q) const {
  // Row-major packed upper triangle.
  return first_ + p * side_ - p * (p - 1) / 2 + (q - p);
}

int HermVar::im_index(int p, int q) const {
  const int n_re = side_ * (side_ + 1) / 2;
  return first_ + n_re + p * (side_ - 1) - p * (p - 1) / 2 + (q - p - 1);
}

HermExpr HermVar::expr() const {
  HermExpr e(side_);
  for (int p = 0; p < side_; ++p) {
    for (int q = p; q < side_; ++q) {
      e.add_term(p, q, re_index(p, q), 1.0);
      if (complex_ && q > p) e.add_term(p, q, im_index(p, q), Complex(0.0, 1.0));
    }
  }
  return e;
}

LinearForm HermVar::trace_with(const CMatrix& rho) const {
  if (rho.rows() != side_ || rho.cols() != side_) {
    throw std::invalid_argument("HermVar::trace_with: shape mismatch");
  }
  // tr(ρM) = Σ_p ρ_pp M_pp + Σ_{p<q} 2 Re(ρ_qp M_pq).
  LinearForm form;
  for (int p = 0; p < side_; ++p) {
    for (int q = p; q < side_; ++q) {
      if (p == q) {
        const double v = rho(p, p).real();
        if (v != 0.0) form.push_back({re_index(p, p), v});
        continue;
      }
      const Complex r = rho(q, p);
      if (r.real() != 0.0) form.push_back({re_index(p, q), 2.0 * r.real()});
      if (complex_ && r.imag() != 0.0) form.push_back({im_index(p, q), -2.0 * r.imag()});
    }
  }
  return form;
}

LinearForm HermVar::trace() const {
  LinearForm form;
  for (int p = 0; p < side_; ++p) form.push_back({re_index(p, p), 1.0});
  return form;
}

CMatrix HermVar::value(const Eigen::VectorXd& y) const { return expr().evaluate(y); }

// ---------------------------------------------------------------------------

int add_psd(SdpProblem& problem, const std::string& name, const HermExpr& expr) {
  const int n = expr.side();
  if (expr.is_real()) {
    const int b = problem.add_block(name, n);
    for (const auto& [rc, c] : expr.cells()) {
      problem.add_constant(b, rc.first, rc.second, c.constant.real());
      for (const auto& [var, coeff] : c.coeffs) {
        problem.add_coefficient(b, var, rc.first, rc.second, coeff.real());
      }
    }
    return b;
  }
  // [[A, -B], [B, A]] for the Hermitian matrix A + iB.
  const int b = problem.add_block(name, 2 * n);
  auto emit = [&](int r, int c, Complex z, auto&& put) {
    if (z.real() != 0.0) {
      put(r, c, z.real());
      put(r + n, c + n, z.real());
    }
    if (r != c && z.imag() != 0.0) {
      put(r + n, c, z.imag());
      put(r, c + n, -z.imag());
    }
  };
  for (const auto& [rc, c] : expr.cells()) {
    emit(rc.first, rc.second, c.constant,
         [&](int r, int col, double v) { problem.add_constant(b, r, col, v); });
    for (const auto& [var, coeff] : c.coeffs) {
      emit(rc.first, rc.second, coeff,
           [&](int r, int col, double v) { problem.add_coefficient(b, var, r, col, v); });
    }
  }
  return b;
}

LinearForm scaled_form(const LinearForm& form, double s) {
  LinearForm out = form;
  for (auto& t : out) t.coeff *= s;
  return out;
}

LinearForm concat(LinearForm a, const LinearForm& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace edist::conic
