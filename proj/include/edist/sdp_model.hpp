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

#include <map>
#include <string>
#include <utility>

#include "edist/qmat.hpp"
#include "edist/sdp.hpp"

/// Helpers for writing Hermitian-matrix SDPs on top of SdpProblem.
///
/// A Hermitian (or real symmetric) matrix variable is parameterized by real
/// scalars: one per diagonal entry, one real part per upper off-diagonal
/// entry and, in the complex case, one imaginary part per upper off-diagonal
/// entry. Affine expressions in those scalars are collected in HermExpr and
/// emitted as LMI blocks, realified to [[Re, -Im], [Im, Re]] when complex.
namespace edist::conic {

using qmat::CMatrix;
using qmat::Complex;

class HermExpr {
 public:
  explicit HermExpr(int side = 0) : side_(side) {}

  int side() const { return side_; }

  /// Adds s·M for a constant Hermitian M.
  HermExpr& add_constant(const CMatrix& m, double s = 1.0);
  /// Adds s·𝟙.
  HermExpr& add_identity(double s = 1.0);
  /// Adds coeff·y_var to entry (row, col) and its conjugate to (col, row).
  /// Diagonal entries require a real coefficient.
  HermExpr& add_term(int row, int col, int var, Complex coeff);

  HermExpr& operator+=(const HermExpr& other);
  HermExpr& operator-=(const HermExpr& other);
  HermExpr operator+(const HermExpr& other) const { HermExpr r = *this; r += other; return r; }
  HermExpr operator-(const HermExpr& other) const { HermExpr r = *this; r -= other; return r; }
  HermExpr operator-() const { return scaled(-1.0); }
  HermExpr scaled(double s) const;

  /// Expression for the partial transpose on B, for a dim_a × dim_b split.
  HermExpr partial_transpose(int dim_a, int dim_b) const;

  /// tr(expr): constant part and linear form.
  std::pair<double, LinearForm> trace() const;

  /// True when every constant and coefficient is real.
  bool is_real() const;

  /// Evaluates the expression at y.
  CMatrix evaluate(const Eigen::VectorXd& y) const;

  struct Cell {
    Complex constant{0.0, 0.0};
    std::map<int, Complex> coeffs;
  };
  /// Upper-triangle cells keyed by (row, col), row ≤ col.
  const std::map<std::pair<int, int>, Cell>& cells() const { return cells_; }

 private:
  Cell& cell(int row, int col);
  void add_cell(int row, int col, const Cell& c, double s, bool conj);

  int side_;
  std::map<std::pair<int, int>, Cell> cells_;
};

/// A Hermitian matrix variable of a given side.
class HermVar {
 public:
  /// Allocates the scalar variables in `problem`. `complex` selects a full
  /// Hermitian parameterization; otherwise the matrix is real symmetric.
  static HermVar create(SdpProblem& problem, int side, bool complex);

  int side() const { return side_; }
  bool is_complex() const { return complex_; }
  int num_scalars() const { return count_; }

  HermExpr expr() const;
  /// tr(ρ M) as a linear form in the scalar variables.
  LinearForm trace_with(const CMatrix& rho) const;
  LinearForm trace() const;
  CMatrix value(const Eigen::VectorXd& y) const;

 private:
  int re_index(int p, int q) const;  // p ≤ q
  int im_index(int p, int q) const;  // p < q

  int side_ = 0;
  bool complex_ = false;
  int first_ = 0;
  int count_ = 0;
};

/// Emits expr ⪰ 0 as an LMI block named `name`. Real expressions use a
/// side-n block; complex ones a realified side-2n block.
int add_psd(SdpProblem& problem, const std::string& name, const HermExpr& expr);

/// s·form.
LinearForm scaled_form(const LinearForm& form, double s);
/// Terms of a followed by terms of b (duplicates are summed by the solver).
LinearForm concat(LinearForm a, const LinearForm& b);

}  // namespace edist::conic
