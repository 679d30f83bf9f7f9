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

#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

/// Dense Hermitian operators on a bipartite space A⊗B and the entropic
/// functionals built on them.
///
/// The computational basis is ordered lexicographically as |i_A j_B⟩, i.e.
/// row index = i·dim_b + j.
namespace edist::qmat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LogBase { Two, E };

/// Thrown when a spectral routine fails to converge or receives ill-formed input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hermitian operator on C^{dim_a} ⊗ C^{dim_b}.
class HermOp {
 public:
  HermOp() = default;

  /// Checks shape and Hermiticity (max |M - M†| ≤ tol), then stores the
  /// exactly symmetrized matrix (M + M†)/2.
  HermOp(int dim_a, int dim_b, CMatrix entries,
         double tol = kHermitianTolerance);

  static HermOp identity(int dim_a, int dim_b);
  static HermOp zero(int dim_a, int dim_b);
  /// Real diagonal operator.
  static HermOp diagonal(int dim_a, int dim_b, const RVector& diag);
  /// |v⟩⟨v| (no normalization).
  static HermOp projector(int dim_a, int dim_b, const CVector& v);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int size() const { return dim_a_ * dim_b_; }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  double trace() const { return m_.trace().real(); }
  /// True when every imaginary part is at most tol in magnitude.
  bool is_real(double tol = 1e-14) const;

  HermOp operator+(const HermOp& other) const;
  HermOp operator-(const HermOp& other) const;
  HermOp operator*(double s) const;
  friend HermOp operator*(double s, const HermOp& op) { return op * s; }

 private:
  int dim_a_ = 1;
  int dim_b_ = 1;
  CMatrix m_ = CMatrix::Identity(1, 1);
};

struct EigenDecomp {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns
};

/// Φ(d) = (1/d) Σ_ij |ii⟩⟨jj|.
HermOp max_entangled(int d);

/// ⟨i j|out|k l⟩ = ⟨i l|M|k j⟩.
HermOp partial_transpose(const HermOp& m);

/// tr_A; result lives on B (dim_a = 1).
HermOp partial_trace_a(const HermOp& m);
/// tr_B; result lives on A (dim_b = 1).
HermOp partial_trace_b(const HermOp& m);

/// ρ ⊗ σ regrouped to the (A A' : B B') bipartition.
HermOp tensor_product(const HermOp& rho, const HermOp& sigma);
/// n-fold tensor power, regrouped to (A^n : B^n).
HermOp tensor_power(const HermOp& rho, int n);
/// 𝟙_A ⊗ ρ_B for an operator ρ_B given on B alone.
HermOp identity_tensor(int dim_a, const HermOp& rho_b);

EigenDecomp herm_eig(const CMatrix& m);
EigenDecomp herm_eig(const HermOp& m);

double trace_norm(const HermOp& m);
double operator_norm(const HermOp& m);
double min_eigenvalue(const HermOp& m);

/// Applies f to the spectrum: U f(Λ) U†.
template <class F>
CMatrix spectral_apply(const EigenDecomp& e, F&& f) {
  RVector fl(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(e.eigenvalues(i));
  return e.eigenvectors * fl.asDiagonal() * e.eigenvectors.adjoint();
}

/// Von Neumann entropy S(ρ) = -tr ρ log ρ.
double entropy(const HermOp& rho, LogBase base = LogBase::Two);

/// D(ρ‖σ) = tr ρ(log ρ − log σ); +∞ when supp ρ ⊄ supp σ.
double relative_entropy(const HermOp& rho, const HermOp& sigma,
                        LogBase base = LogBase::Two);

/// V(ρ‖σ) = tr ρ(log ρ − log σ)² − D(ρ‖σ)². Throws std::domain_error when
/// supp ρ ⊄ supp σ.
double relative_entropy_variance(const HermOp& rho, const HermOp& sigma,
                                 LogBase base = LogBase::Two);

/// I(A⟩B) = D(ρ_AB ‖ 𝟙_A ⊗ ρ_B).
double coherent_info(const HermOp& rho, LogBase base = LogBase::Two);
/// V(A⟩B) = V(ρ_AB ‖ 𝟙_A ⊗ ρ_B).
double coherent_info_variance(const HermOp& rho, LogBase base = LogBase::Two);

double binary_entropy(double p, LogBase base = LogBase::Two);

double normal_cdf(double x);
/// Φ⁻¹(ε) for ε in (0, 1); throws std::domain_error outside.
double inv_normal_cdf(double eps);

/// M ⪰ −tol and ‖M^{T_B}‖₁ ≤ 1 + tol.
bool is_ppt_prime(const HermOp& m, double tol = 1e-9);

/// Validates a density operator: PSD within −1e−9 and unit trace within 1e−9.
void require_state(const HermOp& rho, const char* what);

}  // namespace edist::qmat
