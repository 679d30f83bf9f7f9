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

#include "edist/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace edist::qmat {

namespace {

constexpr double kSupportCutoff = 1e-12;  // relative to the spectral radius
constexpr double kPsdTolerance = 1e-9;

double log_scale(LogBase base) {
  return base == LogBase::Two ? 1.0 / std::numbers::ln2 : 1.0;
}

double spectral_radius(const RVector& lambda) {
  return lambda.size() == 0 ? 0.0 : lambda.cwiseAbs().maxCoeff();
}

void check_same_shape(const HermOp& a, const HermOp& b) {
  if (a.dim_a() != b.dim_a() || a.dim_b() != b.dim_b()) {
    throw std::invalid_argument("operators live on different bipartite spaces");
  }
}

// Natural-log relative entropy pieces shared by D and V.
struct LogPair {
  EigenDecomp rho;
  EigenDecomp sigma;
  bool support_ok = true;
};

LogPair decompose_pair(const HermOp& rho, const HermOp& sigma) {
  check_same_shape(rho, sigma);
  require_state(rho, "relative entropy: rho");
  LogPair out{herm_eig(rho), herm_eig(sigma)};
  const double sig_radius = spectral_radius(out.sigma.eigenvalues);
  if (out.sigma.eigenvalues(0) < -kPsdTolerance * std::max(1.0, sig_radius)) {
    throw std::domain_error("relative entropy: sigma is not positive semidefinite");
  }
  const double cut = kSupportCutoff * sig_radius;
  double kernel_mass = 0.0;
  for (Eigen::Index k = 0; k < out.sigma.eigenvalues.size(); ++k) {
    if (out.sigma.eigenvalues(k) <= cut) {
      const CVector v = out.sigma.eigenvectors.col(k);
      kernel_mass += (v.adjoint() * rho.matrix() * v)(0, 0).real();
    }
  }
  out.support_ok = kernel_mass <= kSupportCutoff;
  return out;
}

CMatrix log_on_support(const EigenDecomp& e) {
  const double cut = kSupportCutoff * spectral_radius(e.eigenvalues);
  return spectral_apply(e, [cut](double x) { return x > cut ? std::log(x) : 0.0; });
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

HermOp::HermOp(int dim_a, int dim_b, CMatrix entries, double tol)
    : dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a < 1 || dim_b < 1) {
    throw std::invalid_argument("HermOp: dimensions must be positive");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (entries.rows() != n || entries.cols() != n) {
    throw std::invalid_argument("HermOp: matrix side must equal dim_a*dim_b");
  }
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= tol)) {
    throw std::invalid_argument("HermOp: matrix is not Hermitian (deviation " +
                                std::to_string(asym) + ")");
  }
  m_ = 0.5 * (entries + entries.adjoint());
}

HermOp HermOp::identity(int dim_a, int dim_b) {
  const int n = dim_a * dim_b;
  return HermOp(dim_a, dim_b, CMatrix::Identity(n, n));
}

HermOp HermOp::zero(int dim_a, int dim_b) {
  const int n = dim_a * dim_b;
  return HermOp(dim_a, dim_b, CMatrix::Zero(n, n));
}

HermOp HermOp::diagonal(int dim_a, int dim_b, const RVector& diag) {
  return HermOp(dim_a, dim_b, diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermOp HermOp::projector(int dim_a, int dim_b, const CVector& v) {
  return HermOp(dim_a, dim_b, v * v.adjoint());
}

bool HermOp::is_real(double tol) const {
  return m_.imag().cwiseAbs().maxCoeff() <= tol;
}

HermOp HermOp::operator+(const HermOp& other) const {
  check_same_shape(*this, other);
  return HermOp(dim_a_, dim_b_, m_ + other.m_);
}

HermOp HermOp::operator-(const HermOp& other) const {
  check_same_shape(*this, other);
  return HermOp(dim_a_, dim_b_, m_ - other.m_);
}

HermOp HermOp::operator*(double s) const {
  return HermOp(dim_a_, dim_b_, m_ * s);
}

HermOp max_entangled(int d) {
  if (d < 1) throw std::invalid_argument("max_entangled: d must be >= 1");
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0 / d;
  }
  return HermOp(d, d, std::move(m));
}

HermOp partial_transpose(const HermOp& m) {
  const int da = m.dim_a();
  const int db = m.dim_b();
  CMatrix out(m.size(), m.size());
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < db; ++j) {
      for (int k = 0; k < da; ++k) {
        for (int l = 0; l < db; ++l) {
          out(i * db + j, k * db + l) = m(i * db + l, k * db + j);
        }
      }
    }
  }
  return HermOp(da, db, std::move(out));
}

HermOp partial_trace_a(const HermOp& m) {
  const int da = m.dim_a();
  const int db = m.dim_b();
  CMatrix out = CMatrix::Zero(db, db);
  for (int i = 0; i < da; ++i) out += m.matrix().block(i * db, i * db, db, db);
  return HermOp(1, db, std::move(out));
}

HermOp partial_trace_b(const HermOp& m) {
  const int da = m.dim_a();
  const int db = m.dim_b();
  CMatrix out(da, da);
  for (int i = 0; i < da; ++i) {
    for (int k = 0; k < da; ++k) out(i, k) = m.matrix().block(i * db, k * db, db, db).trace();
  }
  return HermOp(da, 1, std::move(out));
}

HermOp tensor_product(const HermOp& rho, const HermOp& sigma) {
  const int a1 = rho.dim_a(), b1 = rho.dim_b();
  const int a2 = sigma.dim_a(), b2 = sigma.dim_b();
  const int da = a1 * a2;
  const int db = b1 * b2;
  CMatrix out(da * db, da * db);
  auto index = [&](int i1, int i2, int j1, int j2) { return (i1 * a2 + i2) * db + j1 * b2 + j2; };
  for (int i1 = 0; i1 < a1; ++i1)
    for (int j1 = 0; j1 < b1; ++j1)
      for (int k1 = 0; k1 < a1; ++k1)
        for (int l1 = 0; l1 < b1; ++l1) {
          const Complex r = rho(i1 * b1 + j1, k1 * b1 + l1);
          for (int i2 = 0; i2 < a2; ++i2)
            for (int j2 = 0; j2 < b2; ++j2)
              for (int k2 = 0; k2 < a2; ++k2)
                for (int l2 = 0; l2 < b2; ++l2) {
                  out(index(i1, i2, j1, j2), index(k1, k2, l1, l2)) =
                      r * sigma(i2 * b2 + j2, k2 * b2 + l2);
                }
        }
  return HermOp(da, db, std::move(out));
}

HermOp tensor_power(const HermOp& rho, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  HermOp out = rho;
  for (int k = 1; k < n; ++k) out = tensor_product(out, rho);
  return out;
}

HermOp identity_tensor(int dim_a, const HermOp& rho_b) {
  if (rho_b.dim_a() != 1) {
    throw std::invalid_argument("identity_tensor: expected an operator on B alone");
  }
  return HermOp(dim_a, rho_b.dim_b(), kron(CMatrix::Identity(dim_a, dim_a), rho_b.matrix()));
}

EigenDecomp herm_eig(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomp herm_eig(const HermOp& m) { return herm_eig(m.matrix()); }

double trace_norm(const HermOp& m) {
  return herm_eig(m).eigenvalues.cwiseAbs().sum();
}

double operator_norm(const HermOp& m) {
  return spectral_radius(herm_eig(m).eigenvalues);
}

double min_eigenvalue(const HermOp& m) { return herm_eig(m).eigenvalues(0); }

double entropy(const HermOp& rho, LogBase base) {
  const RVector lambda = herm_eig(rho).eigenvalues;
  const double cut = kSupportCutoff * spectral_radius(lambda);
  double s = 0.0;
  for (double x : lambda) {
    if (x > cut) s -= x * std::log(x);
  }
  return s * log_scale(base);
}

double relative_entropy(const HermOp& rho, const HermOp& sigma, LogBase base) {
  const LogPair p = decompose_pair(rho, sigma);
  if (!p.support_ok) return kInfinity;
  const double rho_cut = kSupportCutoff * spectral_radius(p.rho.eigenvalues);
  double tr_rho_log_rho = 0.0;
  for (double x : p.rho.eigenvalues) {
    if (x > rho_cut) tr_rho_log_rho += x * std::log(x);
  }
  const double sig_cut = kSupportCutoff * spectral_radius(p.sigma.eigenvalues);
  double tr_rho_log_sigma = 0.0;
  for (Eigen::Index k = 0; k < p.sigma.eigenvalues.size(); ++k) {
    const double mu = p.sigma.eigenvalues(k);
    if (mu <= sig_cut) continue;
    const CVector v = p.sigma.eigenvectors.col(k);
    tr_rho_log_sigma += std::log(mu) * (v.adjoint() * rho.matrix() * v)(0, 0).real();
  }
  return (tr_rho_log_rho - tr_rho_log_sigma) * log_scale(base);
}

double relative_entropy_variance(const HermOp& rho, const HermOp& sigma, LogBase base) {
  const LogPair p = decompose_pair(rho, sigma);
  if (!p.support_ok) {
    throw std::domain_error("relative entropy variance: supp(rho) not inside supp(sigma)");
  }
  const CMatrix diff = log_on_support(p.rho) - log_on_support(p.sigma);
  const CMatrix sqrt_rho =
      spectral_apply(p.rho, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
  const double mean = (sqrt_rho * diff * sqrt_rho).trace().real();
  // Centred form tr ρ(L − D)²: a sum of squares, so a zero variance stays at
  // rounding level instead of the cancellation level of tr ρL² − D².
  const CMatrix centred = diff - mean * CMatrix::Identity(diff.rows(), diff.cols());
  const CMatrix w = centred * sqrt_rho;
  const double s = log_scale(base);
  return w.squaredNorm() * s * s;
}

namespace {
HermOp conditional_reference(const HermOp& rho) {
  return identity_tensor(rho.dim_a(), partial_trace_a(rho));
}
}  // namespace

double coherent_info(const HermOp& rho, LogBase base) {
  return relative_entropy(rho, conditional_reference(rho), base);
}

double coherent_info_variance(const HermOp& rho, LogBase base) {
  return relative_entropy_variance(rho, conditional_reference(rho), base);
}

double binary_entropy(double p, LogBase base) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  return (term(p) + term(1.0 - p)) * log_scale(base);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inv_normal_cdf(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("inv_normal_cdf: argument must lie in (0,1)");
  }
  // Rational initial guess (Acklam), then Newton steps on the erfc-based CDF.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (eps < p_low) {
    const double q = std::sqrt(-2.0 * std::log(eps));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (eps <= 1.0 - p_low) {
    const double q = eps - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-eps));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  for (int it = 0; it < 4; ++it) {
    // Work on the smaller tail to keep the residual accurate.
    const double resid = eps < 0.5 ? normal_cdf(x) - eps : (1.0 - eps) - normal_cdf(-x);
    const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
    if (pdf == 0.0) break;
    const double step = resid / pdf;
    x -= step / (1.0 + 0.5 * x * step);  // Halley
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

bool is_ppt_prime(const HermOp& m, double tol) {
  return min_eigenvalue(m) >= -tol && trace_norm(partial_transpose(m)) <= 1.0 + tol;
}

void require_state(const HermOp& rho, const char* what) {
  const double tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw std::domain_error(std::string(what) + ": trace is not 1");
  }
  if (min_eigenvalue(rho) < -kPsdTolerance) {
    throw std::domain_error(std::string(what) + ": not positive semidefinite");
  }
}

}  // namespace edist::qmat
