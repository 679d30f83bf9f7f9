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


#include "edist/fitkit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <stdexcept>

namespace edist::fitkit {

std::array<double, 4> basis(int n) {
  const double x = n;
  return {1.0, 1.0 / std::sqrt(x), std::log2(x) / x, 1.0 / x};
}

double RateCurve::evaluate(int n) const {
  const auto b = basis(n);
  double v = 0.0;
  for (int j = 0; j < 4; ++j) v += coefficients[j] * b[j];
  return v;
}

RateCurve fit_rate_curve(const std::vector<RatePoint>& points) {
  std::set<int> distinct;
  for (const auto& p : points) {
    if (p.n < 1) throw std::invalid_argument("fit_rate_curve: n must be at least 1");
    if (!std::isfinite(p.rate_per_copy_bits)) throw std::invalid_argument("fit_rate_curve: non-finite rate");
    distinct.insert(p.n);
  }
  if (distinct.size() < 5) throw std::invalid_argument("fit_rate_curve: need at least 5 distinct n");

  const int m = static_cast<int>(points.size());
  Eigen::MatrixXd a(m, 4);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const auto b = basis(points[i].n);
    for (int j = 0; j < 4; ++j) a(i, j) = b[j];
    y(i) = points[i].rate_per_copy_bits;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 4) throw std::invalid_argument("fit_rate_curve: rank-deficient design");
  const Eigen::VectorXd c = qr.solve(y);

  RateCurve curve;
  curve.points = points;
  for (int j = 0; j < 4; ++j) curve.coefficients[j] = c(j);
  const Eigen::VectorXd r = y - a * c;
  curve.residuals.assign(r.data(), r.data() + m);
  curve.residual_norm = r.norm();
  return curve;
}

}  // namespace edist::fitkit
