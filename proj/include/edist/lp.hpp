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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "edist/sdp.hpp"

namespace edist::conic {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal such as "0.9" or "1e-3"
/// into an exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

double to_double(const Rational& q);

/// Linear program with exact rational data:
///
///   minimize cᵀx  subject to  rows {≤,=,≥} rhs,  lower ≤ x ≤ upper.
///
/// Missing bounds are infinite.
class RationalLp {
 public:
  struct Row {
    std::vector<std::pair<int, Rational>> coeffs;
    Sense sense;
    Rational rhs;
  };

  int add_variable(std::optional<Rational> lower = Rational(0),
                   std::optional<Rational> upper = std::nullopt);
  int num_variables() const { return static_cast<int>(lower_.size()); }

  void set_objective(int var, Rational coeff);
  void add_constraint(std::vector<std::pair<int, Rational>> coeffs, Sense sense, Rational rhs);

  const std::vector<std::optional<Rational>>& lower() const { return lower_; }
  const std::vector<std::optional<Rational>>& upper() const { return upper_; }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<Row>& rows() const { return rows_; }

  /// True when `x` satisfies every row and bound exactly.
  bool satisfied_by(const std::vector<Rational>& x) const;
  Rational objective_value(const std::vector<Rational>& x) const;

 private:
  std::vector<std::optional<Rational>> lower_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<Rational> objective_;
  std::vector<Row> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational optimum;
  std::vector<Rational> assignment;
  int pivots = 0;
  // True when the basis came from the floating-point guide and was then
  // verified exactly (primal and dual feasibility in rationals).
  bool certified_from_float = false;
};

struct LpOptions {
  // Find a candidate basis in double precision first and certify it exactly.
  // Falls back to the exact simplex when the certificate fails.
  bool float_guide = true;
};

/// Exact optimum of an LP. A double-precision bounded simplex proposes an
/// optimal basis, which is accepted only if its exact primal values lie within
/// bounds and its exact reduced costs have the right signs. Otherwise a
/// two-phase bounded-variable simplex runs in rationals, first with a tiny
/// right-hand-side perturbation and then without it if the perturbed basis
/// does not check out. Pricing is steepest edge, scored in floating point;
/// after a run of degenerate pivots it falls back to Bland's smallest-index
/// rule until the objective strictly improves, which rules out cycling.
LpSolution solve_lp_exact(const RationalLp& lp, const LpOptions& options = {});

}  // namespace edist::conic
