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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace edist::conic {

struct LinearTerm {
  int var;
  double coeff;
};
using LinearForm = std::vector<LinearTerm>;

enum class Sense { LessEqual, Equal, GreaterEqual };

enum class SdpStatus { Optimal, Infeasible, MaxIter, NumericalFailure };

const char* to_string(SdpStatus status);

struct SdpOptions {
  int max_iter = 200;
  double tolerance = 1e-8;  // relative gap and relative residuals
  bool verbose = false;
};

/// Defaults with the iteration cap overridden by DISTILL_SOLVER_MAXITER when
/// that variable holds a positive integer.
SdpOptions default_sdp_options();

/// Semidefinite program over free scalar variables y:
///
///   minimize (or maximize)  cᵀy + c₀
///   subject to              F_k(y) = F_k0 + Σ_i y_i F_ki ⪰ 0   for every block k
///                           aᵀy {≤,=,≥} b                     for every linear row
///
/// Blocks are dense real symmetric; Hermitian constraints are realified by the
/// modeling helpers in sdp_model.hpp before they reach this class. Inequality
/// rows become a diagonal (LP) block; equality rows are handled by the
/// solver's KKT system.
class SdpProblem {
 public:
  /// Appends `count` variables and returns the index of the first one.
  int add_variables(int count);
  int num_variables() const { return num_vars_; }

  /// Declares an LMI block of the given side; returns its index.
  int add_block(std::string name, int side);
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::string& block_name(int block) const { return blocks_.at(block).name; }
  int block_side(int block) const { return blocks_.at(block).side; }

  /// Adds `value` to entry (row, col) of F_k0, and to (col, row) when off-diagonal.
  void add_constant(int block, int row, int col, double value);
  /// Adds `value` to entry (row, col) of F_k,var (symmetrically).
  void add_coefficient(int block, int var, int row, int col, double value);

  void add_constraint(LinearForm form, Sense sense, double rhs);

  void set_objective(LinearForm form, double constant = 0.0, bool maximize = false);

  // Read access for the solver.
  struct Block {
    std::string name;
    int side = 0;
    std::map<std::pair<int, int>, double> constant;  // upper triangle
    std::map<int, std::map<std::pair<int, int>, double>> coeffs;
  };
  struct Row {
    LinearForm form;
    Sense sense;
    double rhs;
  };
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Row>& rows() const { return rows_; }
  const LinearForm& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  bool maximize() const { return maximize_; }

 private:
  void check_var(int var) const;
  void check_entry(int block, int row, int col) const;

  int num_vars_ = 0;
  std::vector<Block> blocks_;
  std::vector<Row> rows_;
  LinearForm objective_;
  double objective_constant_ = 0.0;
  bool maximize_ = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::MaxIter;
  /// Objective at y, in the problem's own sense.
  double primal_value = 0.0;
  /// Objective of the dual certificate (a bound on primal_value).
  double dual_value = 0.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  Eigen::VectorXd y;
  /// F_k(y) for each block.
  std::vector<Eigen::MatrixXd> block_values;
  /// Dual matrices paired with each block.
  std::vector<Eigen::MatrixXd> dual_blocks;
  /// aᵀy − b (sign-normalized to ≥ 0) for each inequality row, in insertion order.
  Eigen::VectorXd row_slacks;
  std::string message;

  bool optimal() const { return status == SdpStatus::Optimal; }
};

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, SdpStatus status = SdpStatus::NumericalFailure)
      : std::runtime_error(what), status_(status) {}
  SdpStatus status() const { return status_; }

 private:
  SdpStatus status_;
};

/// Infeasible-start primal-dual interior-point method with HKM search
/// direction and Mehrotra predictor-corrector steps.
SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = default_sdp_options());

/// Throws SolverError unless the solution is optimal.
const SdpSolution& require_optimal(const SdpSolution& solution, const char* context);

}  // namespace edist::conic
