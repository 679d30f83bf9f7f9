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

#include "edist/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>

namespace edist::conic {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::MaxIter: return "max_iter";
    case SdpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

SdpOptions default_sdp_options() {
  SdpOptions opts;
  if (const char* env = std::getenv("DISTILL_SOLVER_MAXITER")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) opts.max_iter = static_cast<int>(v);
  }
  return opts;
}

// ---------------------------------------------------------------------------
// Problem construction

int SdpProblem::add_variables(int count) {
  if (count < 0) throw std::invalid_argument("add_variables: negative count");
  const int first = num_vars_;
  num_vars_ += count;
  return first;
}

int SdpProblem::add_block(std::string name, int side) {
  if (side < 1) throw std::invalid_argument("add_block: side must be >= 1");
  blocks_.push_back(Block{std::move(name), side, {}, {}});
  return static_cast<int>(blocks_.size()) - 1;
}

void SdpProblem::check_var(int var) const {
  if (var < 0 || var >= num_vars_) throw std::out_of_range("SdpProblem: variable index out of range");
}

void SdpProblem::check_entry(int block, int row, int col) const {
  if (block < 0 || block >= num_blocks()) throw std::out_of_range("SdpProblem: block index out of range");
  const int side = blocks_[block].side;
  if (row < 0 || col < 0 || row >= side || col >= side) {
    throw std::out_of_range("SdpProblem: entry outside block");
  }
}

void SdpProblem::add_constant(int block, int row, int col, double value) {
  check_entry(block, row, col);
  if (value == 0.0) return;
  blocks_[block].constant[{std::min(row, col), std::max(row, col)}] += value;
}

void SdpProblem::add_coefficient(int block, int var, int row, int col, double value) {
  check_entry(block, row, col);
  check_var(var);
  if (value == 0.0) return;
  blocks_[block].coeffs[var][{std::min(row, col), std::max(row, col)}] += value;
}

void SdpProblem::add_constraint(LinearForm form, Sense sense, double rhs) {
  for (const auto& t : form) check_var(t.var);
  rows_.push_back(Row{std::move(form), sense, rhs});
}

void SdpProblem::set_objective(LinearForm form, double constant, bool maximize) {
  for (const auto& t : form) check_var(t.var);
  objective_ = std::move(form);
  objective_constant_ = constant;
  maximize_ = maximize;
}

const SdpSolution& require_optimal(const SdpSolution& solution, const char* context) {
  if (!solution.optimal()) {
    throw SolverError(std::string(context) + ": SDP solver ended with status " +
                          to_string(solution.status) + " (" + solution.message + ")",
                      solution.status);
  }
  return solution;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

struct Entry {
  int row;
  int col;
  double value;
};

// A set of entries sharing a row (by_row) or a column.
struct EntryGroup {
  bool by_row;
  int index;
  std::vector<int> members;
};

struct BlockCoeff {
  int var;
  std::vector<Entry> entries;  // both triangles
  std::vector<EntryGroup> cover;  // every entry in exactly one group
  bool dense = false;
  MatrixXd mat;  // filled when dense
  double fro = 0.0;
};

struct CompiledBlock {
  int side = 0;
  MatrixXd f0;
  std::vector<BlockCoeff> coeffs;
  // Factored form F_a = Σ_g α_g β_gᵀ over the cover groups, with the groups
  // of coefficient a in columns [start[a], start[a+1]). Filled only when
  // assembling the Schur block through dense products is estimated cheaper.
  bool factored = false;
  MatrixXd alpha;
  MatrixXd beta;
  std::vector<int> start;
};

// Chooses between entrywise and factored Schur assembly by a flop estimate;
// the factored path runs at BLAS speed, weighted here as eight times faster.
void plan_factored(CompiledBlock& cb) {
  const double n = cb.side;
  double entrywise = 0.0;
  double nnz = 0.0;
  double k_total = 0.0;
  for (const auto& bc : cb.coeffs) {
    nnz += static_cast<double>(bc.entries.size());
    k_total += static_cast<double>(bc.cover.size());
  }
  for (const auto& bc : cb.coeffs) {
    entrywise += bc.dense ? 2.0 * n * n * n + nnz
                          : static_cast<double>(bc.cover.size()) * (n + 0.5 * nnz);
  }
  const double factored = (2.0 * k_total * n * n + 2.0 * k_total * k_total * n) / 8.0 + k_total * k_total;
  if (factored >= entrywise) return;
  cb.factored = true;
  const int side = cb.side;
  const int k = static_cast<int>(k_total);
  cb.alpha = MatrixXd::Zero(side, k);
  cb.beta = MatrixXd::Zero(side, k);
  cb.start.assign(1, 0);
  int col = 0;
  for (const auto& bc : cb.coeffs) {
    for (const auto& g : bc.cover) {
      for (int e : g.members) {
        const Entry& en = bc.entries[e];
        if (g.by_row) {
          cb.alpha(en.row, col) = 1.0;
          cb.beta(en.col, col) += en.value;
        } else {
          cb.alpha(en.row, col) += en.value;
          cb.beta(en.col, col) = 1.0;
        }
      }
      ++col;
    }
    cb.start.push_back(col);
  }
}

struct Compiled {
  int m = 0;
  std::vector<CompiledBlock> blocks;
  MatrixXd lp_f;   // rows × m, slack = lp_f0 + lp_f y ≥ 0
  VectorXd lp_f0;
  MatrixXd eq;     // p × m, eq y = eq_rhs
  VectorXd eq_rhs;
  VectorXd c;      // minimize cᵀy
};

// Greedy cover of the entries by rows and columns. F X and S⁻¹ F then factor
// through one vector per group, so S⁻¹ F X has rank at most |cover|.
std::vector<EntryGroup> cover_entries(const std::vector<Entry>& entries) {
  std::vector<EntryGroup> cover;
  std::vector<char> done(entries.size(), 0);
  std::size_t left = entries.size();
  while (left > 0) {
    std::map<int, int> rows, cols;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (done[i]) continue;
      ++rows[entries[i].row];
      ++cols[entries[i].col];
    }
    auto best = [](const std::map<int, int>& m) {
      return *std::max_element(m.begin(), m.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    };
    const auto r = best(rows);
    const auto c = best(cols);
    EntryGroup g{r.second >= c.second, r.second >= c.second ? r.first : c.first, {}};
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (done[i]) continue;
      if ((g.by_row ? entries[i].row : entries[i].col) != g.index) continue;
      g.members.push_back(static_cast<int>(i));
      done[i] = 1;
      --left;
    }
    cover.push_back(std::move(g));
  }
  return cover;
}

Compiled compile(const SdpProblem& p) {
  Compiled out;
  out.m = p.num_variables();
  const int m = out.m;
  for (const auto& b : p.blocks()) {
    CompiledBlock cb;
    cb.side = b.side;
    cb.f0 = MatrixXd::Zero(b.side, b.side);
    for (const auto& [rc, v] : b.constant) {
      cb.f0(rc.first, rc.second) += v;
      if (rc.first != rc.second) cb.f0(rc.second, rc.first) += v;
    }
    for (const auto& [var, entries] : b.coeffs) {
      BlockCoeff bc;
      bc.var = var;
      double fro2 = 0.0;
      for (const auto& [rc, v] : entries) {
        if (v == 0.0) continue;
        bc.entries.push_back({rc.first, rc.second, v});
        fro2 += v * v;
        if (rc.first != rc.second) {
          bc.entries.push_back({rc.second, rc.first, v});
          fro2 += v * v;
        }
      }
      if (bc.entries.empty()) continue;
      bc.fro = std::sqrt(fro2);
      bc.cover = cover_entries(bc.entries);
      // The factored product costs about |cover|·n² against n³ for dense.
      bc.dense = 4 * static_cast<int>(bc.cover.size()) > b.side;
      if (bc.dense) {
        bc.mat = MatrixXd::Zero(b.side, b.side);
        for (const auto& e : bc.entries) bc.mat(e.row, e.col) += e.value;
      }
      cb.coeffs.push_back(std::move(bc));
    }
    plan_factored(cb);
    out.blocks.push_back(std::move(cb));
  }

  int n_ineq = 0;
  int n_eq = 0;
  for (const auto& r : p.rows()) (r.sense == Sense::Equal ? n_eq : n_ineq)++;
  out.lp_f = MatrixXd::Zero(n_ineq, m);
  out.lp_f0 = VectorXd::Zero(n_ineq);
  out.eq = MatrixXd::Zero(n_eq, m);
  out.eq_rhs = VectorXd::Zero(n_eq);
  int ii = 0;
  int ie = 0;
  for (const auto& r : p.rows()) {
    if (r.sense == Sense::Equal) {
      for (const auto& t : r.form) out.eq(ie, t.var) += t.coeff;
      out.eq_rhs(ie++) = r.rhs;
    } else {
      const double s = r.sense == Sense::GreaterEqual ? 1.0 : -1.0;
      for (const auto& t : r.form) out.lp_f(ii, t.var) += s * t.coeff;
      out.lp_f0(ii++) = -s * r.rhs;
    }
  }
  out.c = VectorXd::Zero(m);
  const double sign = p.maximize() ? -1.0 : 1.0;
  for (const auto& t : p.objective()) out.c(t.var) += sign * t.coeff;
  return out;
}

// F(y) restricted to one block (without the constant term).
MatrixXd apply_block(const CompiledBlock& b, const VectorXd& y) {
  MatrixXd out = MatrixXd::Zero(b.side, b.side);
  for (const auto& bc : b.coeffs) {
    const double yi = y(bc.var);
    if (yi == 0.0) continue;
    if (bc.dense) {
      out.noalias() += yi * bc.mat;
    } else {
      for (const auto& e : bc.entries) out(e.row, e.col) += yi * e.value;
    }
  }
  return out;
}

// Accumulates ⟨F_i, M⟩ for every variable touching the block.
void adjoint_block(const CompiledBlock& b, const MatrixXd& mat, VectorXd& out) {
  for (const auto& bc : b.coeffs) {
    double s = 0.0;
    if (bc.dense) {
      s = bc.mat.cwiseProduct(mat).sum();
    } else {
      for (const auto& e : bc.entries) s += e.value * mat(e.row, e.col);
    }
    out(bc.var) += s;
  }
}

// H_ij += tr(F_i X F_j S⁻¹), upper triangle only.
void schur_block(const CompiledBlock& b, const MatrixXd& x, const MatrixXd& sinv, MatrixXd& h) {
  const auto& cs = b.coeffs;
  if (b.factored) {
    // tr(F_a X F_b S⁻¹) = Σ_{g∈a, h∈b} (β_gᵀ X α_h)(β_hᵀ S⁻¹ α_g).
    const MatrixXd m1 = b.beta.transpose() * x * b.alpha;
    const MatrixXd m2 = b.beta.transpose() * sinv * b.alpha;
    const int n = static_cast<int>(cs.size());
    for (int a = 0; a < n; ++a) {
      for (int c = a; c < n; ++c) {
        double s = 0.0;
        for (int g = b.start[a]; g < b.start[a + 1]; ++g)
          for (int hh = b.start[c]; hh < b.start[c + 1]; ++hh) s += m1(g, hh) * m2(hh, g);
        const int i = cs[a].var, j = cs[c].var;
        if (i <= j) h(i, j) += s; else h(j, i) += s;
      }
    }
    return;
  }
  const int n = static_cast<int>(cs.size());
  std::vector<int> dense;
  std::vector<int> sparse;
  for (int a = 0; a < n; ++a) (cs[a].dense ? dense : sparse).push_back(a);

  auto add = [&h](int i, int j, double v) {
    if (i <= j) h(i, j) += v; else h(j, i) += v;
  };

  // Pairs involving a dense coefficient: G = S⁻¹ F_a X, then tr(F_b G).
  std::vector<char> is_dense(n, 0);
  for (int a : dense) is_dense[a] = 1;
  for (int a : dense) {
    const MatrixXd g = sinv * cs[a].mat * x;
    for (int bi = 0; bi < n; ++bi) {
      if (is_dense[bi] && bi < a) continue;  // dense-dense pair counted once
      double s = 0.0;
      if (cs[bi].dense) {
        s = cs[bi].mat.cwiseProduct(g.transpose()).sum();
      } else {
        for (const auto& e : cs[bi].entries) s += e.value * g(e.col, e.row);
      }
      add(cs[a].var, cs[bi].var, s);
    }
  }

  // Sparse-sparse pairs: tr(F_b W) with W = S⁻¹ F_a X = P Qᵀ, one column
  // pair per cover group of F_a. Small blocks form W outright; large ones
  // read its entries from the factors, stored transposed for contiguity.
  const bool form_w = b.side <= 64;
  MatrixXd pt, qt, w;
  for (std::size_t ia = 0; ia < sparse.size(); ++ia) {
    const auto& ca = cs[sparse[ia]];
    const int k = static_cast<int>(ca.cover.size());
    pt.setZero(k, b.side);
    qt.setZero(k, b.side);
    for (int g = 0; g < k; ++g) {
      const auto& grp = ca.cover[g];
      if (grp.by_row) {
        pt.row(g) = sinv.col(grp.index).transpose();
        for (int e : grp.members) qt.row(g) += ca.entries[e].value * x.col(ca.entries[e].col).transpose();
      } else {
        for (int e : grp.members) pt.row(g) += ca.entries[e].value * sinv.col(ca.entries[e].row).transpose();
        qt.row(g) = x.col(grp.index).transpose();
      }
    }
    if (form_w) w.noalias() = pt.transpose() * qt;
    for (std::size_t ib = ia; ib < sparse.size(); ++ib) {
      double s = 0.0;
      for (const auto& f : cs[sparse[ib]].entries) {
        double wv = 0.0;
        if (form_w) {
          wv = w(f.col, f.row);
        } else {
          const double* pc = pt.data() + static_cast<Eigen::Index>(f.col) * k;
          const double* qc = qt.data() + static_cast<Eigen::Index>(f.row) * k;
          for (int g = 0; g < k; ++g) wv += pc[g] * qc[g];
        }
        s += f.value * wv;
      }
      add(ca.var, cs[sparse[ib]].var, s);
    }
  }
}

// Largest α with M + α dM ⪰ 0 (capped at 1e30).
double max_step_psd(const MatrixXd& m, const MatrixXd& dm) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto l = llt.matrixL();
  MatrixXd t = l.solve(dm);
  t = l.solve(t.transpose()).transpose();
  const MatrixXd sym = 0.5 * (t + t.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? 1e30 : -1.0 / lmin;
}

double max_step_vec(const VectorXd& v, const VectorXd& dv) {
  double a = 1e30;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  }
  return a;
}

MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

struct Iterate {
  std::vector<MatrixXd> x, s;
  VectorXd xl, sl;
  VectorXd y, w;
};

struct Direction {
  std::vector<MatrixXd> dx, ds;
  VectorXd dxl, dsl;
  VectorXd dy, dw;
};

class KktSolver {
 public:
  bool factor(MatrixXd h, const MatrixXd& eq) {
    const Eigen::Index m = h.rows();
    h.triangularView<Eigen::StrictlyLower>() = h.transpose().triangularView<Eigen::StrictlyLower>();
    double maxdiag = m > 0 ? h.diagonal().cwiseAbs().maxCoeff() : 1.0;
    if (!(maxdiag > 0.0)) maxdiag = 1.0;
    // Variables that touch no block have an empty Schur row.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (h(i, i) <= 1e-14 * maxdiag) h(i, i) += 1e-12 * maxdiag;
    }
    h_ = h;
    llt_.compute(h);
    if (llt_.info() != Eigen::Success) {
      h.diagonal().array() += 1e-12 * maxdiag;
      llt_.compute(h);
      if (llt_.info() != Eigen::Success) return false;
    }
    eq_ = eq;
    if (eq.rows() > 0) {
      hinv_et_ = llt_.solve(eq.transpose());
      k_.compute(eq * hinv_et_);
      if (k_.info() != Eigen::Success) return false;
    }
    return true;
  }

  // Solves H dy − Eᵀ dw = g, E dy = r_e, with two rounds of iterative
  // refinement; the Schur matrix is badly conditioned near the optimum.
  void solve(const VectorXd& g, const VectorXd& re, VectorXd& dy, VectorXd& dw) const {
    solve_once(g, re, dy, dw);
    for (int round = 0; round < 2; ++round) {
      VectorXd r1 = g - h_.selfadjointView<Eigen::Upper>() * dy;
      if (eq_.rows() > 0) r1.noalias() += eq_.transpose() * dw;
      const VectorXd r2 = eq_.rows() > 0 ? VectorXd(re - eq_ * dy) : VectorXd();
      VectorXd cy, cw;
      solve_once(r1, r2, cy, cw);
      dy += cy;
      if (eq_.rows() > 0) dw += cw;
    }
  }

 private:
  void solve_once(const VectorXd& g, const VectorXd& re, VectorXd& dy, VectorXd& dw) const {
    const VectorXd hg = llt_.solve(g);
    if (eq_.rows() > 0) {
      dw = k_.solve(re - eq_ * hg);
      dy = hg + hinv_et_ * dw;
    } else {
      dw.resize(0);
      dy = hg;
    }
  }

  MatrixXd h_;
  Eigen::LLT<MatrixXd> llt_;
  Eigen::LDLT<MatrixXd> k_;
  MatrixXd eq_;
  MatrixXd hinv_et_;
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  const Compiled cp = compile(problem);
  const int m = cp.m;
  const int nb = static_cast<int>(cp.blocks.size());
  const int nl = static_cast<int>(cp.lp_f0.size());
  const int ne = static_cast<int>(cp.eq_rhs.size());
  int total_dim = nl;
  for (const auto& b : cp.blocks) total_dim += b.side;

  SdpSolution sol;
  if (total_dim == 0 && m > 0) {
    throw std::invalid_argument("solve_sdp: problem has no conic constraints");
  }

  // Starting point: scaled identities, zero multipliers.
  Iterate it;
  it.y = VectorXd::Zero(m);
  it.w = VectorXd::Zero(ne);
  for (const auto& b : cp.blocks) {
    double max_ratio = 0.0;
    double max_fro = 0.0;
    for (const auto& bc : b.coeffs) {
      max_ratio = std::max(max_ratio, (1.0 + std::abs(cp.c(bc.var))) / (1.0 + bc.fro));
      max_fro = std::max(max_fro, bc.fro);
    }
    const double root = std::sqrt(static_cast<double>(b.side));
    const double xi = std::max({10.0, root, b.side * max_ratio});
    const double zeta = std::max({10.0, root, max_fro, b.f0.norm()});
    it.x.push_back(xi * MatrixXd::Identity(b.side, b.side));
    it.s.push_back(zeta * MatrixXd::Identity(b.side, b.side));
  }
  {
    double max_ratio = 0.0;
    double max_norm = 0.0;
    for (int j = 0; j < m && nl > 0; ++j) {
      const double cn = cp.lp_f.col(j).norm();
      if (cn > 0.0) max_ratio = std::max(max_ratio, (1.0 + std::abs(cp.c(j))) / (1.0 + cn));
      max_norm = std::max(max_norm, cn);
    }
    const double root = std::sqrt(static_cast<double>(std::max(nl, 1)));
    it.xl = VectorXd::Constant(nl, std::max({10.0, root, max_ratio}));
    it.sl = VectorXd::Constant(nl, std::max({10.0, root, max_norm, cp.lp_f0.lpNorm<Eigen::Infinity>()}));
  }

  double f0_norm = cp.lp_f0.squaredNorm();
  for (const auto& b : cp.blocks) f0_norm += b.f0.squaredNorm();
  f0_norm = std::sqrt(f0_norm);
  const double c_norm = cp.c.norm();
  const double f_norm = cp.eq_rhs.norm();
  const double sign = problem.maximize() ? -1.0 : 1.0;

  int stalls = 0;
  double pobj = 0.0, dobj = 0.0, pinf = 0.0, dinf = 0.0, rel_gap = 0.0;
  std::vector<MatrixXd> rp(nb);
  VectorXd rpl;
  VectorXd rd;
  VectorXd re;

  auto evaluate = [&]() {
    double pres2 = 0.0;
    for (int k = 0; k < nb; ++k) {
      rp[k] = cp.blocks[k].f0 + apply_block(cp.blocks[k], it.y) - it.s[k];
      pres2 += rp[k].squaredNorm();
    }
    rpl = cp.lp_f0 + cp.lp_f * it.y - it.sl;
    pres2 += rpl.squaredNorm();
    re = cp.eq_rhs - cp.eq * it.y;

    VectorXd adj = VectorXd::Zero(m);
    for (int k = 0; k < nb; ++k) adjoint_block(cp.blocks[k], it.x[k], adj);
    if (nl > 0) adj.noalias() += cp.lp_f.transpose() * it.xl;
    rd = cp.c - adj;
    if (ne > 0) rd.noalias() -= cp.eq.transpose() * it.w;

    pobj = cp.c.dot(it.y);
    dobj = cp.eq_rhs.dot(it.w) - cp.lp_f0.dot(it.xl);
    for (int k = 0; k < nb; ++k) dobj -= cp.blocks[k].f0.cwiseProduct(it.x[k]).sum();

    pinf = std::max(std::sqrt(pres2) / (1.0 + f0_norm), re.norm() / (1.0 + f_norm));
    dinf = rd.norm() / (1.0 + c_norm);
    rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  };

  auto finish = [&](SdpStatus status, std::string msg, int iters) {
    sol.status = status;
    sol.message = std::move(msg);
    sol.iterations = iters;
    sol.primal_value = sign * pobj + problem.objective_constant();
    sol.dual_value = sign * dobj + problem.objective_constant();
    sol.duality_gap = std::abs(pobj - dobj);
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    sol.y = it.y;
    sol.block_values.clear();
    for (int k = 0; k < nb; ++k) {
      sol.block_values.push_back(cp.blocks[k].f0 + apply_block(cp.blocks[k], it.y));
    }
    sol.dual_blocks = it.x;
    sol.row_slacks = cp.lp_f0 + cp.lp_f * it.y;
    return sol;
  };

  // Best iterate so far by its worst stopping measure; returned when the
  // method stalls short of the tolerance but within 10x of it.
  Iterate best;
  double best_close = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  auto fallback = [&](SdpStatus status, const char* msg, int iter) {
    if (best_close <= 10 * options.tolerance) {
      it = best;
      evaluate();
      return finish(SdpStatus::Optimal, "converged (reduced accuracy)", iter);
    }
    return finish(status, msg, iter);
  };

  for (int iter = 0;; ++iter) {
    evaluate();
    double comp = it.xl.dot(it.sl);
    for (int k = 0; k < nb; ++k) comp += it.x[k].cwiseProduct(it.s[k]).sum();
    const double mu = comp / total_dim;
    const double comp_rel = comp / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (options.verbose) {
      std::fprintf(stderr, "%3d pobj %+.10e dobj %+.10e gap %.2e pinf %.2e dinf %.2e mu %.2e\n",
                   iter, sign * pobj, sign * dobj, rel_gap, pinf, dinf, mu);
    }
    const double tol = options.tolerance;
    if (rel_gap <= tol && comp_rel <= tol && pinf <= tol && dinf <= tol) {
      return finish(SdpStatus::Optimal, "converged", iter);
    }
    const double close = std::max({rel_gap, comp_rel, pinf, dinf});
    if (close < best_close) {
      best_close = close;
      best = it;
      best_iter = iter;
    } else if (iter - best_iter >= 20) {
      return fallback(SdpStatus::NumericalFailure, "no progress", iter);
    }
    double ynorm = it.y.lpNorm<Eigen::Infinity>();
    double xnorm = it.xl.size() ? it.xl.lpNorm<Eigen::Infinity>() : 0.0;
    for (int k = 0; k < nb; ++k) xnorm = std::max(xnorm, it.x[k].trace());
    if (iter > 10 && (ynorm > 1e12 || xnorm > 1e12)) {
      return finish(SdpStatus::Infeasible, "iterates diverged", iter);
    }
    if (iter >= options.max_iter) {
      return fallback(SdpStatus::MaxIter, "iteration cap reached", iter);
    }

    // Schur complement.
    std::vector<MatrixXd> sinv(nb);
    MatrixXd h = MatrixXd::Zero(m, m);
    bool ok = true;
    for (int k = 0; k < nb; ++k) {
      Eigen::LLT<MatrixXd> llt(it.s[k]);
      if (llt.info() != Eigen::Success) { ok = false; break; }
      sinv[k] = llt.solve(MatrixXd::Identity(cp.blocks[k].side, cp.blocks[k].side));
      sinv[k] = sym(sinv[k]);
      schur_block(cp.blocks[k], it.x[k], sinv[k], h);
    }
    VectorXd dl;
    if (ok && nl > 0) {
      dl = it.xl.cwiseQuotient(it.sl);
      const MatrixXd scaled = dl.asDiagonal() * cp.lp_f;
      MatrixXd hl = cp.lp_f.transpose() * scaled;
      h.triangularView<Eigen::Upper>() += hl;
    }
    KktSolver kkt;
    if (!ok || !kkt.factor(std::move(h), cp.eq)) {
      return fallback(SdpStatus::NumericalFailure, "singular Schur complement", iter);
    }

    // Direction for complementarity target Rc with the "Rc S⁻¹" terms supplied.
    auto direction = [&](const std::vector<MatrixXd>& rc_sinv, const VectorXd& rcl_over_s) {
      Direction d;
      VectorXd g = -rd;
      VectorXd adj = VectorXd::Zero(m);
      for (int k = 0; k < nb; ++k) {
        const MatrixXd t = rc_sinv[k] - it.x[k] * rp[k] * sinv[k];
        adjoint_block(cp.blocks[k], sym(t), adj);
      }
      if (nl > 0) {
        const VectorXd tl = rcl_over_s - it.xl.cwiseProduct(rpl).cwiseQuotient(it.sl);
        adj.noalias() += cp.lp_f.transpose() * tl;
      }
      g += adj;
      kkt.solve(g, re, d.dy, d.dw);
      d.dx.resize(nb);
      d.ds.resize(nb);
      for (int k = 0; k < nb; ++k) {
        d.ds[k] = apply_block(cp.blocks[k], d.dy) + rp[k];
        d.dx[k] = sym(rc_sinv[k] - it.x[k] * d.ds[k] * sinv[k]);
      }
      if (nl > 0) {
        d.dsl = cp.lp_f * d.dy + rpl;
        d.dxl = rcl_over_s - it.xl.cwiseProduct(d.dsl).cwiseQuotient(it.sl);
      } else {
        d.dsl.resize(0);
        d.dxl.resize(0);
      }
      return d;
    };

    auto steps = [&](const Direction& d) {
      double ax = 1e30, as = 1e30;
      for (int k = 0; k < nb; ++k) {
        ax = std::min(ax, max_step_psd(it.x[k], d.dx[k]));
        as = std::min(as, max_step_psd(it.s[k], d.ds[k]));
      }
      if (nl > 0) {
        ax = std::min(ax, max_step_vec(it.xl, d.dxl));
        as = std::min(as, max_step_vec(it.sl, d.dsl));
      }
      return std::pair<double, double>{ax, as};
    };

    // Predictor.
    std::vector<MatrixXd> rc(nb);
    for (int k = 0; k < nb; ++k) rc[k] = -it.x[k];
    VectorXd rcl = -it.xl;
    const Direction pred = direction(rc, rcl);
    auto [apx, aps] = steps(pred);
    apx = std::min(1.0, apx);
    aps = std::min(1.0, aps);
    double comp_aff = 0.0;
    for (int k = 0; k < nb; ++k) {
      comp_aff += (it.x[k] + apx * pred.dx[k]).cwiseProduct(it.s[k] + aps * pred.ds[k]).sum();
    }
    if (nl > 0) comp_aff += (it.xl + apx * pred.dxl).dot(it.sl + aps * pred.dsl);
    const double mu_aff = comp_aff / total_dim;
    const double ratio = std::clamp(mu_aff / mu, 0.0, 1.0);
    const double expon = std::min(apx, aps) > 0.5 ? 3.0 : 2.0;
    const double sigma = std::clamp(std::pow(ratio, expon), 0.0, 1.0);

    // Corrector.
    for (int k = 0; k < nb; ++k) {
      rc[k] = sigma * mu * sinv[k] - it.x[k] - pred.dx[k] * pred.ds[k] * sinv[k];
    }
    if (nl > 0) {
      rcl = (VectorXd::Constant(nl, sigma * mu) - pred.dxl.cwiseProduct(pred.dsl)).cwiseQuotient(it.sl) - it.xl;
    }
    const Direction dir = direction(rc, rcl);
    auto [ax, as] = steps(dir);
    const double gamma = 0.9 + 0.09 * std::min(apx, aps);
    ax = std::min(1.0, gamma * ax);
    as = std::min(1.0, gamma * as);

    if (ax < 1e-10 && as < 1e-10) {
      if (++stalls >= 3) return fallback(SdpStatus::NumericalFailure, "step length collapsed", iter);
    } else {
      stalls = 0;
    }

    for (int k = 0; k < nb; ++k) {
      it.x[k] = sym(it.x[k] + ax * dir.dx[k]);
      it.s[k] = sym(it.s[k] + as * dir.ds[k]);
    }
    if (nl > 0) {
      it.xl += ax * dir.dxl;
      it.sl += as * dir.dsl;
    }
    it.y += as * dir.dy;
    if (ne > 0) it.w += ax * dir.dw;
  }
}

}  // namespace edist::conic
