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

#include "edist/lp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <type_traits>

namespace edist::conic {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("parse_rational: empty input");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  // Decimal literal: [sign] digits [. digits] [e|E [sign] digits]
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("parse_rational: malformed number '" + text + "'");
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') {
      throw std::invalid_argument("parse_rational: malformed number '" + text + "'");
    }
    const std::string exp_str = s.substr(pos + 1);
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_str, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_rational: malformed exponent in '" + text + "'");
    }
    if (used != exp_str.size()) {
      throw std::invalid_argument("parse_rational: malformed exponent in '" + text + "'");
    }
  }
  mpz_class mant(digits, 10);
  const long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(mant * scale) : Rational(mant, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

double to_double(const Rational& q) { return q.get_d(); }

// gmpxx leaves a/b as given; comparisons assume lowest terms.
int RationalLp::add_variable(std::optional<Rational> lower, std::optional<Rational> upper) {
  if (lower) lower->canonicalize();
  if (upper) upper->canonicalize();
  if (lower && upper && *lower > *upper) {
    throw std::invalid_argument("RationalLp: lower bound exceeds upper bound");
  }
  lower_.push_back(std::move(lower));
  upper_.push_back(std::move(upper));
  objective_.emplace_back(0);
  return num_variables() - 1;
}

void RationalLp::set_objective(int var, Rational coeff) {
  coeff.canonicalize();
  objective_.at(var) = std::move(coeff);
}

void RationalLp::add_constraint(std::vector<std::pair<int, Rational>> coeffs, Sense sense,
                                Rational rhs) {
  for (auto& [var, c] : coeffs) {
    if (var < 0 || var >= num_variables()) throw std::out_of_range("RationalLp: variable index");
    c.canonicalize();
  }
  rhs.canonicalize();
  rows_.push_back(Row{std::move(coeffs), sense, std::move(rhs)});
}

bool RationalLp::satisfied_by(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != num_variables()) return false;
  for (int j = 0; j < num_variables(); ++j) {
    if (lower_[j] && x[j] < *lower_[j]) return false;
    if (upper_[j] && x[j] > *upper_[j]) return false;
  }
  for (const auto& r : rows_) {
    Rational lhs = 0;
    for (const auto& [var, c] : r.coeffs) lhs += c * x[var];
    switch (r.sense) {
      case Sense::LessEqual: if (lhs > r.rhs) return false; break;
      case Sense::GreaterEqual: if (lhs < r.rhs) return false; break;
      case Sense::Equal: if (lhs != r.rhs) return false; break;
    }
  }
  return true;
}

Rational RationalLp::objective_value(const std::vector<Rational>& x) const {
  Rational z = 0;
  for (int j = 0; j < num_variables(); ++j) z += objective_[j] * x[j];
  return z;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Original variable j = offset + Σ sign·x'_col.
struct VarMap {
  Rational offset;
  std::vector<std::pair<int, int>> cols;  // (column, ±1)
};

// Equality form T0 x = β0 with 0 ≤ x ≤ upper. Columns are structural, then
// one slack per inequality row, then artificials. Rows are oriented so that
// β0 ≥ 0 and every row has a +1 slack or an artificial to start from.
struct StandardForm {
  int m = 0;
  int n_struct = 0;
  int n_slack = 0;
  int n_art = 0;
  std::vector<VarMap> maps;
  std::vector<std::vector<Rational>> t0;
  std::vector<Rational> beta0;
  std::vector<std::optional<Rational>> upper;  // artificials unbounded here
  std::vector<Rational> cost;                  // phase 2
  std::vector<int> initial_basis;              // per row
  std::vector<int> unit_row;                   // row of a slack/artificial column, else −1

  int cols() const { return n_struct + n_slack + n_art; }
  bool artificial(int j) const { return j >= n_struct + n_slack; }
};

StandardForm standardize(const RationalLp& lp) {
  StandardForm sf;
  const int n = lp.num_variables();

  // Shift every variable to a nonnegative column (splitting free ones).
  sf.maps.resize(n);
  std::vector<std::optional<Rational>> col_upper;
  for (int j = 0; j < n; ++j) {
    const auto& lo = lp.lower()[j];
    const auto& up = lp.upper()[j];
    const int col = static_cast<int>(col_upper.size());
    if (lo) {
      sf.maps[j].offset = *lo;
      sf.maps[j].cols.push_back({col, 1});
      col_upper.push_back(up ? std::optional<Rational>(*up - *lo) : std::nullopt);
    } else if (up) {
      sf.maps[j].offset = *up;
      sf.maps[j].cols.push_back({col, -1});
      col_upper.push_back(std::nullopt);
    } else {
      sf.maps[j].offset = 0;
      sf.maps[j].cols.push_back({col, 1});
      sf.maps[j].cols.push_back({col + 1, -1});
      col_upper.push_back(std::nullopt);
      col_upper.push_back(std::nullopt);
    }
  }
  sf.n_struct = static_cast<int>(col_upper.size());
  const int m = static_cast<int>(lp.rows().size());
  sf.m = m;

  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(sf.n_struct));
  std::vector<Rational> b(m);
  std::vector<int> slack_sign(m, 0);
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows()[i];
    Rational shift = 0;
    for (const auto& [var, c] : row.coeffs) {
      shift += c * sf.maps[var].offset;
      for (const auto& [col, sg] : sf.maps[var].cols) a[i][col] += sg > 0 ? c : Rational(-c);
    }
    b[i] = row.rhs - shift;
    if (row.sense == Sense::LessEqual) slack_sign[i] = 1;
    if (row.sense == Sense::GreaterEqual) slack_sign[i] = -1;
  }
  for (int s : slack_sign) sf.n_slack += s != 0;

  std::vector<bool> negate(m, false);
  std::vector<bool> needs_artificial(m, false);
  for (int i = 0; i < m; ++i) {
    // A ≥ row with zero right-hand side is negated too, so its slack starts
    // basic at 0 and no artificial is needed.
    negate[i] = b[i] < 0 || (b[i] == 0 && slack_sign[i] == -1);
    const int effective = negate[i] ? -slack_sign[i] : slack_sign[i];
    needs_artificial[i] = effective != 1;
    sf.n_art += needs_artificial[i];
  }

  const int cols = sf.cols();
  sf.t0.assign(m, std::vector<Rational>(cols));
  sf.beta0.resize(m);
  sf.upper.assign(cols, std::nullopt);
  sf.unit_row.assign(cols, -1);
  sf.initial_basis.assign(m, -1);
  for (int j = 0; j < sf.n_struct; ++j) sf.upper[j] = col_upper[j];
  int slack_col = sf.n_struct;
  int art_col = sf.n_struct + sf.n_slack;
  for (int i = 0; i < m; ++i) {
    const bool neg = negate[i];
    for (int j = 0; j < sf.n_struct; ++j) {
      if (sgn(a[i][j]) != 0) sf.t0[i][j] = neg ? Rational(-a[i][j]) : a[i][j];
    }
    sf.beta0[i] = neg ? Rational(-b[i]) : b[i];
    if (slack_sign[i] != 0) {
      const int eff = neg ? -slack_sign[i] : slack_sign[i];
      sf.t0[i][slack_col] = eff;
      sf.unit_row[slack_col] = i;
      if (eff == 1) sf.initial_basis[i] = slack_col;
      ++slack_col;
    }
    if (needs_artificial[i]) {
      sf.t0[i][art_col] = 1;
      sf.unit_row[art_col] = i;
      sf.initial_basis[i] = art_col;
      ++art_col;
    }
  }

  sf.cost.assign(cols, Rational(0));
  for (int j = 0; j < n; ++j) {
    for (const auto& [col, sg] : sf.maps[j].cols) {
      sf.cost[col] = sg > 0 ? lp.objective()[j] : Rational(-lp.objective()[j]);
    }
  }
  return sf;
}

std::vector<Rational> original_values(const StandardForm& sf, const std::vector<Rational>& colval) {
  std::vector<Rational> x(sf.maps.size());
  for (std::size_t j = 0; j < sf.maps.size(); ++j) {
    x[j] = sf.maps[j].offset;
    for (const auto& [col, sg] : sf.maps[j].cols) {
      if (sg > 0) x[j] += colval[col]; else x[j] -= colval[col];
    }
  }
  return x;
}

// Sign with a zero band for floating point; exact for rationals.
// Multiprecision floats for the guide; the zero band is set per solve.
using Float = mpf_class;
thread_local Float float_zero;
int sign_of(const Rational& v) { return sgn(v); }
int sign_of(const Float& v) { return (v > float_zero) - (v < -float_zero); }
double as_double(const Rational& v) { return v.get_d(); }
double as_double(const Float& v) { return v.get_d(); }

enum class Outcome { Optimal, Unbounded };

template <class T>
class Tableau {
 public:
  Tableau(int rows, int cols)
      : t_(rows, std::vector<T>(cols)), beta_(rows), basis_(rows, -1),
        upper_(cols), at_upper_(cols, false), is_basic_(cols, false), d_(cols) {}

  std::vector<std::vector<T>> t_;
  std::vector<T> beta_;
  std::vector<int> basis_;
  std::vector<std::optional<T>> upper_;  // lower bounds are all 0
  std::vector<bool> at_upper_;
  std::vector<bool> is_basic_;
  std::vector<T> d_;  // reduced costs
  int pivots = 0;
  bool steepest = true;  // otherwise Dantzig's largest |d_j|

  int rows() const { return static_cast<int>(t_.size()); }
  int cols() const { return static_cast<int>(d_.size()); }

  bool fixed(int j) const { return upper_[j] && sign_of(*upper_[j]) == 0; }

  T value(int j) const {
    if (!is_basic_[j]) return at_upper_[j] ? *upper_[j] : T(0);
    for (int r = 0; r < rows(); ++r) {
      if (basis_[r] == j) return beta_[r];
    }
    return T(0);
  }

  void price(const std::vector<T>& cost) {
    for (int j = 0; j < cols(); ++j) {
      T dj = cost[j];
      for (int r = 0; r < rows(); ++r) {
        if (sign_of(t_[r][j]) != 0) dj -= cost[basis_[r]] * t_[r][j];
      }
      d_[j] = dj;
    }
  }

  // Caps the pivot count; returns false when the cap is hit.
  bool run(Outcome& outcome, int max_pivots) {
    constexpr int kDegenerateLimit = 1000;
    int degenerate_run = 0;
    bool bland = false;
    T tmp;
    while (true) {
      if (pivots >= max_pivots) return false;
      // Entering variable: steepest edge, d_j² / (1 + ‖tableau column j‖²),
      // scored in floating point since only the choice depends on it.
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < cols(); ++j) {
        if (is_basic_[j] || fixed(j)) continue;
        const int s = sign_of(d_[j]);
        const bool eligible = at_upper_[j] ? s > 0 : s < 0;
        if (!eligible) continue;
        if (bland) { enter = j; break; }
        if (!steepest) {
          const double score = std::fabs(as_double(d_[j]));
          if (enter < 0 || score > best) {
            enter = j;
            best = score;
          }
          continue;
        }
        double norm2 = 1.0;
        for (int r = 0; r < rows(); ++r) {
          if (sign_of(t_[r][j]) == 0) continue;
          const double v = as_double(t_[r][j]);
          norm2 += v * v;
        }
        const double dj = as_double(d_[j]);
        const double score = dj * dj / norm2;
        if (enter < 0 || score > best) {
          enter = j;
          best = score;
        }
      }
      if (enter < 0) {
        outcome = Outcome::Optimal;
        return true;
      }
      const int dir = at_upper_[enter] ? -1 : 1;

      // Ratio test.
      bool bounded = false;
      bool flip = false;
      int leave = -1;
      T theta{};
      if (upper_[enter]) {
        theta = *upper_[enter];
        bounded = true;
        flip = true;
      }
      for (int r = 0; r < rows(); ++r) {
        const int s = sign_of(t_[r][enter]) * dir;
        if (s == 0) continue;
        T limit;
        if (s > 0) {
          limit = beta_[r] / abs(t_[r][enter]);
        } else {
          const auto& ub = upper_[basis_[r]];
          if (!ub) continue;
          limit = (*ub - beta_[r]) / abs(t_[r][enter]);
        }
        if (limit < 0) limit = 0;  // drift in floating point
        if (!bounded || limit < theta ||
            (limit == theta && !flip && basis_[r] < basis_[leave])) {
          theta = limit;
          leave = r;
          bounded = true;
          flip = false;
        }
      }
      if (!bounded) {
        outcome = Outcome::Unbounded;
        return true;
      }

      // Move along the edge.
      if (sign_of(theta) != 0) {
        for (int r = 0; r < rows(); ++r) {
          if (sign_of(t_[r][enter]) == 0) continue;
          tmp = t_[r][enter] * theta;
          if (dir > 0) beta_[r] -= tmp; else beta_[r] += tmp;
        }
        degenerate_run = 0;
        bland = false;
      } else if (++degenerate_run >= kDegenerateLimit) {
        bland = true;
      }

      if (flip) {
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }

      const int old = basis_[leave];
      at_upper_[old] = sign_of(t_[leave][enter]) * dir < 0;
      is_basic_[old] = false;
      const T start = at_upper_[enter] ? *upper_[enter] : T(0);
      beta_[leave] = dir > 0 ? T(start + theta) : T(start - theta);
      at_upper_[enter] = false;
      is_basic_[enter] = true;
      basis_[leave] = enter;
      pivot(leave, enter);
    }
  }

  // Bounded dual simplex from a dual feasible basis. Returns true once every
  // basic value is within bounds; false on the cap or a primal infeasible row.
  bool run_dual(int max_pivots) {
    while (true) {
      if (pivots >= max_pivots) return false;
      int leave = -1;
      bool to_upper = false;
      T worst = 0;
      for (int r = 0; r < rows(); ++r) {
        const auto& ub = upper_[basis_[r]];
        T viol = 0;
        bool up = false;
        if (sign_of(beta_[r]) < 0) {
          viol = -beta_[r];
        } else if (ub && sign_of(T(beta_[r] - *ub)) > 0) {
          viol = beta_[r] - *ub;
          up = true;
        } else {
          continue;
        }
        if (leave < 0 || viol > worst) {
          leave = r;
          worst = viol;
          to_upper = up;
        }
      }
      if (leave < 0) return true;

      // Entering column: keeps the reduced costs dual feasible.
      const int want = to_upper ? 1 : -1;  // required sign of t_rj·Δx_j
      int enter = -1;
      T best_ratio;
      T best_pivot;
      for (int j = 0; j < cols(); ++j) {
        if (is_basic_[j] || fixed(j)) continue;
        const int s = sign_of(t_[leave][j]);
        if (s == 0) continue;
        const int dir = at_upper_[j] ? -1 : 1;
        if (s * dir != want) continue;
        const T ratio = abs(d_[j]) / abs(t_[leave][j]);
        const T mag = abs(t_[leave][j]);
        if (enter < 0 || ratio < best_ratio || (ratio == best_ratio && mag > best_pivot)) {
          enter = j;
          best_ratio = ratio;
          best_pivot = mag;
        }
      }
      if (enter < 0) return false;

      const T target = to_upper ? *upper_[basis_[leave]] : T(0);
      const T delta = (beta_[leave] - target) / t_[leave][enter];
      for (int r = 0; r < rows(); ++r) {
        if (r != leave && sign_of(t_[r][enter]) != 0) beta_[r] -= t_[r][enter] * delta;
      }
      const int old = basis_[leave];
      is_basic_[old] = false;
      at_upper_[old] = to_upper;
      const T start = at_upper_[enter] ? *upper_[enter] : T(0);
      beta_[leave] = start + delta;
      at_upper_[enter] = false;
      is_basic_[enter] = true;
      basis_[leave] = enter;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int j) {
    ++pivots;
    auto& prow = t_[r];
    const T inv = T(1) / prow[j];
    std::vector<int> nz;
    for (int k = 0; k < cols(); ++k) {
      if (sign_of(prow[k]) != 0) {
        prow[k] *= inv;
        nz.push_back(k);
      } else {
        prow[k] = 0;
      }
    }
    T f;
    T tmp;
    auto eliminate = [&](std::vector<T>& row) {
      if (sign_of(row[j]) == 0) return;
      f = row[j];
      for (int k : nz) {
        if constexpr (std::is_same_v<T, Rational>) {
          mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), prow[k].get_mpq_t());
          mpq_sub(row[k].get_mpq_t(), row[k].get_mpq_t(), tmp.get_mpq_t());
        } else {
          row[k] -= f * prow[k];
        }
      }
      row[j] = 0;
    };
    for (int i = 0; i < rows(); ++i) {
      if (i != r) eliminate(t_[i]);
    }
    eliminate(d_);
  }
};

struct Basis {
  std::vector<int> basic;  // per row
  std::vector<bool> at_upper;
};

long bits(const Rational& v) {
  return static_cast<long>(mpz_sizeinbase(v.get_num_mpz_t(), 2) + mpz_sizeinbase(v.get_den_mpz_t(), 2));
}

// Sets the default mpf precision for the lifetime of a guide solve.
class PrecisionScope {
 public:
  explicit PrecisionScope(mp_bitcnt_t prec) : saved_(mpf_get_default_prec()) { mpf_set_default_prec(prec); }
  ~PrecisionScope() { mpf_set_default_prec(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mp_bitcnt_t saved_;
};

// Runs both phases in multiprecision floating point on an equilibrated copy
// and returns the final basis. The precision grows with the bit length of the
// data, since the rows of the iso LP cancel to many digits. Any doubt (cap
// reached, no feasible point found, unbounded ray) returns nothing and the
// caller goes exact from the start.
std::optional<Basis> float_basis(const StandardForm& sf, int* pivots) {
  const int m = sf.m;
  const int cols = sf.cols();
  long maxbits = 64;
  for (int i = 0; i < m; ++i) {
    maxbits = std::max(maxbits, bits(sf.beta0[i]));
    for (int j = 0; j < cols; ++j) maxbits = std::max(maxbits, bits(sf.t0[i][j]));
  }
  for (int j = 0; j < cols; ++j) {
    maxbits = std::max(maxbits, bits(sf.cost[j]));
    if (sf.upper[j]) maxbits = std::max(maxbits, bits(*sf.upper[j]));
  }
  const PrecisionScope scope(static_cast<mp_bitcnt_t>(2 * maxbits + 256));
  float_zero = 1;
  mpf_div_2exp(float_zero.get_mpf_t(), float_zero.get_mpf_t(), static_cast<mp_bitcnt_t>(maxbits + 128));
  Tableau<Float> tab(m, cols);
  // Steepest edge costs a column norm per candidate; in multiprecision that
  // outweighs the pivots it saves.
  tab.steepest = false;
  // Geometric equilibration by powers of two: alternately centre the log
  // magnitudes of each row and each structural column. Entries can span
  // dozens of decades, and row sums cancel heavily.
  // Column j is substituted as x_j = 2^{cs_j} x'_j.
  std::vector<std::vector<std::pair<int, double>>> lg(m);  // (col, log2|a|)
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < sf.n_struct; ++j) {
      if (sgn(sf.t0[i][j]) != 0) lg[i].push_back({j, std::log2(std::fabs(sf.t0[i][j].get_d()))});
    }
  }
  std::vector<double> rs(m, 0.0);
  std::vector<double> cs(sf.n_struct, 0.0);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 12; ++pass) {
    for (int i = 0; i < m; ++i) {
      double lo = kInf, hi = -kInf;
      for (const auto& [j, l] : lg[i]) {
        lo = std::min(lo, l + cs[j]);
        hi = std::max(hi, l + cs[j]);
      }
      if (lo <= hi) rs[i] = -std::round((lo + hi) / 2);
    }
    std::vector<double> lo(sf.n_struct, kInf), hi(sf.n_struct, -kInf);
    for (int i = 0; i < m; ++i) {
      for (const auto& [j, l] : lg[i]) {
        lo[j] = std::min(lo[j], l + rs[i]);
        hi[j] = std::max(hi[j], l + rs[i]);
      }
    }
    for (int j = 0; j < sf.n_struct; ++j) {
      if (lo[j] <= hi[j]) cs[j] = -std::round((lo[j] + hi[j]) / 2);
    }
  }
  auto scaled = [](const Rational& v, double e) {
    Float f(v);
    const long k = static_cast<long>(e);
    if (k >= 0) mpf_mul_2exp(f.get_mpf_t(), f.get_mpf_t(), k);
    else mpf_div_2exp(f.get_mpf_t(), f.get_mpf_t(), -k);
    return f;
  };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < sf.n_struct; ++j) {
      if (sgn(sf.t0[i][j]) != 0) tab.t_[i][j] = scaled(sf.t0[i][j], rs[i] + cs[j]);
    }
    tab.beta_[i] = scaled(sf.beta0[i], rs[i]);
    // Slack and artificial columns are rescaled back to a unit entry so the
    // starting basis is the identity.
    for (int j = sf.n_struct; j < cols; ++j) {
      if (sf.unit_row[j] == i) tab.t_[i][j] = sgn(sf.t0[i][j]);
    }
    tab.basis_[i] = sf.initial_basis[i];
    tab.is_basic_[sf.initial_basis[i]] = true;
  }
  for (int j = 0; j < sf.n_struct; ++j) {
    if (sf.upper[j]) tab.upper_[j] = scaled(*sf.upper[j], -cs[j]);
  }
  // Loosen every inequality by a tiny random amount. The zero right-hand
  // sides make the start massively degenerate and pricing stalls otherwise.
  // The certificate is checked against the unperturbed data.
  std::mt19937_64 rng(0x5eed);
  std::vector<Float> shift(m, Float(0));
  for (int j = sf.n_struct; j < sf.n_struct + sf.n_slack; ++j) {
    const int i = sf.unit_row[j];
    Float delta = abs(tab.beta_[i]) > 1 ? Float(abs(tab.beta_[i])) : Float(1);
    delta *= static_cast<double>(1 + (rng() >> 44)) / static_cast<double>(1ULL << 20);
    mpf_div_2exp(delta.get_mpf_t(), delta.get_mpf_t(), 40);
    shift[i] = sgn(sf.t0[i][j]) > 0 ? delta : Float(-delta);
    tab.beta_[i] += shift[i];
  }
  const int cap = 50 * (m + cols);
  Outcome outcome;
  if (sf.n_art > 0) {
    std::vector<Float> phase1(cols, Float(0));
    for (int j = sf.n_struct + sf.n_slack; j < cols; ++j) phase1[j] = 1;
    tab.price(phase1);
    if (!tab.run(outcome, cap)) return std::nullopt;
    Float infeas = 0;
    for (int j = sf.n_struct + sf.n_slack; j < cols; ++j) infeas += tab.value(j);
    if (infeas > float_zero) return std::nullopt;
    for (int j = sf.n_struct + sf.n_slack; j < cols; ++j) {
      tab.upper_[j] = Float(0);
      tab.at_upper_[j] = false;
    }
  }
  std::vector<Float> cost(cols);
  for (int j = 0; j < sf.n_struct; ++j) cost[j] = scaled(sf.cost[j], cs[j]);
  for (int j = sf.n_struct; j < cols; ++j) cost[j] = Float(sf.cost[j]);
  tab.price(cost);
  const bool done = tab.run(outcome, cap);
  if (!done || outcome != Outcome::Optimal) {
    *pivots += tab.pivots;
    return std::nullopt;
  }
  // Take the perturbation back out. The columns of the starting identity now
  // hold B⁻¹, so the basic values move by −B⁻¹·shift. Degenerate basics can
  // turn slightly infeasible; the basis stays dual feasible, so a few dual
  // simplex pivots restore optimality.
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < m; ++i) {
      const Float& col = tab.t_[r][sf.initial_basis[i]];
      if (sgn(shift[i]) != 0 && sign_of(col) != 0) tab.beta_[r] -= col * shift[i];
    }
  }
  const bool repaired = tab.run_dual(cap);
  *pivots += tab.pivots;
  if (!repaired) return std::nullopt;
  return Basis{tab.basis_, tab.at_upper_};
}

// Exact solve of a square system by Gaussian elimination; nothing if singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> rhs) {
  const int k = static_cast<int>(rhs.size());
  for (int c = 0; c < k; ++c) {
    int piv = -1;
    for (int r = c; r < k; ++r) {
      if (sgn(a[r][c]) != 0) { piv = r; break; }
    }
    if (piv < 0) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (int r = c + 1; r < k; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (int cc = c; cc < k; ++cc) {
        if (sgn(a[c][cc]) != 0) a[r][cc] -= f * a[c][cc];
      }
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<Rational> x(k);
  for (int r = k - 1; r >= 0; --r) {
    Rational acc = rhs[r];
    for (int c = r + 1; c < k; ++c) {
      if (sgn(a[r][c]) != 0) acc -= a[r][c] * x[c];
    }
    x[r] = acc / a[r][r];
  }
  return x;
}

// Checks a basis exactly: basic values within bounds (primal feasibility)
// and reduced costs of the right sign at every nonbasic column (dual
// feasibility). Together these certify optimality. Returns the column values.
std::optional<std::vector<Rational>> certify(const StandardForm& sf, const Basis& basis) {
  const int m = sf.m;
  const int cols = sf.cols();
  auto ub = [&](int j) -> std::optional<Rational> {
    return sf.artificial(j) ? std::optional<Rational>(Rational(0)) : sf.upper[j];
  };
  std::vector<bool> is_basic(cols, false);
  for (int j : basis.basic) {
    if (j < 0 || is_basic[j]) return std::nullopt;
    is_basic[j] = true;
  }

  std::vector<Rational> val(cols);
  std::vector<Rational> rhs = sf.beta0;
  for (int j = 0; j < cols; ++j) {
    if (is_basic[j] || !basis.at_upper[j]) continue;
    const auto u = ub(j);
    if (!u) return std::nullopt;
    val[j] = *u;
    for (int i = 0; i < m; ++i) {
      if (sgn(sf.t0[i][j]) != 0) rhs[i] -= sf.t0[i][j] * val[j];
    }
  }

  // Basic unit columns pin their rows; the structural ones form the core.
  std::vector<int> row_unit(m, -1);
  std::vector<int> core_cols;
  for (int j : basis.basic) {
    if (sf.unit_row[j] >= 0) {
      if (row_unit[sf.unit_row[j]] >= 0) return std::nullopt;
      row_unit[sf.unit_row[j]] = j;
    } else {
      core_cols.push_back(j);
    }
  }
  std::vector<int> core_rows;
  for (int i = 0; i < m; ++i) {
    if (row_unit[i] < 0) core_rows.push_back(i);
  }
  if (core_rows.size() != core_cols.size()) return std::nullopt;
  const int k = static_cast<int>(core_cols.size());

  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
  std::vector<std::vector<Rational>> at(k, std::vector<Rational>(k));
  std::vector<Rational> b(k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      a[r][c] = sf.t0[core_rows[r]][core_cols[c]];
      at[c][r] = a[r][c];
    }
    b[r] = rhs[core_rows[r]];
  }
  const auto xs = solve_square(a, b);
  if (!xs) return std::nullopt;
  for (int c = 0; c < k; ++c) val[core_cols[c]] = (*xs)[c];
  for (int i = 0; i < m; ++i) {
    const int j = row_unit[i];
    if (j < 0) continue;
    Rational acc = rhs[i];
    for (int c = 0; c < k; ++c) {
      if (sgn(sf.t0[i][core_cols[c]]) != 0) acc -= sf.t0[i][core_cols[c]] * (*xs)[c];
    }
    val[j] = acc / sf.t0[i][j];
  }
  for (int j : basis.basic) {
    const auto u = ub(j);
    if (val[j] < 0 || (u && val[j] > *u)) return std::nullopt;
  }

  // Duals: yᵀ T0[:, j] = c_j on the basis.
  std::vector<Rational> y(m);
  for (int i = 0; i < m; ++i) {
    if (row_unit[i] >= 0) y[i] = sf.cost[row_unit[i]] / sf.t0[i][row_unit[i]];
  }
  std::vector<Rational> dual_rhs(k);
  for (int c = 0; c < k; ++c) {
    dual_rhs[c] = sf.cost[core_cols[c]];
    for (int i = 0; i < m; ++i) {
      if (row_unit[i] >= 0 && sgn(y[i]) != 0) dual_rhs[c] -= y[i] * sf.t0[i][core_cols[c]];
    }
  }
  const auto yc = solve_square(at, dual_rhs);
  if (!yc) return std::nullopt;
  for (int r = 0; r < k; ++r) y[core_rows[r]] = (*yc)[r];
  for (int j = 0; j < cols; ++j) {
    if (is_basic[j] || sf.artificial(j)) continue;
    const auto u = ub(j);
    if (u && *u == 0) continue;
    Rational d = sf.cost[j];
    for (int i = 0; i < m; ++i) {
      if (sgn(y[i]) != 0 && sgn(sf.t0[i][j]) != 0) d -= y[i] * sf.t0[i][j];
    }
    if (basis.at_upper[j] ? sgn(d) > 0 : sgn(d) < 0) return std::nullopt;
  }
  return val;
}

// Exact two-phase simplex. With `perturb`, inequality right-hand sides are
// shifted by tiny random amounts first. That breaks the ties behind long runs
// of degenerate pivots. The exact right-hand side is then restored in the
// final basis. Whenever the result cannot be confirmed exactly, *rejected is
// set and the caller solves the unperturbed problem instead.
LpSolution exact_simplex(const RationalLp& lp, const StandardForm& sf, bool perturb, bool* rejected) {
  const int m = sf.m;
  const int cols = sf.cols();
  Tableau<Rational> tab(m, cols);
  tab.t_ = sf.t0;
  tab.beta_ = sf.beta0;
  tab.basis_ = sf.initial_basis;
  for (int j = 0; j < cols; ++j) tab.upper_[j] = sf.upper[j];
  for (int i = 0; i < m; ++i) tab.is_basic_[sf.initial_basis[i]] = true;

  std::vector<Rational> delta(m);
  if (perturb) {
    std::mt19937_64 rng(0x5eed);
    const Rational unit(mpz_class(1), mpz_class(1) << 64);
    for (int j = sf.n_struct; j < sf.n_struct + sf.n_slack; ++j) {
      const int i = sf.unit_row[j];
      const Rational scale = abs(tab.beta_[i]) > 1 ? Rational(abs(tab.beta_[i])) : Rational(1);
      delta[i] = scale * unit * Rational(static_cast<long>(1 + (rng() >> 44)));
      tab.beta_[i] += delta[i];
    }
  }
  const int unlimited = std::numeric_limits<int>::max();

  LpSolution sol;
  Outcome outcome;
  if (sf.n_art > 0) {
    std::vector<Rational> phase1(cols);
    for (int j = sf.n_struct + sf.n_slack; j < cols; ++j) phase1[j] = 1;
    tab.price(phase1);
    tab.run(outcome, unlimited);
    Rational infeas = 0;
    for (int j = sf.n_struct + sf.n_slack; j < cols; ++j) infeas += tab.value(j);
    if (infeas > 0) {
      sol.pivots = tab.pivots;
      if (perturb) {
        *rejected = true;
        return sol;
      }
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    for (int j = sf.n_struct + sf.n_slack; j < cols; ++j) {
      tab.upper_[j] = Rational(0);
      tab.at_upper_[j] = false;
    }
  }

  tab.price(sf.cost);
  tab.run(outcome, unlimited);
  sol.pivots = tab.pivots;
  if (outcome == Outcome::Unbounded) {
    if (perturb) {
      *rejected = true;
      return sol;
    }
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  if (perturb) {
    // The columns that started as the identity now hold B⁻¹, so the exact
    // basic values are β − B⁻¹δ. Reduced costs do not depend on the right-hand
    // side, so a basis that stays within bounds is optimal as it stands.
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        const int col = sf.initial_basis[c];
        if (sgn(delta[c]) != 0 && sgn(tab.t_[r][col]) != 0) tab.beta_[r] -= tab.t_[r][col] * delta[c];
      }
      const auto& ub = tab.upper_[tab.basis_[r]];
      if (tab.beta_[r] < 0 || (ub && tab.beta_[r] > *ub)) {
        *rejected = true;
        return sol;
      }
    }
  }

  std::vector<Rational> colval(cols);
  for (int j = 0; j < cols; ++j) colval[j] = tab.value(j);
  sol.assignment = original_values(sf, colval);
  sol.optimum = lp.objective_value(sol.assignment);
  sol.status = LpStatus::Optimal;
  if (perturb && !lp.satisfied_by(sol.assignment)) *rejected = true;
  return sol;
}

}  // namespace

LpSolution solve_lp_exact(const RationalLp& lp, const LpOptions& options) {
  const StandardForm sf = standardize(lp);
  int pivots = 0;
  if (options.float_guide) {
    if (const auto basis = float_basis(sf, &pivots)) {
      if (const auto colval = certify(sf, *basis)) {
        LpSolution sol;
        sol.assignment = original_values(sf, *colval);
        if (lp.satisfied_by(sol.assignment)) {
          sol.optimum = lp.objective_value(sol.assignment);
          sol.status = LpStatus::Optimal;
          sol.pivots = pivots;
          sol.certified_from_float = true;
          return sol;
        }
      }
    }
  }
  bool rejected = false;
  LpSolution sol = exact_simplex(lp, sf, true, &rejected);
  pivots += sol.pivots;
  if (rejected) {
    sol = exact_simplex(lp, sf, false, &rejected);
    pivots += sol.pivots;
  }
  sol.pivots = pivots;
  return sol;
}

}  // namespace edist::conic
