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


// edist: command-line front end. Exit codes: 0 success, 2 malformed input or
// usage, 3 solver failure or non-convergence, 1 anything else.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edist/distill.hpp"
#include "edist/fitkit.hpp"
#include "edist/iso.hpp"
#include "edist/rains.hpp"
#include "edist/secord.hpp"
#include "edist/stateio.hpp"

using namespace edist;
using io::CsvWriter;
using io::format_double;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

// Signals a solver-side failure that was reported rather than thrown.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const CsvWriter& csv, const std::string& out) {
  if (out.empty()) {
    csv.write(std::cout);
  } else {
    csv.write_file(out);
  }
}

std::string fmt(double x) { return format_double(x); }

qmat::HermOp load(const std::string& path, bool operator_mode) {
  return io::read_state_file(path, io::ReadOptions{operator_mode});
}

rains::RainsOptions rains_options(double tol, int max_iter) {
  if (!(tol > 0.0)) throw io::InputError("--tol must be positive");
  if (max_iter < 1) throw io::InputError("--max-iter must be positive");
  rains::RainsOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return o;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw io::InputError("--n-list: not an integer: '" + item + "'");
    }
    if (used != item.size() || n < 1) throw io::InputError("--n-list: entries must be positive integers");
    out.push_back(n);
  }
  if (out.empty()) throw io::InputError("--n-list is empty");
  return out;
}

// Rains bound of an isotropic state; zero where the state is PPT.
double iso_rains_or_zero(int d, double f) { return f > 1.0 / d ? iso::iso_rains_closed(d, f) : 0.0; }

struct Common {
  std::string out;
  bool operator_mode = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot and second-order distillable entanglement under PPT operations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "edist 1.0");

  // oneshot
  std::string state_path;
  double eps = 0.0;
  Common common;
  auto* oneshot = app.add_subcommand("oneshot", "One-shot PPT-assisted distillable entanglement of a state file");
  oneshot->add_option("state", state_path, "state file (JSON)")->required();
  oneshot->add_option("--eps", eps, "infidelity tolerance in (0,1)")->required();
  oneshot->add_option("--out", common.out, "CSV output path (default stdout)");
  oneshot->add_flag("--operator", common.operator_mode, "skip the unit-trace check");

  // rains
  double tol = 1e-6;
  int max_iter = 500;
  std::string trace_csv;
  auto* rains_cmd = app.add_subcommand("rains", "Rains bound by cutting planes, with a certified bracket");
  rains_cmd->add_option("state", state_path, "state file (JSON)")->required();
  rains_cmd->add_option("--tol", tol, "bracket width in nats")->capture_default_str();
  rains_cmd->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
  rains_cmd->add_option("--trace-csv", trace_csv, "per-iteration bracket CSV");
  rains_cmd->add_option("--out", common.out, "CSV output path (default stdout)");
  rains_cmd->add_flag("--operator", common.operator_mode, "skip the unit-trace check");

  // gap2
  auto* gap2 = app.add_subcommand("gap2", "Twice the one-copy lower Rains bound against the two-copy upper bound");
  gap2->add_option("state", state_path, "state file (JSON), d_A*d_B <= 9")->required();
  gap2->add_option("--tol", tol, "bracket width in nats")->capture_default_str();
  gap2->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
  gap2->add_option("--out", common.out, "CSV output path (default stdout)");

  // iso
  int d = 3;
  std::string f_text = "9/10";
  std::string eps_text = "1/1000";
  int n_max = 0;
  int n_min = 1;
  auto* iso_cmd = app.add_subcommand("iso", "Exact n-copy LP sweep for isotropic states");
  iso_cmd->add_option("--d", d, "local dimension")->capture_default_str();
  iso_cmd->add_option("--F", f_text, "fidelity, as p/q or decimal")->capture_default_str();
  iso_cmd->add_option("--eps", eps_text, "infidelity tolerance, as p/q or decimal")->capture_default_str();
  iso_cmd->add_option("--n-max", n_max, "largest copy count")->required();
  iso_cmd->add_option("--n-min", n_min, "smallest copy count")->capture_default_str();
  iso_cmd->add_option("--out", common.out, "CSV output path (default stdout)");

  // secord
  std::vector<std::string> iso_spec;
  std::string n_list = "1,10,100,1000";
  double secord_eps = 0.0;
  auto* secord_cmd = app.add_subcommand("secord", "Second-order upper and lower expansions per copy");
  secord_cmd->add_option("state", state_path, "state file (JSON)");
  secord_cmd->add_option("--iso", iso_spec, "isotropic state instead of a file: d F")->expected(2);
  secord_cmd->add_option("--eps", secord_eps, "infidelity tolerance in (0,1)")->required();
  secord_cmd->add_option("--n-list", n_list, "comma-separated copy counts")->capture_default_str();
  secord_cmd->add_option("--tol", tol, "Rains bracket width in nats")->default_val(1e-7);
  secord_cmd->add_option("--out", common.out, "CSV output path (default stdout)");

  // fit
  std::string fit_in;
  int fit_n_min = 1;
  bool no_compare = false;
  auto* fit = app.add_subcommand("fit", "Fit c1 + c2/sqrt(n) + c3 log2(n)/n + c4/n to a sweep CSV");
  fit->add_option("--in", fit_in, "sweep CSV with columns n and rate_per_copy_bits")->required();
  fit->add_option("--n-min", fit_n_min, "ignore rows with smaller n")->capture_default_str();
  fit->add_option("--out", common.out, "fit report CSV");
  fit->add_option("--d", d, "isotropic comparison: local dimension")->capture_default_str();
  fit->add_option("--F", f_text, "isotropic comparison: fidelity")->capture_default_str();
  fit->add_option("--eps", eps_text, "isotropic comparison: tolerance")->capture_default_str();
  fit->add_flag("--no-compare", no_compare, "skip the second-order comparison rows");

  // appendix
  double theta_min = std::numbers::pi / 12;
  double theta_max = std::numbers::pi / 6;
  int steps = 50;
  double app_eps = 1.0 - std::sqrt(3.0) / 2.0;
  auto* appendix = app.add_subcommand("appendix", "sdp1 against sdp2 on the two-qubit family rho_theta");
  appendix->add_option("--theta-min", theta_min, "first angle")->capture_default_str();
  appendix->add_option("--theta-max", theta_max, "last angle")->capture_default_str();
  appendix->add_option("--steps", steps, "number of angles")->capture_default_str();
  appendix->add_option("--eps", app_eps, "infidelity tolerance")->capture_default_str();
  appendix->add_option("--out", common.out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (oneshot->parsed()) {
      const auto rho = load(state_path, common.operator_mode);
      const auto r = distill::one_shot_ppt_ed(rho, eps);
      CsvWriter csv({"eta", "rate_bits", "rate_integer_bits"});
      csv.add_row({fmt(r.eta), fmt(r.rate_bits), fmt(r.rate_integer_bits)});
      emit(csv, common.out);
    } else if (rains_cmd->parsed()) {
      const auto rho = load(state_path, common.operator_mode);
      const auto r = rains::rains_bound(rho, rains_options(tol, max_iter));
      if (!trace_csv.empty()) {
        CsvWriter t({"iter", "lower_nats", "upper_nats", "tangents"});
        for (const auto& row : r.trace) {
          t.add_row({std::to_string(row.iter), fmt(row.lower_nats), fmt(row.upper_nats), std::to_string(row.tangents)});
        }
        t.write_file(trace_csv);
      }
      CsvWriter csv({"lower_bits", "upper_bits", "status", "iterations"});
      csv.add_row({fmt(r.lower_bits()), fmt(r.upper_bits()), r.converged ? "converged" : "not_converged",
                   std::to_string(r.iterations)});
      emit(csv, common.out);
      if (!r.converged) throw SolverFailure("rains: bracket did not close within the iteration cap");
    } else if (gap2->parsed()) {
      const auto rho = load(state_path, false);
      const auto g = rains::two_copy_gap(rho, rains_options(tol, max_iter));
      const double lower = g.two_times_lower_1 / std::numbers::ln2;
      const double upper = g.upper_2 / std::numbers::ln2;
      const double gap = upper - lower;
      CsvWriter csv({"two_lower_1_bits", "upper_2_bits", "gap_bits", "sign"});
      csv.add_row({fmt(lower), fmt(upper), fmt(gap), gap < 0 ? "negative" : (gap > 0 ? "positive" : "zero")});
      emit(csv, common.out);
    } else if (iso_cmd->parsed()) {
      if (n_max < 1 || n_max > iso::kMaxCopies) {
        throw io::InputError("--n-max must lie in [1, " + std::to_string(iso::kMaxCopies) + "]");
      }
      if (n_min < 1 || n_min > n_max) throw io::InputError("--n-min must lie in [1, n-max]");
      iso::IsoParams p{d, conic::parse_rational(f_text), 1, conic::parse_rational(eps_text)};
      iso::validate(p);
      const double f = conic::to_double(p.fidelity);
      const std::string rains_bits = fmt(iso_rains_or_zero(d, f));
      const std::string hashing_bits = fmt(iso::iso_hashing(d, f));
      CsvWriter csv({"n", "eta_num", "eta_den", "rate_bits", "rate_per_copy_bits", "rains_bits", "hashing_bits"});
      for (int n = n_min; n <= n_max; ++n) {
        p.n = n;
        const auto r = iso::iso_lp(p);
        csv.add_row({std::to_string(n), r.eta.get_num().get_str(), r.eta.get_den().get_str(), fmt(r.rate_bits),
                     fmt(r.rate_bits / n), rains_bits, hashing_bits});
      }
      emit(csv, common.out);
    } else if (secord_cmd->parsed()) {
      if (state_path.empty() == iso_spec.empty()) throw io::InputError("secord: give either a state file or --iso d F");
      qmat::HermOp rho;
      if (!iso_spec.empty()) {
        int di = 0;
        try {
          di = std::stoi(iso_spec[0]);
        } catch (const std::exception&) {
          throw io::InputError("--iso: d must be an integer");
        }
        rho = iso::iso_state(di, conic::to_double(conic::parse_rational(iso_spec[1])));
      } else {
        rho = load(state_path, false);
      }
      const auto ns = parse_n_list(n_list);
      secord::SecordOptions so;
      so.rains = rains_options(tol, so.rains.max_iter);
      const auto data = secord::upper_data(rho, so);
      CsvWriter csv({"n", "upper_pc", "lower_pc", "rains", "hashing"});
      for (int n : ns) {
        const auto up = secord::upper_bound(data, n, secord_eps);
        const auto lo = secord::lower_bound(rho, n, secord_eps);
        csv.add_row({std::to_string(n), fmt(up.value_bits / n), fmt(lo.value_bits / n), fmt(up.first_order_bits),
                     fmt(lo.first_order_bits)});
      }
      emit(csv, common.out);
      std::cerr << "note: " << secord::SecondOrderBound::caveat << "; upper uses a single Rains minimizer\n";
    } else if (fit->parsed()) {
      const auto table = io::read_csv_file(fit_in);
      const int cn = table.column("n");
      const int cr = table.column("rate_per_copy_bits");
      std::vector<fitkit::RatePoint> pts;
      for (const auto& row : table.rows) {
        fitkit::RatePoint pt;
        try {
          pt.n = std::stoi(row[cn]);
          pt.rate_per_copy_bits = std::stod(row[cr]);
        } catch (const std::exception&) {
          throw io::InputError("fit: malformed row in " + fit_in);
        }
        if (pt.n >= fit_n_min) pts.push_back(pt);
      }
      const auto curve = fitkit::fit_rate_curve(pts);
      const auto& c = curve.coefficients;
      CsvWriter table_out({"curve", "c1", "c2", "c3", "c4"});
      table_out.add_row({"fit", fmt(c[0]), fmt(c[1]), fmt(c[2]), fmt(c[3])});
      if (!no_compare) {
        const double eps_d = conic::to_double(conic::parse_rational(eps_text));
        const auto rho = iso::iso_state(d, conic::to_double(conic::parse_rational(f_text)));
        const auto up = secord::upper_bound(rho, 1, eps_d);
        const auto lo = secord::lower_bound(rho, 1, eps_d);
        table_out.add_row({"second_order_upper", fmt(up.first_order_bits), fmt(up.second_order_bits), "", ""});
        table_out.add_row({"second_order_lower", fmt(lo.first_order_bits), fmt(lo.second_order_bits), "", ""});
      }
      table_out.write(std::cout);
      std::cout << "residual_norm," << fmt(curve.residual_norm) << "\n";
      if (!common.out.empty()) {
        CsvWriter rep({"item", "n", "value"});
        for (int j = 0; j < 4; ++j) rep.add_row({"c" + std::to_string(j + 1), "", fmt(c[j])});
        rep.add_row({"residual_norm", "", fmt(curve.residual_norm)});
        for (std::size_t i = 0; i < pts.size(); ++i) {
          rep.add_row({"residual", std::to_string(pts[i].n), fmt(curve.residuals[i])});
        }
        rep.write_file(common.out);
      }
    } else if (appendix->parsed()) {
      if (steps < 1) throw io::InputError("--steps must be at least 1");
      if (!(theta_max >= theta_min)) throw io::InputError("--theta-max must not be below --theta-min");
      CsvWriter csv({"theta", "sdp1", "sdp2", "gap"});
      double worst = -qmat::kInfinity;
      for (int s = 0; s < steps; ++s) {
        const double theta = steps == 1 ? theta_min : theta_min + (theta_max - theta_min) * s / (steps - 1);
        const auto rho = distill::appendix_state(theta);
        const double a = distill::sdp1(rho, app_eps);
        const double b = distill::sdp2(rho, app_eps);
        worst = std::max(worst, a - b);
        csv.add_row({fmt(theta), fmt(a), fmt(b), fmt(a - b)});
      }
      emit(csv, common.out);
      std::cerr << "max_gap " << fmt(worst) << "\n";
    }
  } catch (const io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const conic::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const qmat::NumericalError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
