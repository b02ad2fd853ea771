#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "soflqr/errors.hpp"
#include "soflqr/examples.hpp"
#include "soflqr/first_order.hpp"
#include "soflqr/hessian.hpp"
#include "soflqr/newton.hpp"
#include "soflqr/problem_io.hpp"
#include "soflqr/verify.hpp"

namespace soflqr::cli {

namespace {

struct SolveOptions {
  std::string problem;
  std::optional<std::string> method;
  std::optional<double> tol;
  std::optional<double> pt_eps;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> max_iters;
  std::string trace;
  std::string out;
};

struct CheckOptions {
  std::string problem;
  double perturb = 0.0;  // test hook: corrupts the analytic derivative
};

struct ExamplesOptions {
  std::string name;
  std::string out;
};

// A path that exists wins over a built-in name.
ProblemDefinition resolve_problem(const std::string& source) {
  if (std::filesystem::exists(source)) return load_problem(source);
  for (const auto& name : builtin_example_names()) {
    if (name == source) return builtin_example(name);
  }
  throw ParseError("'" + source + "' is neither a readable file nor a built-in example", "");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw SofError("cannot write '" + path + "'");
  file << text;
}

void print_matrix(std::ostream& out, const Eigen::MatrixXd& M) {
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    out << "  [";
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      out << (c ? ", " : "") << std::setw(14) << M(r, c);
    }
    out << "]\n";
  }
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  ProblemDefinition def = resolve_problem(opt.problem);
  SolverParams& p = def.params;
  if (opt.method) {
    try {
      p.method = parse_method(*opt.method);
    } catch (const InvalidArgumentError& e) {
      throw ParseError(std::string("--method: ") + e.what(), "method");
    }
  }
  if (opt.tol) p.tol = *opt.tol;
  if (opt.pt_eps) p.pt_eps = *opt.pt_eps;
  if (opt.alpha) p.alpha = *opt.alpha;
  if (opt.beta) p.beta = *opt.beta;
  if (opt.max_iters) p.max_iters = *opt.max_iters;

  const SolveResult result = p.method == Method::Newton
                                 ? newton_solve(def.problem, def.K0, p)
                                 : first_order_solve(def.problem, def.K0, p);

  for (const auto& w : result.warnings) err << "warning: " << w << '\n';

  const auto precision = out.precision();
  out << std::setprecision(10);
  out << "problem: " << def.name << '\n'
      << "method: " << to_string(p.method) << '\n'
      << "termination: " << to_string(result.termination) << '\n'
      << "iterations: " << result.iterations << '\n'
      << "line-search evaluations: " << result.line_search_evaluations << '\n'
      << "initial J: " << result.trace.records.front().cost << '\n'
      << "final J: " << result.cost << '\n'
      << "final measure: " << result.final_measure << '\n'
      << "K:\n";
  print_matrix(out, result.K);
  out.precision(precision);

  if (!opt.out.empty()) write_text(opt.out, dump_result(def, result));
  if (!opt.trace.empty()) {
    std::ofstream file(opt.trace);
    if (!file) throw SofError("cannot write '" + opt.trace + "'");
    write_trace_csv(file, result.trace);
  }
  return result.converged() ? kConverged : kNotConverged;
}

// Shared preamble for the derivative checks: K0 must be stabilizing.
void require_stabilizing(const ProblemDefinition& def) {
  if (!is_stabilizing(def.problem.plant(), def.K0)) {
    throw UnstableGainError(
        "K0 does not stabilize the closed loop; derivatives are only defined on the set of "
        "stabilizing gains, and a stabilizing initial gain is assumed to be supplied");
  }
}

int report_check(std::ostream& out, const char* what, const verify::OracleReport& r,
                 double threshold) {
  const bool ok = r.max_rel_error <= threshold;
  out << what << " check: max relative error " << std::scientific << std::setprecision(3)
      << r.max_rel_error << " at entry (" << r.row << ", " << r.col << "), max absolute error "
      << r.max_abs_error << ", threshold " << threshold << ": " << (ok ? "PASS" : "FAIL")
      << std::defaultfloat << '\n';
  return ok ? kConverged : kCheckFailed;
}

int cmd_check_gradient(const CheckOptions& opt, std::ostream& out) {
  const ProblemDefinition def = resolve_problem(opt.problem);
  require_stabilizing(def);
  Eigen::MatrixXd analytic = gradient(def.problem, def.K0).grad;
  analytic(0, 0) += opt.perturb * (1.0 + std::abs(analytic(0, 0)));
  const Eigen::MatrixXd fd = verify::fd_gradient(def.problem, def.K0);
  return report_check(out, "gradient", verify::compare(analytic, fd), kGradientCheckThreshold);
}

int cmd_check_hessian(const CheckOptions& opt, std::ostream& out) {
  const ProblemDefinition def = resolve_problem(opt.problem);
  require_stabilizing(def);
  const GradientPair gp = gradient(def.problem, def.K0);
  HessianMatrix H = hessian(def.problem, def.K0, gp);
  H.value(0, 0) += opt.perturb * (1.0 + std::abs(H.value(0, 0)));
  const Eigen::MatrixXd fd = verify::fd_hessian(def.problem, def.K0);
  out << "hessian asymmetry before symmetrization: " << std::scientific << std::setprecision(3)
      << H.asymmetry << std::defaultfloat << '\n';
  return report_check(out, "hessian", verify::compare(H.value, fd), kHessianCheckThreshold);
}

int cmd_examples(const ExamplesOptions& opt, std::ostream& out) {
  ProblemDefinition def = [&] {
    try {
      return builtin_example(opt.name);
    } catch (const InvalidArgumentError& e) {
      throw ParseError(e.what(), "name");
    }
  }();
  const std::string text = dump_problem(def);
  if (opt.out.empty()) {
    out << text;
  } else {
    write_text(opt.out, text);
  }
  return kConverged;
}

void add_problem_argument(CLI::App* cmd, std::string& target) {
  cmd->add_option("problem", target, "Problem file (JSON) or built-in example name")->required();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured static output feedback LQR solver"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Optimize the gain starting from K0");
  add_problem_argument(solve, solve_opt.problem);
  solve->add_option("--method", solve_opt.method, "newton or grad");
  solve->add_option("--tol", solve_opt.tol, "Stopping tolerance");
  solve->add_option("--pt-eps", solve_opt.pt_eps, "Eigenvalue floor for the Hessian");
  solve->add_option("--alpha", solve_opt.alpha, "Armijo parameter in (0, 0.5)");
  solve->add_option("--beta", solve_opt.beta, "Backtracking factor in (0, 1)");
  solve->add_option("--max-iters", solve_opt.max_iters, "Iteration limit");
  solve->add_option("--trace", solve_opt.trace, "Write the per-iteration trace as CSV");
  solve->add_option("--out", solve_opt.out, "Write the result as JSON");

  CheckOptions grad_opt;
  auto* check_grad = app.add_subcommand("check-gradient", "Compare the gradient at K0 with finite differences");
  add_problem_argument(check_grad, grad_opt.problem);
  check_grad->add_option("--perturb", grad_opt.perturb)->group("");

  CheckOptions hess_opt;
  auto* check_hess = app.add_subcommand("check-hessian", "Compare the Hessian at K0 with finite differences");
  add_problem_argument(check_hess, hess_opt.problem);
  check_hess->add_option("--perturb", hess_opt.perturb)->group("");

  ExamplesOptions ex_opt;
  auto* examples = app.add_subcommand("examples", "Emit a built-in problem file (example1, example2)");
  examples->add_option("name", ex_opt.name, "Example name")->required();
  examples->add_option("--out", ex_opt.out, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kParseError;
  }

  try {
    if (*solve) return cmd_solve(solve_opt, out, err);
    if (*check_grad) return cmd_check_gradient(grad_opt, out);
    if (*check_hess) return cmd_check_hessian(hess_opt, out);
    return cmd_examples(ex_opt, out);
  } catch (const ParseError& e) {
    err << "parse error";
    if (!e.field().empty()) err << " in '" << e.field() << "'";
    if (e.line() > 0) err << " (line " << e.line() << ", column " << e.column() << ")";
    err << ": " << e.what() << '\n';
    return kParseError;
  } catch (const InvalidArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kParseError;
  } catch (const UnstableGainError& e) {
    err << "unstable initial gain: " << e.what() << '\n';
    return kInfeasibleInput;
  } catch (const InfeasibleGainError& e) {
    err << "infeasible initial gain: " << e.what() << '\n';
    return kInfeasibleInput;
  } catch (const InfeasibleConstraintsError& e) {
    err << "infeasible constraints: " << e.what() << '\n';
    return kInfeasibleInput;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace soflqr::cli
