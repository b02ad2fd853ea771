#include "soflqr/newton.hpp"

#include <Eigen/LU>

#include "soflqr/errors.hpp"
#include "soflqr/first_order.hpp"
#include "soflqr/line_search.hpp"
#include "soflqr/linalg.hpp"
#include "solver_common.hpp"

namespace soflqr {

NewtonStep newton_step(const Eigen::Ref<const Eigen::MatrixXd>& H,
                       const Eigen::Ref<const Eigen::MatrixXd>& G, const FlatConstraints& flat) {
  const Eigen::Index n = G.size();
  if (H.rows() != n || H.cols() != n) {
    throw DimensionError("newton_step: curvature matrix must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  }
  const Eigen::Index r = flat.rows();
  if (r > 0 && flat.matrix.cols() != n) {
    throw DimensionError("newton_step: constraint matrix has " +
                         std::to_string(flat.matrix.cols()) + " columns, expected " +
                         std::to_string(n));
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + r, n + r);
  kkt.topLeftCorner(n, n) = H;
  if (r > 0) {
    kkt.topRightCorner(n, r) = flat.matrix.transpose();
    kkt.bottomLeftCorner(r, n) = flat.matrix;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + r);
  const Eigen::VectorXd g = vec(G);
  rhs.head(n) = -g;

  // Eigen has no symmetric-indefinite (Bunch-Kaufman) factorization; full
  // pivoting LU gives a reliable rank test on the bordered matrix instead.
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (lu.rank() < n + r) throw NumericalError("newton_step: KKT matrix is singular");
  const Eigen::VectorXd sol = lu.solve(rhs);

  NewtonStep step;
  const Eigen::VectorXd d = sol.head(n);
  step.delta = unvec(d, G.rows(), G.cols());
  step.dual = sol.tail(r);
  step.predicted_decrease = -(g.dot(d) + 0.5 * d.dot(H * d));
  return step;
}

NewtonStep newton_step(const PTMatrix& H, const Eigen::Ref<const Eigen::MatrixXd>& G,
                       const FlatConstraints& flat) {
  return newton_step(H.value, G, flat);
}

SolveResult newton_solve(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K0,
                         const SolverParams& params) {
  const auto start = detail::Clock::now();
  CostEvaluation at = detail::start_solve(problem, K0, params);
  if (!(params.pt_eps > 0.0)) throw InvalidArgumentError("pt_eps must be positive");
  const FlatConstraints& flat = problem.flat_constraints();
  const Plant& plant = problem.plant();
  const CostSpec& spec = problem.cost_spec();
  const LineSearchParams ls_params{params.alpha, params.beta};

  SolveResult result;
  Eigen::MatrixXd K = K0;
  result.trace.records.push_back(detail::initial_record(at));
  detail::CostAccumulator accumulated(at.cost);

  while (true) {
    const LyapunovOperator op(at.closed_loop);
    const GradientPair gp = gradient(plant, spec, K, op);
    const HessianMatrix H = hessian(plant, spec, K, gp, op);
    if (H.warning) {
      result.warnings.push_back("iteration " + std::to_string(result.iterations) + ": " + *H.warning);
    }
    const NewtonStep step = newton_step(pt_matrix(H.value, params.pt_eps), gp.grad, flat);
    const double step_norm = step.delta.norm();

    result.trace.records.back().gradient_norm = project_gradient(gp.grad, flat).norm();
    result.final_measure = step_norm;

    if (step_norm <= params.tol) {
      result.termination = Termination::Converged;
      break;
    }
    if (result.iterations >= params.max_iters) {
      result.termination = Termination::MaxIterations;
      break;
    }

    LineSearchResult ls;
    try {
      ls = line_search(problem, K, at, step.delta, gp.grad, ls_params);
    } catch (const LineSearchStalledError& e) {
      result.termination = Termination::LineSearchStalled;
      result.warnings.emplace_back(e.what());
      break;
    }

    ++result.iterations;
    result.line_search_evaluations += ls.evaluations;
    K = ls.K;
    at = std::move(ls.at_new);

    IterationRecord rec;
    rec.iteration = result.iterations;
    accumulated.add(ls.cost_decrease);
    rec.cost = accumulated.hi();
    rec.cost_low = accumulated.lo();
    rec.cost_decrease = ls.cost_decrease;
    rec.step_norm = ls.step_size * step_norm;
    rec.step_size = ls.step_size;
    rec.spectral_abscissa = at.abscissa;
    rec.min_eig_pg = min_symmetric_eigenvalue(at.Pg.value);
    rec.evaluations = ls.evaluations;
    rec.seconds = detail::seconds_since(start);
    result.trace.records.push_back(rec);
  }

  result.K = K;
  // Trace costs accumulate exact per-step differences; report a direct
  // evaluation at the final gain.
  result.cost = evaluate_cost(problem, K).cost;
  return result;
}

}  // namespace soflqr
