#include "soflqr/first_order.hpp"

#include <Eigen/Cholesky>

#include "soflqr/errors.hpp"
#include "soflqr/line_search.hpp"
#include "soflqr/linalg.hpp"
#include "solver_common.hpp"

namespace soflqr {

GradientPair gradient(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K, const LyapunovOperator& op) {
  GradientPair gp;
  gp.Pg = op.solve_primal(effective_weight(cost, plant, K));
  gp.Gamma = op.solve_adjoint(cost.X0);
  gp.grad = 2.0 * (plant.B.transpose() * gp.Pg.value + cost.R * K * plant.C) * gp.Gamma.value *
            plant.C.transpose();
  return gp;
}

GradientPair gradient(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K) {
  const LyapunovOperator op(closed_loop(plant, K));
  return gradient(plant, cost, K, op);
}

GradientPair gradient(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K) {
  return gradient(problem.plant(), problem.cost_spec(), K);
}

GradientProjection project_gradient_with_dual(const Eigen::Ref<const Eigen::MatrixXd>& grad,
                                              const FlatConstraints& flat) {
  if (flat.empty()) return {grad, Eigen::VectorXd::Zero(0)};
  if (grad.size() != flat.matrix.cols()) {
    throw DimensionError("project_gradient: gradient has " + std::to_string(grad.size()) +
                         " entries, constraints expect " + std::to_string(flat.matrix.cols()));
  }
  const Eigen::MatrixXd& A = flat.matrix;
  Eigen::LLT<Eigen::MatrixXd> gram(A * A.transpose());
  if (gram.info() != Eigen::Success) {
    throw NumericalError("project_gradient: constraint matrix is rank deficient");
  }
  const Eigen::VectorXd g = vec(grad);
  GradientProjection out;
  out.dual = gram.solve(A * g);
  out.projected = unvec(g - A.transpose() * out.dual, grad.rows(), grad.cols());
  return out;
}

Eigen::MatrixXd project_gradient(const Eigen::Ref<const Eigen::MatrixXd>& grad,
                                 const FlatConstraints& flat) {
  return project_gradient_with_dual(grad, flat).projected;
}

std::vector<Eigen::MatrixXd> constraint_multipliers(const Eigen::Ref<const Eigen::VectorXd>& dual,
                                                    const ConstraintSet& constraints,
                                                    const FlatConstraints& flat) {
  if (dual.size() != flat.rows()) {
    throw DimensionError("constraint_multipliers: dual has " + std::to_string(dual.size()) +
                         " entries, expected " + std::to_string(flat.rows()));
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(flat.stacked_rows);
  for (std::size_t k = 0; k < flat.kept_rows.size(); ++k) full(flat.kept_rows[k]) = dual(k);

  std::vector<Eigen::MatrixXd> out;
  Eigen::Index offset = 0;
  for (const auto& c : constraints.constraints()) {
    const Eigen::Index r = c.rhs.size();
    out.push_back(unvec(full.segment(offset, r), c.rhs.rows(), c.rhs.cols()));
    offset += r;
  }
  return out;
}

SolveResult first_order_solve(const SofProblem& problem,
                              const Eigen::Ref<const Eigen::MatrixXd>& K0,
                              const SolverParams& params) {
  const auto start = detail::Clock::now();
  CostEvaluation at = detail::start_solve(problem, K0, params);
  const FlatConstraints& flat = problem.flat_constraints();
  const LineSearchParams ls_params{params.alpha, params.beta};

  SolveResult result;
  if (!flat.homogeneous()) {
    result.warnings.emplace_back(
        "constraints have a nonzero right-hand side; the gradient is projected onto the "
        "homogeneous constraint subspace so iterates stay on the affine feasible set");
  }
  Eigen::MatrixXd K = K0;
  result.trace.records.push_back(detail::initial_record(at));
  detail::CostAccumulator accumulated(at.cost);

  while (true) {
    const GradientPair gp = gradient(problem.plant(), problem.cost_spec(), K,
                                     LyapunovOperator(at.closed_loop));
    const Eigen::MatrixXd direction = project_gradient(gp.grad, flat);
    const double norm = direction.norm();
    result.trace.records.back().gradient_norm = norm;
    result.final_measure = norm;

    if (norm <= params.tol) {
      result.termination = Termination::Converged;
      break;
    }
    if (result.iterations >= params.max_iters) {
      result.termination = Termination::MaxIterations;
      break;
    }

    LineSearchResult ls;
    try {
      ls = line_search(problem, K, at, -direction, gp.grad, ls_params);
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
    rec.step_norm = ls.step_size * norm;
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
