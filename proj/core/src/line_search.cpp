#include "soflqr/line_search.hpp"

#include "soflqr/errors.hpp"
#include "soflqr/linalg.hpp"

namespace soflqr {

LineSearchResult line_search(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                             const CostEvaluation& at_K,
                             const Eigen::Ref<const Eigen::MatrixXd>& direction,
                             const Eigen::Ref<const Eigen::MatrixXd>& grad,
                             const LineSearchParams& params) {
  if (!(params.alpha > 0.0 && params.alpha < 0.5)) {
    throw InvalidArgumentError("line_search: alpha must lie in (0, 0.5)");
  }
  if (!(params.beta > 0.0 && params.beta < 1.0)) {
    throw InvalidArgumentError("line_search: beta must lie in (0, 1)");
  }
  problem.check_gain(direction);
  problem.check_gain(grad);

  const double slope = frobenius_inner(grad, direction);
  LineSearchResult out;
  double t = 1.0;
  while (t >= params.min_step) {
    ++out.evaluations;
    auto change = evaluate_cost_change(problem, K, at_K, t * direction);
    // Unstable trial points are rejected like any other failed test.
    if (change && change->delta < params.alpha * t * slope &&
        min_symmetric_eigenvalue(change->trial.Pg.value) > 0.0) {
      out.K = K + t * direction;
      out.step_size = t;
      out.cost_decrease = change->delta;
      out.at_new = std::move(change->trial);
      return out;
    }
    t *= params.beta;
  }
  throw LineSearchStalledError("line search stalled: step size fell below " +
                               std::to_string(params.min_step) + " after " +
                               std::to_string(out.evaluations) + " evaluations");
}

LineSearchResult line_search(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                             const Eigen::Ref<const Eigen::MatrixXd>& direction,
                             const Eigen::Ref<const Eigen::MatrixXd>& grad,
                             const LineSearchParams& params) {
  return line_search(problem, K, evaluate_cost(problem, K), direction, grad, params);
}

}  // namespace soflqr
