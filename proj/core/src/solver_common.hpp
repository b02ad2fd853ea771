#pragma once

#include <chrono>
#include <string>

#include <Eigen/Dense>

#include "soflqr/errors.hpp"
#include "soflqr/linalg.hpp"
#include "soflqr/problem.hpp"
#include "soflqr/solve_result.hpp"

namespace soflqr::detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Validates K0 and the solver parameters and returns the initial evaluation.
inline CostEvaluation start_solve(const SofProblem& problem,
                                  const Eigen::Ref<const Eigen::MatrixXd>& K0,
                                  const SolverParams& params) {
  problem.check_gain(K0);
  if (!(params.tol > 0.0)) throw InvalidArgumentError("tol must be positive");
  if (!(params.alpha > 0.0 && params.alpha < 0.5)) throw InvalidArgumentError("alpha must lie in (0, 0.5)");
  if (!(params.beta > 0.0 && params.beta < 1.0)) throw InvalidArgumentError("beta must lie in (0, 1)");
  if (params.max_iters < 0) throw InvalidArgumentError("max_iters must be non-negative");

  auto at = try_evaluate_cost(problem, K0);
  if (!at) {
    throw UnstableGainError(
        "initial gain does not stabilize the closed loop (spectral abscissa " +
        std::to_string(spectral_abscissa(closed_loop(problem.plant(), K0))) +
        "); the solvers assume a stabilizing initial gain is supplied");
  }
  if (!check_feasible(problem.flat_constraints(), K0)) {
    throw InfeasibleGainError("initial gain violates the structural constraints");
  }
  return *at;
}

/// Running sum J(K_0) + sum of step decreases, kept as an unevaluated hi + lo pair.
class CostAccumulator {
 public:
  explicit CostAccumulator(double start) : hi_(start) {}

  void add(double delta) {
    const double s = hi_ + delta;
    const double bb = s - hi_;
    const double e = (hi_ - (s - bb)) + (delta - bb) + lo_;
    hi_ = s + e;
    lo_ = e - (hi_ - s);
  }

  double hi() const { return hi_; }
  double lo() const { return lo_; }

 private:
  double hi_;
  double lo_ = 0.0;
};

inline IterationRecord initial_record(const CostEvaluation& at) {
  IterationRecord rec;
  rec.iteration = 0;
  rec.cost = at.cost;
  rec.spectral_abscissa = at.abscissa;
  rec.min_eig_pg = min_symmetric_eigenvalue(at.Pg.value);
  return rec;
}

}  // namespace soflqr::detail
