#pragma once

#include <Eigen/Dense>

#include "soflqr/problem.hpp"

namespace soflqr {

struct LineSearchParams {
  double alpha = 0.2;  // in (0, 0.5)
  double beta = 0.1;   // in (0, 1)
  double min_step = 1e-16;
};

struct LineSearchResult {
  Eigen::MatrixXd K;
  double step_size = 1.0;
  int evaluations = 0;
  /// J(K') - J(K) < 0
  double cost_decrease = 0.0;
  CostEvaluation at_new;
};

/// Backtracking from t = 1, shrinking t <- beta t, until
///   J(K + t dK) - J(K) < alpha t <dJ/dK, dK>   and   min eig(Pg(K + t dK)) > 0.
/// Trial points outside the stabilizing set are rejected.
/// Throws LineSearchStalledError once t falls below params.min_step.
LineSearchResult line_search(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                             const CostEvaluation& at_K,
                             const Eigen::Ref<const Eigen::MatrixXd>& direction,
                             const Eigen::Ref<const Eigen::MatrixXd>& grad,
                             const LineSearchParams& params);

LineSearchResult line_search(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                             const Eigen::Ref<const Eigen::MatrixXd>& direction,
                             const Eigen::Ref<const Eigen::MatrixXd>& grad,
                             const LineSearchParams& params);

}  // namespace soflqr
