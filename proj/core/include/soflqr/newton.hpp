#pragma once

#include <Eigen/Dense>

#include "soflqr/hessian.hpp"
#include "soflqr/problem.hpp"
#include "soflqr/solve_result.hpp"

namespace soflqr {

struct NewtonStep {
  Eigen::MatrixXd delta;  // m x q
  Eigen::VectorXd dual;   // KKT multiplier, one entry per constraint row
  /// -(g^T d + d^T H d / 2) for the curvature model used.
  double predicted_decrease = 0.0;
};

/// Solves the bordered system
///   [ H  A^T ] [ vec(dK) ]   [ -vec(G) ]
///   [ A   0  ] [    w    ] = [    0    ].
/// Throws NumericalError if the KKT matrix is singular.
NewtonStep newton_step(const Eigen::Ref<const Eigen::MatrixXd>& H,
                       const Eigen::Ref<const Eigen::MatrixXd>& G, const FlatConstraints& flat);
NewtonStep newton_step(const PTMatrix& H, const Eigen::Ref<const Eigen::MatrixXd>& G,
                       const FlatConstraints& flat);

/// Equality-constrained Newton iteration with PT-regularized Hessians:
/// gradient, Hessian, PT-matrix, KKT step, guarded line search; stops once
/// ||vec(dK)|| <= params.tol.
SolveResult newton_solve(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K0,
                         const SolverParams& params);

}  // namespace soflqr
