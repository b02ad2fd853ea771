#pragma once

#include <vector>

#include <Eigen/Dense>

#include "soflqr/lyapunov.hpp"
#include "soflqr/problem.hpp"
#include "soflqr/solve_result.hpp"

namespace soflqr {

struct GradientPair {
  Eigen::MatrixXd grad;  // m x q
  LyapunovSolution Pg;
  LyapunovSolution Gamma;
};

/// dJ/dK = 2 (B^T Pg + R K C) Gamma C^T, with
///   Ac^T Pg + Pg Ac + Qc = 0  and  Ac Gamma + Gamma Ac^T + X0 = 0.
/// Throws NotHurwitzError if K is not stabilizing.
GradientPair gradient(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K);
GradientPair gradient(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K);
/// Variant reusing an existing factorization of A + B K C.
GradientPair gradient(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K,
                      const LyapunovOperator& op);

struct GradientProjection {
  Eigen::MatrixXd projected;  // m x q, satisfies A vec(G*) = 0
  Eigen::VectorXd dual;       // one entry per kept constraint row
};

/// Orthogonal projection of grad onto {G : A vec(G) = 0}:
///   lambda = (A A^T)^{-1} A vec(grad),  G* = grad - unvec(A^T lambda).
/// Throws NumericalError if A A^T is not positive definite.
GradientProjection project_gradient_with_dual(const Eigen::Ref<const Eigen::MatrixXd>& grad,
                                              const FlatConstraints& flat);
Eigen::MatrixXd project_gradient(const Eigen::Ref<const Eigen::MatrixXd>& grad,
                                 const FlatConstraints& flat);

/// Unstacks a dual vector into one multiplier matrix per constraint (shaped
/// like that constraint's rhs). Pruned rows get a zero multiplier.
std::vector<Eigen::MatrixXd> constraint_multipliers(const Eigen::Ref<const Eigen::VectorXd>& dual,
                                                    const ConstraintSet& constraints,
                                                    const FlatConstraints& flat);

/// Projected steepest descent with the stability-guarded backtracking line
/// search. Stops when the projected gradient norm drops to params.tol.
/// Throws UnstableGainError / InfeasibleGainError for a bad K0.
SolveResult first_order_solve(const SofProblem& problem,
                              const Eigen::Ref<const Eigen::MatrixXd>& K0,
                              const SolverParams& params);

}  // namespace soflqr
