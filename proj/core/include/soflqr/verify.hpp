#pragma once

#include <optional>

#include <Eigen/Dense>

#include "soflqr/problem.hpp"

/// Reference implementations used to cross-check the analytic machinery.
/// They favour independence over speed and are meant for small problems.
namespace soflqr::verify {

inline constexpr double kDefaultGradientStep = 1e-5;
inline constexpr double kDefaultHessianStep = 1e-4;

struct OracleReport {
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
};

/// Entry-wise comparison; relative error uses |reference| with a floor of
/// 1e-8 * max(1, max|reference|) so exact zeros do not divide by zero.
OracleReport compare(const Eigen::Ref<const Eigen::MatrixXd>& value,
                     const Eigen::Ref<const Eigen::MatrixXd>& reference);

/// Central differences of the cost, (J(K + h E_ij) - J(K - h E_ij)) / 2h.
/// If a perturbation leaves the stabilizing set, h is halved once before
/// giving up with InfiniteCostError. Throws InvalidArgumentError for h <= 0.
Eigen::MatrixXd fd_gradient(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                            double h = kDefaultGradientStep);

/// Central differences of the analytic gradient, symmetrized; column j*m + i
/// differentiates with respect to k_ij.
Eigen::MatrixXd fd_hessian(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                           double h = kDefaultHessianStep);

/// Dense solve of (I kron Ac^T + Ac^T kron I) vec(P) = -vec(Qc). n <= 8.
/// Throws NumericalError when the Kronecker sum is singular.
Eigen::MatrixXd kron_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& Ac,
                              const Eigen::Ref<const Eigen::MatrixXd>& Qc);

struct AreSolution {
  Eigen::MatrixXd gain;  // m x n, u = gain * x
  Eigen::MatrixXd P;
  int iterations = 0;
};

/// Gain K with A + B K Hurwitz, from the Lyapunov equation
///   (A + s I) X + X (A + s I)^T = 2 B B^T,  K = -B^T X^{-1},
/// with s > 0 large enough that -(A + s I) is Hurwitz. Requires (A, B)
/// controllable; throws NumericalError otherwise.
Eigen::MatrixXd stabilizing_state_feedback(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                           const Eigen::Ref<const Eigen::MatrixXd>& B);

/// Kleinman iteration for the continuous ARE on (A, B, Q, R): alternate
///   (A + B K)^T P + P (A + B K) + Q + K^T R K = 0,   K <- -R^{-1} B^T P
/// until the gain changes by at most 1e-12 (relative). The plant's C is
/// ignored (the full-state case). Starts from `initial` when given, else from
/// zero if A is Hurwitz, else from stabilizing_state_feedback.
AreSolution are_gain(const Plant& plant, const CostSpec& cost,
                     const std::optional<Eigen::MatrixXd>& initial = std::nullopt);

/// Composite Simpson estimate of  integral_0^T Tr(e^{Ac t}^T Qc e^{Ac t} X0) dt.
/// steps is rounded up to an even number. Throws InfiniteCostError for an
/// unstable K.
double quadrature_cost(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                       double horizon, int steps);

}  // namespace soflqr::verify
