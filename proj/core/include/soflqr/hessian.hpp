#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "soflqr/first_order.hpp"
#include "soflqr/lyapunov.hpp"
#include "soflqr/problem.hpp"

namespace soflqr {

/// Asymmetry (relative, before symmetrization) above which a warning is attached.
inline constexpr double kHessianAsymmetryWarning = 1e-6;

/// Auxiliary Lyapunov solutions for entry (i, j) of K, with E = B J^{ij} C:
///   L  P1     = -Pg E
///   L* Gamma1 = -Gamma E^T
///   L  R1     = -(K C)^T R J^{ij} C
struct HessianColumnTerms {
  Eigen::MatrixXd P1;
  Eigen::MatrixXd Gamma1;
  Eigen::MatrixXd R1;
};

HessianColumnTerms hessian_column_terms(const Plant& plant, const CostSpec& cost,
                                        const Eigen::Ref<const Eigen::MatrixXd>& K,
                                        const GradientPair& gp, const LyapunovOperator& op,
                                        Eigen::Index i, Eigen::Index j);

/// d(dJ/dK)/dk_ij as an m x q matrix.
Eigen::MatrixXd hessian_block(const Plant& plant, const CostSpec& cost,
                              const Eigen::Ref<const Eigen::MatrixXd>& K,
                              const GradientPair& gp, const HessianColumnTerms& terms,
                              Eigen::Index i, Eigen::Index j);

struct HessianMatrix {
  /// mq x mq, column j*m + i holds vec(d(dJ/dK)/dk_ij); exactly symmetric.
  Eigen::MatrixXd value;
  /// ||H_raw - H_raw^T||_F / ||H_raw||_F before symmetrization.
  double asymmetry = 0.0;
  std::optional<std::string> warning;
};

/// Assembles the full Hessian with 3 m q Lyapunov solves on one factorization
/// of A + B K C. gp must have been computed at the same K.
HessianMatrix hessian(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K, const GradientPair& gp);
HessianMatrix hessian(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                      const GradientPair& gp);
/// Variant reusing an existing factorization of A + B K C.
HessianMatrix hessian(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K, const GradientPair& gp,
                      const LyapunovOperator& op);

/// Positive-definite truncation M diag(max(|l|, eps)) M^T of a symmetric matrix.
struct PTMatrix {
  Eigen::MatrixXd value;
  double eigen_floor = 0.0;
  int modified_count = 0;
  Eigen::VectorXd eigenvalues;  // of the input, ascending
  Eigen::MatrixXd eigenvectors;
};

/// Throws InvalidArgumentError for eps <= 0 and NumericalError if the
/// symmetric eigensolver fails.
PTMatrix pt_matrix(const Eigen::Ref<const Eigen::MatrixXd>& H, double eps);

}  // namespace soflqr
