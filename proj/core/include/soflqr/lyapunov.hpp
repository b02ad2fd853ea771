#pragma once

#include <Eigen/Dense>

namespace soflqr {

struct LyapunovSolution {
  Eigen::MatrixXd value;
  /// Frobenius norm of the equation residual at `value`.
  double residual_norm = 0.0;
};

/// Schur factorization of a Hurwitz closed-loop matrix Ac, reused for both
/// Lyapunov forms:
///
///   primal:  Ac^T P + P Ac + Q = 0
///   adjoint: Ac G + G Ac^T + X = 0
///
/// Construction costs one complex Schur decomposition; each solve is O(n^3)
/// by back substitution on the triangular factor. Solutions are returned
/// symmetrized when the right-hand side is symmetric; for general (non-
/// symmetric) right-hand sides use the *_general variants.
class LyapunovOperator {
 public:
  /// Throws NotHurwitzError when spectral_abscissa(Ac) >= -kHurwitzTolerance
  /// and NumericalError if the Schur iteration fails.
  explicit LyapunovOperator(const Eigen::Ref<const Eigen::MatrixXd>& Ac);

  Eigen::Index order() const { return Ac_.rows(); }
  const Eigen::MatrixXd& matrix() const { return Ac_; }
  double spectral_abscissa() const { return abscissa_; }

  /// Symmetric Q: returns symmetrized P and the residual.
  LyapunovSolution solve_primal(const Eigen::Ref<const Eigen::MatrixXd>& Q) const;
  /// Symmetric X: returns symmetrized G and the residual.
  LyapunovSolution solve_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& X) const;

  /// Unsymmetrized solves for arbitrary square right-hand sides.
  Eigen::MatrixXd solve_primal_general(const Eigen::Ref<const Eigen::MatrixXd>& Q) const;
  Eigen::MatrixXd solve_adjoint_general(const Eigen::Ref<const Eigen::MatrixXd>& X) const;

  /// L(P) = Ac^T P + P Ac and L*(G) = G Ac^T + Ac G.
  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& P) const;
  Eigen::MatrixXd apply_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& G) const;

 private:
  Eigen::MatrixXd Ac_;
  Eigen::MatrixXcd T_;  // upper triangular
  Eigen::MatrixXcd U_;  // unitary, Ac = U T U^H
  double abscissa_ = 0.0;
};

/// One-shot convenience wrappers around LyapunovOperator.
LyapunovSolution solve_lyapunov_primal(const Eigen::Ref<const Eigen::MatrixXd>& Ac,
                                       const Eigen::Ref<const Eigen::MatrixXd>& Qc);
LyapunovSolution solve_lyapunov_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& Ac,
                                        const Eigen::Ref<const Eigen::MatrixXd>& X0);

}  // namespace soflqr
