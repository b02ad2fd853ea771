#include "soflqr/lyapunov.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "soflqr/errors.hpp"
#include "soflqr/linalg.hpp"

namespace soflqr {

namespace {

void require_square(const Eigen::Ref<const Eigen::MatrixXd>& M, Eigen::Index n,
                    const char* what) {
  if (M.rows() != n || M.cols() != n) {
    std::ostringstream msg;
    msg << what << ": expected " << n << "x" << n << ", got " << M.rows() << "x" << M.cols();
    throw DimensionError(msg.str());
  }
}

}  // namespace

LyapunovOperator::LyapunovOperator(const Eigen::Ref<const Eigen::MatrixXd>& Ac) : Ac_(Ac) {
  if (Ac_.rows() != Ac_.cols() || Ac_.size() == 0) {
    throw DimensionError("LyapunovOperator: closed-loop matrix must be square and non-empty");
  }
  if (!Ac_.allFinite()) throw InvalidArgumentError("LyapunovOperator: non-finite entries");

  Eigen::ComplexSchur<Eigen::MatrixXd> schur(Ac_, /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("LyapunovOperator: Schur decomposition did not converge");
  }
  T_ = schur.matrixT();
  U_ = schur.matrixU();
  abscissa_ = T_.diagonal().real().maxCoeff();
  if (!is_hurwitz(abscissa_)) {
    std::ostringstream msg;
    msg << "closed-loop matrix is not Hurwitz (spectral abscissa " << abscissa_ << ")";
    throw NotHurwitzError(msg.str(), abscissa_);
  }
}

// With Ac = U T U^H, Ac^T = U T^H U^H, so Ac^T X + X Ac = -Q becomes
// T^H Y + Y T = -U^H Q U for Y = U^H X U, solved entrywise in increasing
// (i, j) order since T^H is lower and T upper triangular.
Eigen::MatrixXd LyapunovOperator::solve_primal_general(
    const Eigen::Ref<const Eigen::MatrixXd>& Q) const {
  const Eigen::Index n = order();
  require_square(Q, n, "solve_primal");
  const Eigen::MatrixXcd F = -(U_.adjoint() * Q.cast<std::complex<double>>() * U_);
  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::complex<double> rhs = F(i, j);
      for (Eigen::Index k = 0; k < i; ++k) rhs -= std::conj(T_(k, i)) * Y(k, j);
      for (Eigen::Index k = 0; k < j; ++k) rhs -= Y(i, k) * T_(k, j);
      Y(i, j) = rhs / (std::conj(T_(i, i)) + T_(j, j));
    }
  }
  return (U_ * Y * U_.adjoint()).real();
}

// Ac G + G Ac^T = -X becomes T Z + Z T^H = -U^H X U for Z = U^H G U, solved
// in decreasing (i, j) order.
Eigen::MatrixXd LyapunovOperator::solve_adjoint_general(
    const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  const Eigen::Index n = order();
  require_square(X, n, "solve_adjoint");
  const Eigen::MatrixXcd F = -(U_.adjoint() * X.cast<std::complex<double>>() * U_);
  Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      std::complex<double> rhs = F(i, j);
      for (Eigen::Index k = i + 1; k < n; ++k) rhs -= T_(i, k) * Z(k, j);
      for (Eigen::Index k = j + 1; k < n; ++k) rhs -= Z(i, k) * std::conj(T_(j, k));
      Z(i, j) = rhs / (T_(i, i) + std::conj(T_(j, j)));
    }
  }
  return (U_ * Z * U_.adjoint()).real();
}

LyapunovSolution LyapunovOperator::solve_primal(const Eigen::Ref<const Eigen::MatrixXd>& Q) const {
  Eigen::MatrixXd P = symmetrize(solve_primal_general(Q));
  const double residual = (apply(P) + Q).norm();
  return {std::move(P), residual};
}

LyapunovSolution LyapunovOperator::solve_adjoint(
    const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  Eigen::MatrixXd G = symmetrize(solve_adjoint_general(X));
  const double residual = (apply_adjoint(G) + X).norm();
  return {std::move(G), residual};
}

Eigen::MatrixXd LyapunovOperator::apply(const Eigen::Ref<const Eigen::MatrixXd>& P) const {
  return Ac_.transpose() * P + P * Ac_;
}

Eigen::MatrixXd LyapunovOperator::apply_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& G) const {
  return G * Ac_.transpose() + Ac_ * G;
}

LyapunovSolution solve_lyapunov_primal(const Eigen::Ref<const Eigen::MatrixXd>& Ac,
                                       const Eigen::Ref<const Eigen::MatrixXd>& Qc) {
  return LyapunovOperator(Ac).solve_primal(Qc);
}

LyapunovSolution solve_lyapunov_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& Ac,
                                        const Eigen::Ref<const Eigen::MatrixXd>& X0) {
  return LyapunovOperator(Ac).solve_adjoint(X0);
}

}  // namespace soflqr
