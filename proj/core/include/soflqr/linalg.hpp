#pragma once

#include <Eigen/Dense>

namespace soflqr {

/// Closed loops whose spectral abscissa is above this value are treated as
/// not Hurwitz.
inline constexpr double kHurwitzTolerance = 1e-10;

/// Largest real part over the eigenvalues of a square matrix.
/// Throws NumericalError if the eigenvalue iteration does not converge.
double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& M);

inline bool is_hurwitz(double abscissa) { return abscissa < -kHurwitzTolerance; }

/// Column-major stacking of the columns of M.
Eigen::VectorXd vec(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Inverse of vec. Throws DimensionError if v.size() != rows * cols.
Eigen::MatrixXd unvec(const Eigen::Ref<const Eigen::VectorXd>& v,
                      Eigen::Index rows, Eigen::Index cols);

/// Kronecker product; the result is (a.rows()*b.rows()) x (a.cols()*b.cols()).
Eigen::MatrixXd kron(const Eigen::Ref<const Eigen::MatrixXd>& a,
                     const Eigen::Ref<const Eigen::MatrixXd>& b);

/// (M + M^T) / 2
Eigen::MatrixXd symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Single-entry matrix with a one at (i, j).
Eigen::MatrixXd single_entry(Eigen::Index rows, Eigen::Index cols,
                             Eigen::Index i, Eigen::Index j);

double min_symmetric_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& S);

/// Frobenius inner product Tr(a^T b).
inline double frobenius_inner(const Eigen::Ref<const Eigen::MatrixXd>& a,
                              const Eigen::Ref<const Eigen::MatrixXd>& b) {
  return a.cwiseProduct(b).sum();
}

}  // namespace soflqr
