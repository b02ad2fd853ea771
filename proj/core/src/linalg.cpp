#include "soflqr/linalg.hpp"

#include <string>

#include <Eigen/Eigenvalues>

#include "soflqr/errors.hpp"

namespace soflqr {

double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.rows() != M.cols()) {
    throw DimensionError("spectral_abscissa: matrix is " + std::to_string(M.rows()) + "x" +
                         std::to_string(M.cols()) + ", expected square");
  }
  if (!M.allFinite()) throw InvalidArgumentError("spectral_abscissa: non-finite entries");
  if (M.size() == 0) throw DimensionError("spectral_abscissa: empty matrix");

  Eigen::EigenSolver<Eigen::MatrixXd> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectral_abscissa: eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().real().maxCoeff();
}

Eigen::VectorXd vec(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  Eigen::VectorXd v(M.size());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < M.cols(); ++c)
    for (Eigen::Index r = 0; r < M.rows(); ++r) v(k++) = M(r, c);
  return v;
}

Eigen::MatrixXd unvec(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::Index rows,
                      Eigen::Index cols) {
  if (rows < 0 || cols < 0 || v.size() != rows * cols) {
    throw DimensionError("unvec: vector of length " + std::to_string(v.size()) +
                         " cannot be reshaped to " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  Eigen::MatrixXd M(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) M(r, c) = v(k++);
  return M;
}

Eigen::MatrixXd kron(const Eigen::Ref<const Eigen::MatrixXd>& a,
                     const Eigen::Ref<const Eigen::MatrixXd>& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  return 0.5 * (M + M.transpose());
}

Eigen::MatrixXd single_entry(Eigen::Index rows, Eigen::Index cols, Eigen::Index i,
                             Eigen::Index j) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(rows, cols);
  E(i, j) = 1.0;
  return E;
}

double min_symmetric_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

}  // namespace soflqr
