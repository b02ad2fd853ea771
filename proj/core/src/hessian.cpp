#include "soflqr/hessian.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "soflqr/errors.hpp"
#include "soflqr/linalg.hpp"

namespace soflqr {

HessianColumnTerms hessian_column_terms(const Plant& plant, const CostSpec& cost,
                                        const Eigen::Ref<const Eigen::MatrixXd>& K,
                                        const GradientPair& gp, const LyapunovOperator& op,
                                        Eigen::Index i, Eigen::Index j) {
  // B J^{ij} C is the rank-one product of column i of B and row j of C.
  const Eigen::MatrixXd E = plant.B.col(i) * plant.C.row(j);
  const Eigen::MatrixXd KC = K * plant.C;
  HessianColumnTerms t;
  t.P1 = op.solve_primal_general(gp.Pg.value * E);
  t.Gamma1 = op.solve_adjoint_general(gp.Gamma.value * E.transpose());
  t.R1 = op.solve_primal_general(KC.transpose() * cost.R.col(i) * plant.C.row(j));
  return t;
}

Eigen::MatrixXd hessian_block(const Plant& plant, const CostSpec& cost,
                              const Eigen::Ref<const Eigen::MatrixXd>& K,
                              const GradientPair& gp, const HessianColumnTerms& terms,
                              Eigen::Index i, Eigen::Index j) {
  const Eigen::MatrixXd& B = plant.B;
  const Eigen::MatrixXd& C = plant.C;
  const Eigen::MatrixXd& Gamma = gp.Gamma.value;
  const Eigen::MatrixXd GammaCt = Gamma * C.transpose();

  Eigen::MatrixXd block =
      B.transpose() * (terms.P1 + terms.P1.transpose() + terms.R1 + terms.R1.transpose()) * GammaCt;
  block += (B.transpose() * gp.Pg.value + cost.R * K * C) *
           (terms.Gamma1 + terms.Gamma1.transpose()) * C.transpose();
  // R J^{ij} C Gamma C^T: column i of R times row j of C Gamma C^T.
  block += cost.R.col(i) * (C * GammaCt).row(j);
  return 2.0 * block;
}

namespace {

HessianMatrix assemble(const Plant& plant, const CostSpec& cost,
                       const Eigen::Ref<const Eigen::MatrixXd>& K, const GradientPair& gp,
                       const LyapunovOperator& op) {
  const Eigen::Index m = plant.inputs();
  const Eigen::Index q = plant.outputs();
  Eigen::MatrixXd raw(m * q, m * q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto terms = hessian_column_terms(plant, cost, K, gp, op, i, j);
      raw.col(j * m + i) = vec(hessian_block(plant, cost, K, gp, terms, i, j));
    }
  }

  HessianMatrix H;
  const double scale = raw.norm();
  H.asymmetry = scale > 0.0 ? (raw - raw.transpose()).norm() / scale : 0.0;
  H.value = symmetrize(raw);
  if (!H.value.allFinite()) throw NumericalError("hessian: non-finite entries");
  if (H.asymmetry > kHessianAsymmetryWarning) {
    std::ostringstream msg;
    msg << "hessian asymmetry " << H.asymmetry << " exceeds " << kHessianAsymmetryWarning
        << " before symmetrization";
    H.warning = msg.str();
  }
  return H;
}

}  // namespace

HessianMatrix hessian(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K, const GradientPair& gp) {
  const LyapunovOperator op(closed_loop(plant, K));
  return assemble(plant, cost, K, gp, op);
}

HessianMatrix hessian(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                      const GradientPair& gp) {
  return hessian(problem.plant(), problem.cost_spec(), K, gp);
}

HessianMatrix hessian(const Plant& plant, const CostSpec& cost,
                      const Eigen::Ref<const Eigen::MatrixXd>& K, const GradientPair& gp,
                      const LyapunovOperator& op) {
  return assemble(plant, cost, K, gp, op);
}

PTMatrix pt_matrix(const Eigen::Ref<const Eigen::MatrixXd>& H, double eps) {
  if (!(eps > 0.0)) throw InvalidArgumentError("pt_matrix: eps must be positive");
  if (H.rows() != H.cols()) throw DimensionError("pt_matrix: matrix must be square");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrize(H));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("pt_matrix: symmetric eigensolver did not converge");
  }
  PTMatrix pt;
  pt.eigen_floor = eps;
  pt.eigenvalues = solver.eigenvalues();
  pt.eigenvectors = solver.eigenvectors();

  Eigen::VectorXd truncated(pt.eigenvalues.size());
  for (Eigen::Index k = 0; k < truncated.size(); ++k) {
    const double l = pt.eigenvalues(k);
    truncated(k) = std::abs(l) >= eps ? std::abs(l) : eps;
    if (truncated(k) != l) ++pt.modified_count;
  }
  pt.value = symmetrize(pt.eigenvectors * truncated.asDiagonal() * pt.eigenvectors.transpose());
  return pt;
}

}  // namespace soflqr
