#include "soflqr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "soflqr/errors.hpp"
#include "soflqr/first_order.hpp"
#include "soflqr/linalg.hpp"
#include "soflqr/lyapunov.hpp"

namespace soflqr::verify {

OracleReport compare(const Eigen::Ref<const Eigen::MatrixXd>& value,
                     const Eigen::Ref<const Eigen::MatrixXd>& reference) {
  if (value.rows() != reference.rows() || value.cols() != reference.cols()) {
    throw DimensionError("compare: shape mismatch");
  }
  OracleReport report;
  if (reference.size() == 0) return report;
  const double floor = 1e-8 * std::max(1.0, reference.cwiseAbs().maxCoeff());
  for (Eigen::Index c = 0; c < reference.cols(); ++c) {
    for (Eigen::Index r = 0; r < reference.rows(); ++r) {
      const double abs_err = std::abs(value(r, c) - reference(r, c));
      const double rel_err = abs_err / std::max(std::abs(reference(r, c)), floor);
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
      if (rel_err > report.max_rel_error || (r == 0 && c == 0)) {
        report.max_rel_error = rel_err;
        report.row = r;
        report.col = c;
      }
    }
  }
  return report;
}

Eigen::MatrixXd fd_gradient(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                            double h) {
  if (!(h > 0.0)) throw InvalidArgumentError("fd_gradient: step must be positive");
  problem.check_gain(K);
  const CostEvaluation base = evaluate_cost(problem, K);
  const Eigen::Index m = problem.inputs();
  const Eigen::Index q = problem.outputs();

  Eigen::MatrixXd grad(m, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      double step = h;
      for (int attempt = 0;; ++attempt) {
        const Eigen::MatrixXd D = step * single_entry(m, q, i, j);
        // Both sides are measured relative to J(K), which cancels exactly.
        const auto plus = evaluate_cost_change(problem, K, base, D);
        const auto minus = evaluate_cost_change(problem, K, base, -D);
        if (plus && minus) {
          grad(i, j) = (plus->delta - minus->delta) / (2.0 * step);
          break;
        }
        if (attempt == 1) {
          throw InfiniteCostError("fd_gradient: perturbation leaves the stabilizing set",
                                  base.abscissa);
        }
        step *= 0.5;
      }
    }
  }
  return grad;
}

Eigen::MatrixXd fd_hessian(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                           double h) {
  if (!(h > 0.0)) throw InvalidArgumentError("fd_hessian: step must be positive");
  problem.check_gain(K);
  const Eigen::Index m = problem.inputs();
  const Eigen::Index q = problem.outputs();

  Eigen::MatrixXd H(m * q, m * q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      double step = h;
      for (int attempt = 0;; ++attempt) {
        const Eigen::MatrixXd D = step * single_entry(m, q, i, j);
        try {
          const Eigen::MatrixXd plus = gradient(problem, K + D).grad;
          const Eigen::MatrixXd minus = gradient(problem, K - D).grad;
          H.col(j * m + i) = vec((plus - minus) / (2.0 * step));
          break;
        } catch (const NotHurwitzError& e) {
          if (attempt == 1) {
            throw InfiniteCostError("fd_hessian: perturbation leaves the stabilizing set",
                                    e.abscissa());
          }
          step *= 0.5;
        }
      }
    }
  }
  return symmetrize(H);
}

Eigen::MatrixXd kron_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& Ac,
                              const Eigen::Ref<const Eigen::MatrixXd>& Qc) {
  const Eigen::Index n = Ac.rows();
  if (Ac.cols() != n || Qc.rows() != n || Qc.cols() != n) {
    throw DimensionError("kron_lyapunov: Ac and Qc must be square and of equal order");
  }
  if (n > 8) throw InvalidArgumentError("kron_lyapunov: dense oracle limited to n <= 8");

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd At = Ac.transpose();
  const Eigen::MatrixXd M = kron(I, At) + kron(At, I);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (lu.rank() < n * n) {
    throw NumericalError(
        "kron_lyapunov: Kronecker sum is singular (Ac and -Ac share an eigenvalue)");
  }
  return unvec(lu.solve(vec(-Qc)), n, n);
}

Eigen::MatrixXd stabilizing_state_feedback(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                           const Eigen::Ref<const Eigen::MatrixXd>& B) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n) {
    throw DimensionError("stabilizing_state_feedback: inconsistent A, B");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> eig(A, false);
  if (eig.info() != Eigen::Success) throw NumericalError("stabilizing_state_feedback: eig failed");
  const double shift = std::max(0.0, -eig.eigenvalues().real().minCoeff()) + 1.0;

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const LyapunovOperator op(-(A + shift * I));
  const Eigen::MatrixXd X = op.solve_adjoint(2.0 * B * B.transpose()).value;
  Eigen::LLT<Eigen::MatrixXd> llt(X);
  if (llt.info() != Eigen::Success || min_symmetric_eigenvalue(X) <= 1e-12 * X.norm()) {
    throw NumericalError("stabilizing_state_feedback: (A, B) is not controllable");
  }
  Eigen::MatrixXd K = -B.transpose() * llt.solve(I);
  if (!is_hurwitz(spectral_abscissa(A + B * K))) {
    throw NumericalError("stabilizing_state_feedback: construction failed to stabilize");
  }
  return K;
}

AreSolution are_gain(const Plant& plant, const CostSpec& cost,
                     const std::optional<Eigen::MatrixXd>& initial) {
  const Eigen::MatrixXd& A = plant.A;
  const Eigen::MatrixXd& B = plant.B;
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || cost.Q.rows() != n || cost.R.rows() != m) {
    throw DimensionError("are_gain: inconsistent dimensions");
  }
  Eigen::LLT<Eigen::MatrixXd> R_llt(cost.R);
  if (R_llt.info() != Eigen::Success) throw InvalidArgumentError("are_gain: R not positive definite");

  Eigen::MatrixXd K;
  if (initial) {
    K = *initial;
  } else if (is_hurwitz(spectral_abscissa(A))) {
    K = Eigen::MatrixXd::Zero(m, n);
  } else {
    K = stabilizing_state_feedback(A, B);
  }
  if (K.rows() != m || K.cols() != n) throw DimensionError("are_gain: initial gain must be m x n");

  constexpr int kMaxIterations = 200;
  double previous_change = std::numeric_limits<double>::infinity();
  AreSolution out;
  for (int it = 1; it <= kMaxIterations; ++it) {
    std::optional<LyapunovOperator> op;
    try {
      op.emplace(A + B * K);
    } catch (const NotHurwitzError&) {
      throw NumericalError("are_gain: Kleinman iterate lost stability (pair not stabilizable?)");
    }
    const Eigen::MatrixXd P = op->solve_primal(cost.Q + K.transpose() * cost.R * K).value;
    const Eigen::MatrixXd next = -R_llt.solve(B.transpose() * P);
    const double change = (next - K).norm();
    const double scale = std::max(1.0, next.norm());
    K = next;
    out.P = P;
    out.iterations = it;
    // Quadratic convergence ends at a roundoff floor; accept it once the
    // change stops shrinking.
    if (change <= 1e-12 * scale || (it > 3 && change >= previous_change && change <= 1e-8 * scale)) {
      out.gain = K;
      try {
        out.P = LyapunovOperator(A + B * K).solve_primal(cost.Q + K.transpose() * cost.R * K).value;
      } catch (const NotHurwitzError&) {
        throw NumericalError("are_gain: converged gain is not stabilizing");
      }
      return out;
    }
    previous_change = change;
  }
  throw NumericalError("are_gain: Kleinman iteration did not converge");
}

double quadrature_cost(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K,
                       double horizon, int steps) {
  if (!(horizon > 0.0)) throw InvalidArgumentError("quadrature_cost: horizon must be positive");
  if (steps < 2) throw InvalidArgumentError("quadrature_cost: need at least two steps");
  if (steps % 2 != 0) ++steps;

  const Eigen::MatrixXd Ac = closed_loop(problem.plant(), K);
  const double abscissa = spectral_abscissa(Ac);
  if (!is_hurwitz(abscissa)) {
    throw InfiniteCostError("quadrature_cost: closed loop is not Hurwitz", abscissa);
  }
  const Eigen::MatrixXd Qc = effective_weight(problem.cost_spec(), problem.plant(), K);
  const Eigen::MatrixXd& X0 = problem.cost_spec().X0;

  const double h = horizon / steps;
  const Eigen::MatrixXd step_map = (Ac * h).exp();
  Eigen::MatrixXd flow = Eigen::MatrixXd::Identity(Ac.rows(), Ac.cols());
  auto integrand = [&](const Eigen::MatrixXd& F) {
    return frobenius_inner(F.transpose() * Qc * F, X0);
  };

  double sum = integrand(flow);
  for (int k = 1; k <= steps; ++k) {
    flow = flow * step_map;
    const double weight = (k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += weight * integrand(flow);
  }
  return sum * h / 3.0;
}

}  // namespace soflqr::verify
