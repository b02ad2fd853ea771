#include "soflqr/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/QR>

#include "soflqr/errors.hpp"
#include "soflqr/linalg.hpp"

namespace soflqr {

namespace {

std::string shape(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_shape(const Eigen::Ref<const Eigen::MatrixXd>& M, Eigen::Index rows,
                   Eigen::Index cols, const std::string& field) {
  if (M.rows() != rows || M.cols() != cols) {
    throw DimensionError(field + ": expected " + shape(rows, cols) + ", got " +
                         shape(M.rows(), M.cols()));
  }
  if (!M.allFinite()) throw InvalidArgumentError(field + ": non-finite entries");
}

double scale_of(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  return std::max(1.0, M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff());
}

void require_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& M, const std::string& field) {
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale_of(M)) {
    std::ostringstream msg;
    msg << field << ": not symmetric (max |M - M^T| = " << asym << ")";
    throw InvalidArgumentError(msg.str());
  }
}

}  // namespace

void Plant::validate() const {
  const Eigen::Index n = A.rows();
  if (n == 0) throw DimensionError("A: empty state matrix");
  require_shape(A, n, n, "A");
  if (B.cols() == 0) throw DimensionError("B: plant has no inputs");
  if (C.rows() == 0) throw DimensionError("C: plant has no outputs");
  require_shape(B, n, B.cols(), "B");
  require_shape(C, C.rows(), n, "C");
}

CostSpec CostSpec::with_identity_moment(Eigen::MatrixXd Q, Eigen::MatrixXd R) {
  const Eigen::Index n = Q.rows();
  return CostSpec{std::move(Q), std::move(R), Eigen::MatrixXd::Identity(n, n)};
}

void CostSpec::validate(Eigen::Index states, Eigen::Index inputs) const {
  require_shape(Q, states, states, "Q");
  require_shape(R, inputs, inputs, "R");
  require_shape(X0, states, states, "X0");
  require_symmetric(Q, "Q");
  require_symmetric(R, "R");
  require_symmetric(X0, "X0");
  if (min_symmetric_eigenvalue(symmetrize(Q)) < -1e-10 * scale_of(Q)) {
    throw InvalidArgumentError("Q: not positive semidefinite");
  }
  if (!(min_symmetric_eigenvalue(symmetrize(R)) > 0.0)) {
    throw InvalidArgumentError("R: not positive definite");
  }
  if (min_symmetric_eigenvalue(symmetrize(X0)) < -1e-10 * scale_of(X0)) {
    throw InvalidArgumentError("X0: not positive semidefinite");
  }
}

StateInputWeights weights_from_performance_output(const Eigen::Ref<const Eigen::MatrixXd>& C1,
                                                  const Eigen::Ref<const Eigen::MatrixXd>& D1,
                                                  const Eigen::Ref<const Eigen::MatrixXd>& W) {
  const Eigen::Index p = W.rows();
  require_shape(W, p, p, "W");
  require_shape(C1, p, C1.cols(), "C1");
  require_shape(D1, p, D1.cols(), "D1");
  require_symmetric(W, "W");
  if (min_symmetric_eigenvalue(symmetrize(W)) < -1e-10 * scale_of(W)) {
    throw InvalidArgumentError("W: not positive semidefinite");
  }
  StateInputWeights out{symmetrize(C1.transpose() * W * C1), symmetrize(D1.transpose() * W * D1)};
  const double r_min = out.R.size() == 0 ? 0.0 : min_symmetric_eigenvalue(out.R);
  if (!(r_min > 1e-14 * scale_of(out.R))) {
    throw InvalidArgumentError("R = D1^T W D1 is not positive definite");
  }
  return out;
}

Eigen::MatrixXd LinearConstraint::evaluate(const Eigen::Ref<const Eigen::MatrixXd>& K) const {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(rhs.rows(), rhs.cols());
  for (const auto& term : terms) sum += term.left * K * term.right;
  return sum;
}

void ConstraintSet::validate(Eigen::Index inputs, Eigen::Index outputs) const {
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = constraints_[i];
    const std::string prefix = "constraints[" + std::to_string(i) + "]";
    if (c.terms.empty()) throw DimensionError(prefix + ": no terms");
    if (!c.rhs.allFinite()) throw InvalidArgumentError(prefix + ".rhs: non-finite entries");
    for (std::size_t j = 0; j < c.terms.size(); ++j) {
      const std::string term = prefix + ".terms[" + std::to_string(j) + "]";
      require_shape(c.terms[j].left, c.rhs.rows(), inputs, term + ".left");
      require_shape(c.terms[j].right, outputs, c.rhs.cols(), term + ".right");
    }
  }
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> stack_constraints(const ConstraintSet& constraints,
                                                              Eigen::Index inputs,
                                                              Eigen::Index outputs) {
  constraints.validate(inputs, outputs);
  Eigen::Index rows = 0;
  for (const auto& c : constraints.constraints()) rows += c.rhs.size();

  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(rows, inputs * outputs);
  Eigen::VectorXd rhs(rows);
  Eigen::Index offset = 0;
  for (const auto& c : constraints.constraints()) {
    const Eigen::Index r = c.rhs.size();
    for (const auto& term : c.terms) {
      matrix.middleRows(offset, r) += kron(term.right.transpose(), term.left);
    }
    rhs.segment(offset, r) = vec(c.rhs);
    offset += r;
  }
  return {std::move(matrix), std::move(rhs)};
}

FlatConstraints flatten_constraints(const ConstraintSet& constraints, Eigen::Index inputs,
                                    Eigen::Index outputs) {
  auto [stacked, rhs] = stack_constraints(constraints, inputs, outputs);
  FlatConstraints flat;
  flat.stacked_rows = stacked.rows();
  if (stacked.rows() == 0) {
    flat.matrix = Eigen::MatrixXd::Zero(0, inputs * outputs);
    flat.rhs = Eigen::VectorXd::Zero(0);
    return flat;
  }

  // Rows of `stacked` are the columns of its transpose; a column-pivoted QR
  // orders them by independence.
  const double threshold = 1e-10 * stacked.norm();
  Eigen::Index rank = 0;
  std::vector<Eigen::Index> kept;
  if (threshold > 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked.transpose());
    const auto& R = qr.matrixQR();
    const Eigen::Index diag = std::min(R.rows(), R.cols());
    while (rank < diag && std::abs(R(rank, rank)) > threshold) ++rank;
    for (Eigen::Index k = 0; k < rank; ++k) kept.push_back(qr.colsPermutation().indices()(k));
    std::sort(kept.begin(), kept.end());
  }

  flat.matrix.resize(rank, stacked.cols());
  flat.rhs.resize(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    flat.matrix.row(k) = stacked.row(kept[k]);
    flat.rhs(k) = rhs(kept[k]);
  }
  flat.kept_rows = kept;
  for (Eigen::Index r = 0; r < stacked.rows(); ++r) {
    if (!std::binary_search(kept.begin(), kept.end(), r)) flat.pruned_rows.push_back(r);
  }

  // Consistency: the minimum-norm solution of the kept rows must also satisfy
  // the pruned ones.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(stacked.cols());
  if (rank > 0) {
    const Eigen::MatrixXd gram = flat.matrix * flat.matrix.transpose();
    x = flat.matrix.transpose() * gram.ldlt().solve(flat.rhs);
  }
  const double mismatch = (stacked * x - rhs).lpNorm<Eigen::Infinity>();
  const double rhs_scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (mismatch > kFeasibilityTolerance * rhs_scale) {
    std::ostringstream msg;
    msg << "constraints are inconsistent: right-hand side lies outside the range of the "
           "constraint matrix (residual "
        << mismatch << ")";
    throw InfeasibleConstraintsError(msg.str());
  }
  return flat;
}

bool check_feasible(const FlatConstraints& flat, const Eigen::Ref<const Eigen::MatrixXd>& K) {
  if (flat.empty()) return true;
  if (K.size() != flat.matrix.cols()) {
    throw DimensionError("check_feasible: gain has " + std::to_string(K.size()) +
                         " entries, constraints expect " + std::to_string(flat.matrix.cols()));
  }
  return (flat.matrix * vec(K) - flat.rhs).lpNorm<Eigen::Infinity>() <= kFeasibilityTolerance;
}

Eigen::MatrixXd closed_loop(const Plant& plant, const Eigen::Ref<const Eigen::MatrixXd>& K) {
  require_shape(K, plant.inputs(), plant.outputs(), "K");
  return plant.A + plant.B * K * plant.C;
}

Eigen::MatrixXd effective_weight(const CostSpec& cost, const Plant& plant,
                                 const Eigen::Ref<const Eigen::MatrixXd>& K) {
  require_shape(K, plant.inputs(), plant.outputs(), "K");
  const Eigen::MatrixXd KC = K * plant.C;
  return symmetrize(cost.Q + KC.transpose() * cost.R * KC);
}

bool is_stabilizing(const Plant& plant, const Eigen::Ref<const Eigen::MatrixXd>& K) {
  return is_hurwitz(spectral_abscissa(closed_loop(plant, K)));
}

SofProblem::SofProblem(Plant plant, CostSpec cost, ConstraintSet constraints)
    : plant_(std::move(plant)), cost_(std::move(cost)), constraints_(std::move(constraints)) {
  plant_.validate();
  cost_.validate(plant_.states(), plant_.inputs());
  flat_ = flatten_constraints(constraints_, plant_.inputs(), plant_.outputs());
}

void SofProblem::check_gain(const Eigen::Ref<const Eigen::MatrixXd>& K) const {
  require_shape(K, inputs(), outputs(), "K");
}

CostEvaluation evaluate_cost(const Plant& plant, const CostSpec& cost,
                             const Eigen::Ref<const Eigen::MatrixXd>& K) {
  CostEvaluation out;
  out.closed_loop = closed_loop(plant, K);
  try {
    const LyapunovOperator op(out.closed_loop);
    out.abscissa = op.spectral_abscissa();
    out.Pg = op.solve_primal(effective_weight(cost, plant, K));
  } catch (const NotHurwitzError& e) {
    throw InfiniteCostError(std::string("infinite cost: ") + e.what(), e.abscissa());
  }
  out.cost = frobenius_inner(out.Pg.value, cost.X0);
  return out;
}

CostEvaluation evaluate_cost(const SofProblem& problem, const Eigen::Ref<const Eigen::MatrixXd>& K) {
  return evaluate_cost(problem.plant(), problem.cost_spec(), K);
}

std::optional<CostEvaluation> try_evaluate_cost(const SofProblem& problem,
                                                const Eigen::Ref<const Eigen::MatrixXd>& K) {
  try {
    return evaluate_cost(problem, K);
  } catch (const InfiniteCostError&) {
    return std::nullopt;
  }
}

double cost(const Plant& plant, const CostSpec& cost_spec, const Eigen::Ref<const Eigen::MatrixXd>& K) {
  return evaluate_cost(plant, cost_spec, K).cost;
}

// With Pg' - Pg = D_P, subtracting the two Lyapunov equations gives
//   Ac'^T D_P + D_P Ac' = -(Qc' - Qc) - (dA^T Pg + Pg dA),   dA = B D C.
std::optional<CostChange> evaluate_cost_change(const SofProblem& problem,
                                               const Eigen::Ref<const Eigen::MatrixXd>& K,
                                               const CostEvaluation& at_K,
                                               const Eigen::Ref<const Eigen::MatrixXd>& D) {
  const Plant& plant = problem.plant();
  const CostSpec& spec = problem.cost_spec();
  problem.check_gain(D);

  const Eigen::MatrixXd dA = plant.B * D * plant.C;
  CostChange change;
  change.trial.closed_loop = at_K.closed_loop + dA;

  std::optional<LyapunovOperator> op;
  try {
    op.emplace(change.trial.closed_loop);
  } catch (const NotHurwitzError&) {
    return std::nullopt;
  }
  change.trial.abscissa = op->spectral_abscissa();

  const Eigen::MatrixXd KC = K * plant.C;
  const Eigen::MatrixXd DC = D * plant.C;
  const Eigen::MatrixXd& P = at_K.Pg.value;
  Eigen::MatrixXd rhs = DC.transpose() * spec.R * KC;
  rhs += rhs.transpose().eval();
  rhs += DC.transpose() * spec.R * DC + dA.transpose() * P + P * dA;
  const LyapunovSolution diff = op->solve_primal(symmetrize(rhs));

  change.delta = frobenius_inner(diff.value, spec.X0);
  change.trial.Pg.value = P + diff.value;
  const Eigen::MatrixXd Qc = effective_weight(spec, plant, K + D);
  change.trial.Pg.residual_norm = (op->apply(change.trial.Pg.value) + Qc).norm();
  change.trial.cost = at_K.cost + change.delta;
  return change;
}

}  // namespace soflqr
