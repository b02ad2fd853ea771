#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "soflqr/lyapunov.hpp"

namespace soflqr {

/// Tolerance on ||A vec(K) - c||_inf for a gain to count as feasible.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// LTI plant  x' = A x + B u,  y = C x.
struct Plant {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  Eigen::MatrixXd C;  // q x n

  Eigen::Index states() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
  Eigen::Index outputs() const { return C.rows(); }

  /// Throws DimensionError or InvalidArgumentError (non-finite entries).
  void validate() const;
};

/// Quadratic cost weights. X0 is the second moment E[x0 x0^T] of the initial
/// state; the identity encodes a random initial state with unit covariance.
struct CostSpec {
  Eigen::MatrixXd Q;   // n x n, symmetric PSD
  Eigen::MatrixXd R;   // m x m, symmetric PD
  Eigen::MatrixXd X0;  // n x n, symmetric PSD

  static CostSpec with_identity_moment(Eigen::MatrixXd Q, Eigen::MatrixXd R);

  void validate(Eigen::Index states, Eigen::Index inputs) const;
};

struct StateInputWeights {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
};

/// Q = C1^T W C1 and R = D1^T W D1 for the performance output z = C1 x + D1 u.
/// Throws InvalidArgumentError if R is not positive definite.
StateInputWeights weights_from_performance_output(
    const Eigen::Ref<const Eigen::MatrixXd>& C1,
    const Eigen::Ref<const Eigen::MatrixXd>& D1,
    const Eigen::Ref<const Eigen::MatrixXd>& W);

/// One product term  left * K * right  of a linear matrix constraint.
struct ConstraintTerm {
  Eigen::MatrixXd left;   // r x m
  Eigen::MatrixXd right;  // q x c
};

/// sum_j left_j * K * right_j = rhs
struct LinearConstraint {
  std::vector<ConstraintTerm> terms;
  Eigen::MatrixXd rhs;  // r x c

  Eigen::MatrixXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& K) const;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<LinearConstraint> constraints)
      : constraints_(std::move(constraints)) {}

  void add(LinearConstraint constraint) { constraints_.push_back(std::move(constraint)); }

  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  bool empty() const { return constraints_.empty(); }
  std::size_t size() const { return constraints_.size(); }

  /// Checks every term against an m x q gain. Throws DimensionError.
  void validate(Eigen::Index inputs, Eigen::Index outputs) const;

 private:
  std::vector<LinearConstraint> constraints_;
};

/// Vector form  matrix * vec(K) = rhs  of a ConstraintSet, with linearly
/// dependent rows removed.
struct FlatConstraints {
  Eigen::MatrixXd matrix;  // rows x (m q), full row rank
  Eigen::VectorXd rhs;
  /// Indices (into the unpruned stacking) of the rows that were kept, in order.
  std::vector<Eigen::Index> kept_rows;
  /// Indices of rows dropped as redundant.
  std::vector<Eigen::Index> pruned_rows;
  Eigen::Index stacked_rows = 0;

  Eigen::Index rows() const { return matrix.rows(); }
  bool empty() const { return matrix.rows() == 0; }
  bool homogeneous() const { return rhs.size() == 0 || rhs.lpNorm<Eigen::Infinity>() == 0.0; }
};

/// Stacks sum_j (right_j^T kron left_j) per constraint, then prunes dependent
/// rows with a column-pivoted QR at threshold 1e-10 * ||stacked||.
/// Throws InfeasibleConstraintsError when the right-hand side is inconsistent.
FlatConstraints flatten_constraints(const ConstraintSet& constraints,
                                    Eigen::Index inputs, Eigen::Index outputs);

/// The unpruned stacked system, exactly as written by the Kronecker identity.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> stack_constraints(
    const ConstraintSet& constraints, Eigen::Index inputs, Eigen::Index outputs);

bool check_feasible(const FlatConstraints& flat, const Eigen::Ref<const Eigen::MatrixXd>& K);

/// A + B K C
Eigen::MatrixXd closed_loop(const Plant& plant, const Eigen::Ref<const Eigen::MatrixXd>& K);

/// Q + (K C)^T R (K C), symmetrized.
Eigen::MatrixXd effective_weight(const CostSpec& cost, const Plant& plant,
                                 const Eigen::Ref<const Eigen::MatrixXd>& K);

bool is_stabilizing(const Plant& plant, const Eigen::Ref<const Eigen::MatrixXd>& K);

/// Immutable problem instance: plant, weights and the structural constraints
/// on K, flattened once at construction.
class SofProblem {
 public:
  SofProblem(Plant plant, CostSpec cost, ConstraintSet constraints = {});

  const Plant& plant() const { return plant_; }
  const CostSpec& cost_spec() const { return cost_; }
  const ConstraintSet& constraints() const { return constraints_; }
  const FlatConstraints& flat_constraints() const { return flat_; }

  Eigen::Index states() const { return plant_.states(); }
  Eigen::Index inputs() const { return plant_.inputs(); }
  Eigen::Index outputs() const { return plant_.outputs(); }

  /// Throws DimensionError unless K is inputs x outputs and finite.
  void check_gain(const Eigen::Ref<const Eigen::MatrixXd>& K) const;

 private:
  Plant plant_;
  CostSpec cost_;
  ConstraintSet constraints_;
  FlatConstraints flat_;
};

struct CostEvaluation {
  double cost = 0.0;
  Eigen::MatrixXd closed_loop;
  double abscissa = 0.0;
  LyapunovSolution Pg;
};

/// J(K) = Tr(Pg X0) with Ac^T Pg + Pg Ac + Qc = 0.
/// Throws InfiniteCostError when K is not stabilizing.
CostEvaluation evaluate_cost(const Plant& plant, const CostSpec& cost,
                             const Eigen::Ref<const Eigen::MatrixXd>& K);
CostEvaluation evaluate_cost(const SofProblem& problem,
                             const Eigen::Ref<const Eigen::MatrixXd>& K);

/// Same as evaluate_cost but returns nullopt instead of throwing on instability.
std::optional<CostEvaluation> try_evaluate_cost(const SofProblem& problem,
                                                const Eigen::Ref<const Eigen::MatrixXd>& K);

double cost(const Plant& plant, const CostSpec& cost_spec,
            const Eigen::Ref<const Eigen::MatrixXd>& K);

struct CostChange {
  /// J(K + D) - J(K), computed from the Lyapunov equation satisfied by the
  /// difference of the two Pg matrices, so it stays accurate when the change
  /// is far below the resolution of J itself.
  double delta = 0.0;
  CostEvaluation trial;
};

/// Evaluates the cost at K + D relative to an evaluation at K. Returns nullopt
/// when K + D is not stabilizing.
std::optional<CostChange> evaluate_cost_change(const SofProblem& problem,
                                               const Eigen::Ref<const Eigen::MatrixXd>& K,
                                               const CostEvaluation& at_K,
                                               const Eigen::Ref<const Eigen::MatrixXd>& D);

}  // namespace soflqr
