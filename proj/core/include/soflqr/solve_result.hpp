#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace soflqr {

enum class Method { Newton, Gradient };

std::string_view to_string(Method method);
/// Accepts "newton" and "grad" (also "gradient"). Throws InvalidArgumentError.
Method parse_method(std::string_view name);

struct SolverParams {
  Method method = Method::Newton;
  /// Newton: bound on ||vec(dK)||. Gradient: bound on the projected gradient norm.
  double tol = 1e-9;
  /// Eigenvalue floor of the PT-matrix (Newton only).
  double pt_eps = 1e-6;
  double alpha = 0.2;
  double beta = 0.1;
  int max_iters = 5000;

  static SolverParams newton_defaults();
  static SolverParams gradient_defaults();
};

/// One row per iterate. Row 0 is the initial gain; row k > 0 is the iterate
/// reached by the k-th accepted step.
struct IterationRecord {
  int iteration = 0;
  double cost = 0.0;
  /// Low-order part: cost + cost_low is J(K_0) plus the summed per-step
  /// decreases in double-double, so tiny decreases stay visible.
  double cost_low = 0.0;
  /// J(K_k) - J(K_{k-1}); zero on row 0.
  double cost_decrease = 0.0;
  /// Norm of the projected gradient at K_k.
  double gradient_norm = 0.0;
  /// ||K_k - K_{k-1}||_F
  double step_norm = 0.0;
  double step_size = 0.0;
  double spectral_abscissa = 0.0;
  double min_eig_pg = 0.0;
  int evaluations = 0;
  double seconds = 0.0;
};

struct SolveTrace {
  std::vector<IterationRecord> records;
};

enum class Termination { Converged, MaxIterations, LineSearchStalled };

std::string_view to_string(Termination termination);

struct SolveResult {
  Eigen::MatrixXd K;
  double cost = 0.0;
  int iterations = 0;
  int line_search_evaluations = 0;
  Termination termination = Termination::MaxIterations;
  /// Value compared against tol at exit (Newton step norm or projected
  /// gradient norm).
  double final_measure = 0.0;
  SolveTrace trace;
  std::vector<std::string> warnings;

  bool converged() const { return termination == Termination::Converged; }
};

}  // namespace soflqr
