#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "soflqr/problem.hpp"
#include "soflqr/solve_result.hpp"

namespace soflqr {

/// A complete problem instance: data, starting gain and solver settings.
struct ProblemDefinition {
  std::string name;
  SofProblem problem;
  Eigen::MatrixXd K0;
  SolverParams params;
};

/// "example1": fourth-order aircraft model, unconstrained 2x3 output feedback.
/// "example2": third-order plant with a diagonal (decentralized) 2x2 gain.
/// Throws InvalidArgumentError for any other name.
ProblemDefinition builtin_example(std::string_view name);

std::vector<std::string> builtin_example_names();

}  // namespace soflqr
