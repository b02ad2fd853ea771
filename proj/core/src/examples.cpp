#include "soflqr/examples.hpp"

#include <string>

#include "soflqr/errors.hpp"

namespace soflqr {

namespace {

// Fourth-order aircraft model, three measured states, two inputs.
ProblemDefinition aircraft_example() {
  Plant plant;
  plant.A.resize(4, 4);
  plant.A << -0.037, 0.0123, 0.00055, -1.0,
             0.0, 0.0, 1.0, 0.0,
             -6.37, 0.0, -0.23, 0.0618,
             1.25, 0.0, 0.016, -0.0457;
  plant.B.resize(4, 2);
  plant.B << 0.00084, 0.000236,
             0.0, 0.0,
             0.08, 0.804,
             -0.0862, -0.0665;
  plant.C.resize(3, 4);
  plant.C << 0, 1, 0, 0,
             0, 0, 1, 0,
             0, 0, 0, 1;

  CostSpec cost = CostSpec::with_identity_moment(Eigen::MatrixXd::Identity(4, 4),
                                                 Eigen::MatrixXd::Identity(2, 2));
  SolverParams params = SolverParams::newton_defaults();
  params.tol = 1e-9;
  params.pt_eps = 1e-9;
  return {"example1", SofProblem(std::move(plant), std::move(cost)), Eigen::MatrixXd::Zero(2, 3),
          params};
}

// Third-order plant with a decentralized (diagonal) 2x2 gain.
ProblemDefinition decentralized_example() {
  Plant plant;
  plant.A.resize(3, 3);
  plant.A << -4, 2, 1,
             3, -2, 5,
             -7, 0, 3;
  plant.B.resize(3, 2);
  plant.B << 1, 0,
             1, 0,
             0, 1;
  plant.C.resize(2, 3);
  plant.C << 0, 1, 0,
             0, 0, 1;

  CostSpec cost = CostSpec::with_identity_moment(Eigen::MatrixXd::Identity(3, 3),
                                                 Eigen::MatrixXd::Identity(2, 2));

  // k12 = 0 and k21 = 0, each written as e_i^T K e_j = 0.
  ConstraintSet constraints;
  {
    LinearConstraint c;
    c.terms.push_back({Eigen::RowVector2d(1, 0), Eigen::Vector2d(0, 1)});
    c.rhs = Eigen::MatrixXd::Zero(1, 1);
    constraints.add(std::move(c));
  }
  {
    LinearConstraint c;
    c.terms.push_back({Eigen::RowVector2d(0, 1), Eigen::Vector2d(1, 0)});
    c.rhs = Eigen::MatrixXd::Zero(1, 1);
    constraints.add(std::move(c));
  }

  Eigen::MatrixXd K0(2, 2);
  K0 << -2, 0,
        0, -3;
  SolverParams params = SolverParams::newton_defaults();
  params.tol = 1e-9;
  params.pt_eps = 1e-6;
  return {"example2",
          SofProblem(std::move(plant), std::move(cost), std::move(constraints)), K0, params};
}

}  // namespace

ProblemDefinition builtin_example(std::string_view name) {
  if (name == "example1") return aircraft_example();
  if (name == "example2") return decentralized_example();
  throw InvalidArgumentError("unknown example '" + std::string(name) +
                             "' (available: example1, example2)");
}

std::vector<std::string> builtin_example_names() { return {"example1", "example2"}; }

}  // namespace soflqr
