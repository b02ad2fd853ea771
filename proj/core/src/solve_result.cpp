#include "soflqr/solve_result.hpp"

#include <string>

#include "soflqr/errors.hpp"

namespace soflqr {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Newton:
      return "newton";
    case Method::Gradient:
      return "grad";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "newton") return Method::Newton;
  if (name == "grad" || name == "gradient") return Method::Gradient;
  throw InvalidArgumentError("unknown method '" + std::string(name) +
                             "' (expected newton or grad)");
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::Converged:
      return "converged";
    case Termination::MaxIterations:
      return "max_iterations";
    case Termination::LineSearchStalled:
      return "line_search_stalled";
  }
  return "unknown";
}

SolverParams SolverParams::newton_defaults() { return SolverParams{}; }

SolverParams SolverParams::gradient_defaults() {
  SolverParams p;
  p.method = Method::Gradient;
  p.tol = 1e-5;
  return p;
}

}  // namespace soflqr
