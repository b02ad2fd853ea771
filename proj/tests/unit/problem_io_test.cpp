#include <sstream>

#include <gtest/gtest.h>

#include "soflqr/examples.hpp"
#include "soflqr/newton.hpp"
#include "soflqr/problem_io.hpp"
#include "support/temp_dir.hpp"

namespace soflqr {
namespace {

const char* kScalarProblem = R"({
  "name": "scalar",
  "A": [[-1.0]],
  "B": [[1.0]],
  "C": [[1.0]],
  "Q": [[1.0]],
  "R": [[1.0]],
  "K0": [[0.0]]
})";

void expect_same(const ProblemDefinition& a, const ProblemDefinition& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.problem.plant().A, b.problem.plant().A);
  EXPECT_EQ(a.problem.plant().B, b.problem.plant().B);
  EXPECT_EQ(a.problem.plant().C, b.problem.plant().C);
  EXPECT_EQ(a.problem.cost_spec().Q, b.problem.cost_spec().Q);
  EXPECT_EQ(a.problem.cost_spec().R, b.problem.cost_spec().R);
  EXPECT_EQ(a.problem.cost_spec().X0, b.problem.cost_spec().X0);
  ASSERT_EQ(a.problem.constraints().size(), b.problem.constraints().size());
  for (std::size_t i = 0; i < a.problem.constraints().size(); ++i) {
    const auto& ca = a.problem.constraints().constraints()[i];
    const auto& cb = b.problem.constraints().constraints()[i];
    EXPECT_EQ(ca.rhs, cb.rhs);
    ASSERT_EQ(ca.terms.size(), cb.terms.size());
    for (std::size_t j = 0; j < ca.terms.size(); ++j) {
      EXPECT_EQ(ca.terms[j].left, cb.terms[j].left);
      EXPECT_EQ(ca.terms[j].right, cb.terms[j].right);
    }
  }
  EXPECT_EQ(a.problem.flat_constraints().matrix, b.problem.flat_constraints().matrix);
  EXPECT_EQ(a.K0, b.K0);
  EXPECT_EQ(a.params.method, b.params.method);
  EXPECT_EQ(a.params.tol, b.params.tol);
  EXPECT_EQ(a.params.pt_eps, b.params.pt_eps);
  EXPECT_EQ(a.params.alpha, b.params.alpha);
  EXPECT_EQ(a.params.beta, b.params.beta);
  EXPECT_EQ(a.params.max_iters, b.params.max_iters);
}

TEST(ProblemIo, BuiltinsRoundTripBitIdentical) {
  for (const auto& name : builtin_example_names()) {
    const auto def = builtin_example(name);
    expect_same(def, parse_problem(dump_problem(def)));
  }
}

TEST(ProblemIo, RoundTripAwkwardValues) {
  auto def = parse_problem(kScalarProblem);
  Plant plant = def.problem.plant();
  plant.A(0, 0) = -0.1 - 0.2;  // not the double nearest to -0.3
  plant.B(0, 0) = 1.0 / 3.0;
  plant.C(0, 0) = -4.9406564584124654e-324;
  def.problem = SofProblem(plant, def.problem.cost_spec());
  expect_same(def, parse_problem(dump_problem(def)));
}

TEST(ProblemIo, AircraftEntries) {
  const auto def = parse_problem(dump_problem(builtin_example("example1")));
  EXPECT_EQ(def.problem.plant().A(3, 0), 1.25);
  EXPECT_EQ(def.problem.plant().B(3, 0), -0.0862);
  EXPECT_EQ(def.problem.plant().A(0, 2), 0.00055);
  EXPECT_TRUE(def.K0.isZero());
  EXPECT_EQ(def.params.pt_eps, 1e-9);
}

TEST(ProblemIo, DefaultsApplied) {
  const auto def = parse_problem(kScalarProblem);
  EXPECT_EQ(def.problem.cost_spec().X0, Eigen::MatrixXd::Identity(1, 1));
  EXPECT_EQ(def.params.method, Method::Newton);
  EXPECT_EQ(def.params.alpha, 0.2);
  EXPECT_EQ(def.params.beta, 0.1);
  EXPECT_TRUE(def.problem.constraints().empty());
}

TEST(ProblemIo, GradientMethodDefaults) {
  std::string text = kScalarProblem;
  text.insert(text.rfind('}'), R"(, "solver": {"method": "grad", "max_iters": 10})");
  const auto def = parse_problem(text);
  EXPECT_EQ(def.params.method, Method::Gradient);
  EXPECT_EQ(def.params.tol, SolverParams::gradient_defaults().tol);
  EXPECT_EQ(def.params.max_iters, 10);
}

TEST(ProblemIo, PerformanceOutputWeights) {
  const auto def = parse_problem(R"({
    "A": [[-1.0, 0.0], [0.0, -2.0]], "B": [[1.0], [0.0]], "C": [[1.0, 1.0]],
    "performance": {"C1": [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
                    "D1": [[0.0], [0.0], [2.0]],
                    "W": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]},
    "K0": [[0.0]]})");
  EXPECT_EQ(def.problem.cost_spec().Q, Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(def.problem.cost_spec().R(0, 0), 4.0);
}

ParseError parse_failure(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return ParseError("", "");
}

TEST(ProblemIo, SyntaxErrorHasLineAndColumn) {
  const auto e = parse_failure("{\n  \"A\": [[-1.0]],\n  \"B\": [[1.0]] oops\n}");
  EXPECT_EQ(e.line(), 3);
  EXPECT_GT(e.column(), 10);
}

TEST(ProblemIo, MissingFieldNamed) {
  std::string text = kScalarProblem;
  text.replace(text.find("\"K0\""), 4, "\"K1\"");
  EXPECT_EQ(parse_failure(text).field(), "K0");
}

TEST(ProblemIo, DimensionErrorNamesField) {
  std::string text = kScalarProblem;
  text.replace(text.find("\"B\": [[1.0]]"), 12, "\"B\": [[1.0], [2.0]]");
  EXPECT_EQ(parse_failure(text).field(), "B");

  std::string k0 = kScalarProblem;
  k0.replace(k0.find("\"K0\": [[0.0]]"), 13, "\"K0\": [[0.0, 1.0]]");
  EXPECT_EQ(parse_failure(k0).field(), "K");
}

TEST(ProblemIo, RaggedMatrix) {
  std::string text = kScalarProblem;
  text.replace(text.find("\"Q\": [[1.0]]"), 12, "\"Q\": [[1.0], [1.0, 2.0]]");
  EXPECT_EQ(parse_failure(text).field(), "Q");
}

TEST(ProblemIo, NonNumericEntry) {
  std::string text = kScalarProblem;
  text.replace(text.find("\"R\": [[1.0]]"), 12, "\"R\": [[\"one\"]]");
  EXPECT_EQ(parse_failure(text).field(), "R");
}

TEST(ProblemIo, BadConstraintNamed) {
  std::string text = kScalarProblem;
  text.insert(text.rfind('}'), R"(, "constraints": [{"terms": [{"left": [[1.0]]}], "rhs": [[0.0]]}])");
  EXPECT_EQ(parse_failure(text).field(), "constraints[0].terms[0].right");
}

TEST(ProblemIo, UnknownMethod) {
  std::string text = kScalarProblem;
  text.insert(text.rfind('}'), R"(, "solver": {"method": "bfgs"})");
  EXPECT_EQ(parse_failure(text).field(), "solver.method");
}

TEST(ProblemIo, LoadMissingFile) { EXPECT_THROW(load_problem("/nonexistent/problem.json"), ParseError); }

TEST(ProblemIo, ResultDeterministic) {
  const auto def = builtin_example("example2");
  const std::string a = dump_result(def, newton_solve(def.problem, def.K0, def.params));
  const std::string b = dump_result(def, newton_solve(def.problem, def.K0, def.params));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"converged\": true"), std::string::npos);
}

TEST(ProblemIo, TraceHeaderAndRows) {
  const auto def = builtin_example("example2");
  const auto r = newton_solve(def.problem, def.K0, def.params);
  std::ostringstream out;
  write_trace_csv(out, r.trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("iter,J,grad_norm,step_norm,step_size_t,spectral_abscissa,cumulative_seconds", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, r.iterations + 1);
}

}  // namespace
}  // namespace soflqr
