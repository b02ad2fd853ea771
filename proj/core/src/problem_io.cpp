#include "soflqr/problem_io.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <nlohmann/json.hpp>

namespace soflqr {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Eigen::MatrixXd parse_matrix(const json& node, const std::string& field) {
  if (!node.is_array() || node.empty()) {
    throw ParseError(field + ": expected a non-empty array of rows", field);
  }
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = node[r];
    if (!row.is_array() || row.empty()) {
      throw ParseError(field + "[" + std::to_string(r) + "]: expected a non-empty array of numbers",
                       field);
    }
    if (r == 0) cols = row.size();
    if (row.size() != cols) {
      throw ParseError(field + ": row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(cols),
                       field);
    }
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const json& v = node[r][c];
      if (!v.is_number()) {
        throw ParseError(field + "[" + std::to_string(r) + "][" + std::to_string(c) +
                             "]: expected a number",
                         field);
      }
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v.get<double>();
    }
  }
  return M;
}

const json& require(const json& obj, const std::string& key, const std::string& prefix = "") {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("missing required field '" + prefix + key + "'", prefix + key);
  }
  return *it;
}

ordered_json matrix_json(const Eigen::MatrixXd& M) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
T number_field(const json& obj, const std::string& key, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ParseError("solver." + key + ": expected a number", "solver." + key);
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) {
      throw ParseError("solver." + key + ": expected an integer", "solver." + key);
    }
  }
  return it->get<T>();
}

SolverParams parse_solver(const json& root) {
  const auto it = root.find("solver");
  if (it == root.end()) return SolverParams::newton_defaults();
  const json& s = *it;
  if (!s.is_object()) throw ParseError("solver: expected an object", "solver");

  Method method = Method::Newton;
  if (const auto m = s.find("method"); m != s.end()) {
    if (!m->is_string()) throw ParseError("solver.method: expected a string", "solver.method");
    try {
      method = parse_method(m->get<std::string>());
    } catch (const InvalidArgumentError& e) {
      throw ParseError(std::string("solver.method: ") + e.what(), "solver.method");
    }
  }
  SolverParams p = method == Method::Newton ? SolverParams::newton_defaults()
                                            : SolverParams::gradient_defaults();
  p.tol = number_field(s, "tol", p.tol);
  p.pt_eps = number_field(s, "pt_eps", p.pt_eps);
  p.alpha = number_field(s, "alpha", p.alpha);
  p.beta = number_field(s, "beta", p.beta);
  p.max_iters = number_field(s, "max_iters", p.max_iters);
  return p;
}

ConstraintSet parse_constraints(const json& root) {
  ConstraintSet set;
  const auto it = root.find("constraints");
  if (it == root.end()) return set;
  if (!it->is_array()) throw ParseError("constraints: expected an array", "constraints");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string prefix = "constraints[" + std::to_string(i) + "]";
    const json& c = (*it)[i];
    if (!c.is_object()) throw ParseError(prefix + ": expected an object", prefix);
    LinearConstraint lc;
    const json& terms = require(c, "terms", prefix + ".");
    if (!terms.is_array() || terms.empty()) {
      throw ParseError(prefix + ".terms: expected a non-empty array", prefix + ".terms");
    }
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const std::string tp = prefix + ".terms[" + std::to_string(j) + "]";
      lc.terms.push_back({parse_matrix(require(terms[j], "left", tp + "."), tp + ".left"),
                          parse_matrix(require(terms[j], "right", tp + "."), tp + ".right")});
    }
    lc.rhs = parse_matrix(require(c, "rhs", prefix + "."), prefix + ".rhs");
    set.add(std::move(lc));
  }
  return set;
}

std::string field_of(const std::string& message) {
  const auto colon = message.find(':');
  return colon == std::string::npos ? std::string{} : message.substr(0, colon);
}

std::pair<int, int> locate(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

bool is_number_row(const ordered_json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& v : j) {
    if (!v.is_number()) return false;
  }
  return true;
}

// Like dump(2), but numeric rows stay on one line so matrices read as matrices.
void pretty(const ordered_json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (is_number_row(j)) {
    out += '[';
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += ", ";
      out += v.dump();
      first = false;
    }
    out += ']';
  } else if (j.is_array() && !j.empty()) {
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out += inner;
      pretty(j[k], out, indent + 2);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + ']';
  } else if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (const auto& [key, value] : j.items()) {
      out += inner + ordered_json(key).dump() + ": ";
      pretty(value, out, indent + 2);
      out += ++k < j.size() ? ",\n" : "\n";
    }
    out += pad + '}';
  } else {
    out += j.dump();
  }
}

std::string pretty(const ordered_json& j) {
  std::string out;
  pretty(j, out, 0);
  out += '\n';
  return out;
}

}  // namespace

ProblemDefinition parse_problem(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = locate(text, e.byte);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     "", line, column);
  }
  if (!root.is_object()) throw ParseError("problem file must contain a JSON object", "");

  std::string name = "problem";
  if (const auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) throw ParseError("name: expected a string", "name");
    name = it->get<std::string>();
  }

  Plant plant{parse_matrix(require(root, "A"), "A"), parse_matrix(require(root, "B"), "B"),
              parse_matrix(require(root, "C"), "C")};

  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  if (const auto perf = root.find("performance"); perf != root.end()) {
    if (root.contains("Q") || root.contains("R")) {
      throw ParseError("give either Q and R or performance, not both", "performance");
    }
    try {
      auto w = weights_from_performance_output(
          parse_matrix(require(*perf, "C1", "performance."), "performance.C1"),
          parse_matrix(require(*perf, "D1", "performance."), "performance.D1"),
          parse_matrix(require(*perf, "W", "performance."), "performance.W"));
      Q = std::move(w.Q);
      R = std::move(w.R);
    } catch (const ParseError&) {
      throw;
    } catch (const SofError& e) {
      throw ParseError(std::string("performance.") + e.what(), "performance." + field_of(e.what()));
    }
  } else {
    Q = parse_matrix(require(root, "Q"), "Q");
    R = parse_matrix(require(root, "R"), "R");
  }
  Eigen::MatrixXd X0;
  if (const auto it = root.find("X0"); it != root.end()) {
    X0 = parse_matrix(*it, "X0");
  } else {
    X0 = Eigen::MatrixXd::Identity(plant.A.rows(), plant.A.rows());
  }

  ConstraintSet constraints = parse_constraints(root);
  Eigen::MatrixXd K0 = parse_matrix(require(root, "K0"), "K0");
  SolverParams params = parse_solver(root);

  try {
    SofProblem problem(std::move(plant), CostSpec{std::move(Q), std::move(R), std::move(X0)},
                       std::move(constraints));
    problem.check_gain(K0);
    return {std::move(name), std::move(problem), std::move(K0), params};
  } catch (const DimensionError& e) {
    throw ParseError(e.what(), field_of(e.what()));
  } catch (const InvalidArgumentError& e) {
    throw ParseError(e.what(), field_of(e.what()));
  }
}

ProblemDefinition load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path.string() + "'", "");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

std::string dump_problem(const ProblemDefinition& definition) {
  const SofProblem& p = definition.problem;
  ordered_json root;
  root["name"] = definition.name;
  root["A"] = matrix_json(p.plant().A);
  root["B"] = matrix_json(p.plant().B);
  root["C"] = matrix_json(p.plant().C);
  root["Q"] = matrix_json(p.cost_spec().Q);
  root["R"] = matrix_json(p.cost_spec().R);
  root["X0"] = matrix_json(p.cost_spec().X0);

  ordered_json constraints = ordered_json::array();
  for (const auto& c : p.constraints().constraints()) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : c.terms) {
      ordered_json term;
      term["left"] = matrix_json(t.left);
      term["right"] = matrix_json(t.right);
      terms.push_back(std::move(term));
    }
    ordered_json entry;
    entry["terms"] = std::move(terms);
    entry["rhs"] = matrix_json(c.rhs);
    constraints.push_back(std::move(entry));
  }
  root["constraints"] = std::move(constraints);
  root["K0"] = matrix_json(definition.K0);

  const SolverParams& s = definition.params;
  ordered_json solver;
  solver["method"] = std::string(to_string(s.method));
  solver["tol"] = s.tol;
  solver["pt_eps"] = s.pt_eps;
  solver["alpha"] = s.alpha;
  solver["beta"] = s.beta;
  solver["max_iters"] = s.max_iters;
  root["solver"] = std::move(solver);
  return pretty(root);
}

std::string dump_result(const ProblemDefinition& definition, const SolveResult& result) {
  ordered_json root;
  root["name"] = definition.name;
  root["method"] = std::string(to_string(definition.params.method));
  root["converged"] = result.converged();
  root["termination"] = std::string(to_string(result.termination));
  root["iterations"] = result.iterations;
  root["line_search_evaluations"] = result.line_search_evaluations;
  root["cost"] = result.cost;
  root["initial_cost"] = result.trace.records.empty() ? 0.0 : result.trace.records.front().cost;
  root["final_measure"] = result.final_measure;
  root["K"] = matrix_json(result.K);
  root["warnings"] = result.warnings;
  return pretty(root);
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "iter,J,grad_norm,step_norm,step_size_t,spectral_abscissa,cumulative_seconds,delta_J,"
         "evals,min_eig_Pg\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& r : trace.records) {
    // Late decreases can be far below double resolution of J; print the
    // accumulated hi + lo pair to 30 digits so the column stays monotone.
    const boost::multiprecision::cpp_dec_float_50 J =
        boost::multiprecision::cpp_dec_float_50(r.cost) + r.cost_low;
    out << r.iteration << ',' << J.str(30) << ',' << r.gradient_norm << ',' << r.step_norm << ','
        << r.step_size << ',' << r.spectral_abscissa << ',' << r.seconds << ',' << r.cost_decrease
        << ',' << r.evaluations << ',' << r.min_eig_pg << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace soflqr
