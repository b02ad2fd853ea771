#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "soflqr/errors.hpp"
#include "soflqr/examples.hpp"
#include "soflqr/solve_result.hpp"

namespace soflqr {

/// Malformed problem file. field() names the offending entry ("B",
/// "constraints[1].terms[0].left", ...) or is empty for syntax errors, in
/// which case line()/column() locate the problem.
class ParseError : public SofError {
 public:
  ParseError(const std::string& what, std::string field, int line = 0, int column = 0)
      : SofError(what), field_(std::move(field)), line_(line), column_(column) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string field_;
  int line_;
  int column_;
};

/// Problem files are JSON objects:
///
///   {
///     "name": "example2",
///     "A": [[...], ...], "B": ..., "C": ...,
///     "Q": ..., "R": ...,              (or "performance": {"C1", "D1", "W"})
///     "X0": ...,                       (optional, identity when omitted)
///     "constraints": [ {"terms": [{"left": ..., "right": ...}], "rhs": ...} ],
///     "K0": ...,
///     "solver": {"method": "newton", "tol": 1e-9, "pt_eps": 1e-6,
///                "alpha": 0.2, "beta": 0.1, "max_iters": 5000}
///   }
///
/// Matrices are arrays of rows. Numbers are written in shortest round-trip
/// form, so dump/parse reproduces every entry bit for bit.
ProblemDefinition parse_problem(std::string_view text);
ProblemDefinition load_problem(const std::filesystem::path& path);
std::string dump_problem(const ProblemDefinition& definition);

/// JSON summary of a finished solve (gain, cost, counts, termination).
/// Deterministic: contains no timing information.
std::string dump_result(const ProblemDefinition& definition, const SolveResult& result);

/// Comma-separated trace with header
///   iter,J,grad_norm,step_norm,step_size_t,spectral_abscissa,cumulative_seconds,
///   delta_J,evals,min_eig_Pg
void write_trace_csv(std::ostream& out, const SolveTrace& trace);

}  // namespace soflqr
