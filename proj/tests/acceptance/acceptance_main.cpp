// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fail.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "soflqr/examples.hpp"
#include "soflqr/first_order.hpp"
#include "soflqr/hessian.hpp"
#include "soflqr/linalg.hpp"
#include "soflqr/lyapunov.hpp"
#include "soflqr/newton.hpp"
#include "soflqr/verify.hpp"
#include "support/random_instances.hpp"

namespace {

using namespace soflqr;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Every solver run below is also fed to the descent-with-stability check.
std::vector<std::pair<std::string, SolveResult>> g_runs;

const SolveResult& record(std::string label, SolveResult r) {
  g_runs.emplace_back(std::move(label), std::move(r));
  return g_runs.back().second;
}

Eigen::MatrixXd aircraft_reference() {
  Eigen::MatrixXd K(2, 3);
  K << 0.3975, 1.5925, 7.8522, -1.2575, -3.4823, -5.0041;
  return K;
}

Eigen::MatrixXd decentralized_reference() { return Eigen::Vector2d(-1.3211, -6.0723).asDiagonal(); }

double max_entry_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

SolveResult run(const ProblemDefinition& def, Method method, double tol) {
  SolverParams p = def.params;
  p.method = method;
  p.tol = tol;
  return method == Method::Newton ? newton_solve(def.problem, def.K0, p)
                                  : first_order_solve(def.problem, def.K0, p);
}

Outcome aircraft_newton() {
  const auto def = builtin_example("example1");
  const auto& r = record("example1/newton", run(def, Method::Newton, 1e-9));
  const double dk = max_entry_error(r.K, aircraft_reference());
  Outcome o;
  o.pass = r.converged() && dk <= 2e-3 && std::abs(r.cost - 159.0686) <= 1e-2 && r.iterations <= 40;
  o.detail = "iters=" + std::to_string(r.iterations) + " J=" + fmt("%.6f", r.cost) +
             " max|K-K*|=" + fmt("%.2e", dk);
  return o;
}

Outcome aircraft_first_order() {
  const auto def = builtin_example("example1");
  const auto& r = record("example1/grad", run(def, Method::Gradient, 1e-5));
  const double dk = max_entry_error(r.K, aircraft_reference());
  Outcome o;
  o.pass = r.converged() && dk <= 2e-3 && std::abs(r.cost - 159.0686) <= 1e-2 && r.iterations >= 300 &&
           r.iterations <= 1500;
  o.detail = "iters=" + std::to_string(r.iterations) + " J=" + fmt("%.6f", r.cost) +
             " max|K-K*|=" + fmt("%.2e", dk);
  return o;
}

Outcome decentralized_newton() {
  const auto def = builtin_example("example2");
  const auto& r = record("example2/newton", run(def, Method::Newton, 1e-9));
  const double dk = max_entry_error(r.K, decentralized_reference());
  const double J0 = r.trace.records.front().cost;
  // Replay the run one iteration at a time to inspect every iterate.
  double off = 0.0;
  for (int k = 0; k <= r.iterations; ++k) {
    SolverParams p = def.params;
    p.max_iters = k;
    const SolveResult partial = newton_solve(def.problem, def.K0, p);
    off = std::max({off, std::abs(partial.K(0, 1)), std::abs(partial.K(1, 0))});
  }
  Outcome o;
  o.pass = r.converged() && dk <= 1e-3 && std::abs(r.cost - 12.8281) <= 1e-3 &&
           std::abs(J0 - 22.2010) <= 1e-3 && r.iterations <= 15 && off <= 1e-9;
  o.detail = "iters=" + std::to_string(r.iterations) + " J0=" + fmt("%.6f", J0) + " J=" +
             fmt("%.6f", r.cost) + " max|K-K*|=" + fmt("%.2e", dk) + " max|offdiag|=" + fmt("%.1e", off);
  return o;
}

Outcome decentralized_first_order() {
  const auto def = builtin_example("example2");
  const auto& r = record("example2/grad", run(def, Method::Gradient, 1e-9));
  const double dk = max_entry_error(r.K, decentralized_reference());
  Outcome o;
  o.pass = r.converged() && dk <= 1e-3 && std::abs(r.cost - 12.8281) <= 1e-3 && r.iterations >= 60 &&
           r.iterations <= 300;
  o.detail = "iters=" + std::to_string(r.iterations) + " J=" + fmt("%.6f", r.cost) +
             " max|K-K*|=" + fmt("%.2e", dk);
  return o;
}

Outcome iteration_ratio() {
  Outcome o;
  for (const char* name : {"example1", "example2"}) {
    const auto def = builtin_example(name);
    const double tol = 1e-9;
    const auto& n = record(std::string(name) + "/newton@1e-9", run(def, Method::Newton, tol));
    const auto& g = record(std::string(name) + "/grad@1e-9", run(def, Method::Gradient, tol));
    const bool ok = n.converged() && g.converged() && 4 * n.iterations <= g.iterations;
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += std::string(name) + ": newton=" + std::to_string(n.iterations) +
                " grad=" + std::to_string(g.iterations) + " at tol 1e-9";
  }
  return o;
}

Outcome gradient_oracle() {
  testing::Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.integer(1, 6);
    const int m = rng.integer(1, 3);
    const int q = rng.integer(1, 3);
    auto inst = testing::random_instance(rng, n, m, q);
    const SofProblem p(inst.plant, inst.cost);
    const auto r = verify::compare(gradient(p, inst.K).grad, verify::fd_gradient(p, inst.K));
    worst = std::max(worst, r.max_rel_error);
  }
  return {worst <= 1e-5, "25 instances, max rel error " + fmt("%.2e", worst)};
}

Outcome hessian_oracle() {
  testing::Rng rng(1002);
  double worst = 0.0;
  double asym = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(2, 4);
    auto inst = testing::random_instance(rng, n, 2, 2);
    const SofProblem p(inst.plant, inst.cost);
    const auto H = hessian(p, inst.K, gradient(p, inst.K));
    worst = std::max(worst, verify::compare(H.value, verify::fd_hessian(p, inst.K)).max_rel_error);
    asym = std::max(asym, H.asymmetry);
  }
  return {worst <= 1e-4 && asym <= 1e-6,
          "10 instances, max rel error " + fmt("%.2e", worst) + ", max asymmetry " + fmt("%.2e", asym)};
}

Outcome lyapunov_cross_check() {
  testing::Rng rng(1003);
  double worst = 0.0;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    auto inst = testing::random_instance(rng, n, rng.integer(1, 3), rng.integer(1, 3));
    const Eigen::MatrixXd Ac = closed_loop(inst.plant, inst.K);
    const Eigen::MatrixXd Qc = effective_weight(inst.cost, inst.plant, inst.K);
    const auto sol = solve_lyapunov_primal(Ac, Qc);
    const Eigen::MatrixXd ref = verify::kron_lyapunov(Ac, Qc);
    worst = std::max(worst, (sol.value - ref).norm() / ref.norm());
    worst_residual = std::max(worst_residual, sol.residual_norm / std::max(1.0, Qc.norm()));
  }
  return {worst <= 1e-8 && worst_residual <= 1e-8,
          "50 instances, max rel error " + fmt("%.2e", worst) + ", max scaled residual " +
              fmt("%.2e", worst_residual)};
}

Outcome are_consistency() {
  testing::Rng rng(1004);
  double worst = 0.0;
  bool all_converged = true;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(2, 5);
    const int m = rng.integer(1, 3);
    Plant plant{rng.gaussian(n, n), rng.gaussian(n, m), Eigen::MatrixXd::Identity(n, n)};
    const CostSpec cost{rng.spd(n), rng.spd(m, 0.5), Eigen::MatrixXd::Identity(n, n)};
    const auto are = verify::are_gain(plant, cost);
    const SofProblem p(plant, cost);
    const Eigen::MatrixXd K0 = verify::stabilizing_state_feedback(plant.A, plant.B);
    const auto& r = record("are/" + std::to_string(trial), newton_solve(p, K0, SolverParams::newton_defaults()));
    all_converged = all_converged && r.converged();
    worst = std::max(worst, max_entry_error(r.K, are.gain));
  }
  return {all_converged && worst <= 1e-6, "10 instances, max |K*-K_are| " + fmt("%.2e", worst)};
}

Outcome pt_property() {
  testing::Rng rng(1005);
  double worst_floor = 0.0;
  double worst_commutator = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(2, 8);
    const double eps = trial % 2 ? 1e-6 : 1e-9;
    // Mixed-sign spectrum with a few eigenvalues below the floor.
    Eigen::VectorXd lambda(n);
    for (int k = 0; k < n; ++k) {
      const double mag = k % 3 == 2 ? 1e-3 * eps * rng.uniform(0.0, 1.0) : rng.uniform(0.1, 5.0);
      lambda(k) = (k % 2 ? -1.0 : 1.0) * mag;
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.gaussian(n, n));
    const Eigen::MatrixXd V = qr.householderQ();
    const Eigen::MatrixXd H = symmetrize(V * lambda.asDiagonal() * V.transpose());
    const PTMatrix pt = pt_matrix(H, eps);
    const double floor = min_symmetric_eigenvalue(pt.value);
    const double commutator = (pt.value * H - H * pt.value).norm();
    ok = ok && floor >= eps - 1e-12 && commutator <= 1e-8;
    worst_floor = std::max(worst_floor, std::max(0.0, eps - floor));
    worst_commutator = std::max(worst_commutator, commutator);
  }
  return {ok, "30 matrices, max shortfall below eps " + fmt("%.2e", worst_floor) +
                  ", max ||[H_eps,H]|| " + fmt("%.2e", worst_commutator)};
}

Outcome descent_with_stability() {
  Outcome o;
  std::size_t steps = 0;
  for (const auto& [label, r] : g_runs) {
    const auto& recs = r.trace.records;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const auto& rec = recs[k];
      bool ok = rec.spectral_abscissa < 0.0 && rec.min_eig_pg > 0.0;
      if (k > 0) {
        ++steps;
        // Compare accumulated costs as hi + lo pairs.
        const auto& prev = recs[k - 1];
        const bool lower = rec.cost < prev.cost || (rec.cost == prev.cost && rec.cost_low < prev.cost_low);
        ok = ok && rec.cost_decrease < 0.0 && lower;
      }
      if (!ok) {
        o.pass = false;
        o.detail += label + " row " + std::to_string(k) + " violates; ";
      }
    }
  }
  o.detail += std::to_string(g_runs.size()) + " runs, " + std::to_string(steps) + " accepted steps checked";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {"Example 1 Newton", aircraft_newton},
      {"Example 1 first-order", aircraft_first_order},
      {"Example 2 Newton", decentralized_newton},
      {"Example 2 first-order", decentralized_first_order},
      {"Iteration ratio", iteration_ratio},
      {"Gradient oracle suite", gradient_oracle},
      {"Hessian oracle suite", hessian_oracle},
      {"Lyapunov cross-check", lyapunov_cross_check},
      {"ARE consistency", are_consistency},
      {"PT-matrix property", pt_property},
      {"Descent with stability", descent_with_stability},
  };
  int failures = 0;
  int id = 0;
  for (const auto& c : criteria) {
    ++id;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %2d  %-24s %s\n", o.pass ? "PASS" : "FAIL", id, c.name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", id - failures, id);
  return failures == 0 ? 0 : 1;
}
