#pragma once

#include <string>
#include <vector>

#include "coldchain/lp/problem.hpp"

namespace coldchain::lp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus s);

/// Basis snapshot for warm starts: one basic variable per row (structural id
/// in [0, n) or logical id n + r), plus at-upper-bound markers for nonbasics.
struct Basis {
  std::vector<int> basic;          // size m
  std::vector<std::uint8_t> at_upper; // size n + m, nonbasic rest position
  bool empty() const { return basic.empty(); }
};

struct SolverOptions {
  double tol_feas = 1e-7;        // scaled primal feasibility
  double tol_dual = 1e-7;        // reduced-cost optimality
  double tol_pivot = 1e-9;       // minimum acceptable pivot magnitude
  std::int64_t max_iters = -1;   // -1: 200000 + 40 * (m + n)
  int refactor_interval = 100;   // basis refactorizations, in pivots
  bool scale = true;             // geometric-mean equilibration
  int bland_trigger = 800;       // degenerate pivots before Bland's rule kicks in
  bool verbose = false;
};

struct LpSolution {
  SolveStatus status = SolveStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;             // per column
  std::vector<double> row_activity;  // per row
  std::vector<double> dual;          // simplex multipliers y, per row
  std::vector<double> reduced_cost;  // per column
  std::int64_t iterations = 0;
  double solve_seconds = 0.0;
  double max_primal_residual = 0.0;

  // Certificates: unbounded ray (per column) or infeasible row set.
  std::vector<double> ray;
  std::vector<int> infeasible_rows;

  Basis basis;                       // reusable for warm starts

  /// Dual objective from the multipliers; gap vs primal is the optimality
  /// certificate (<= 1e-6 * (1 + |objective|) at Optimal).
  double dual_objective(const LinearProgram& lp) const;
};

/// Bounded-variable revised simplex (maximization): two-phase with a
/// singleton crash, LU-factorized basis with eta updates and periodic
/// refactorization, Dantzig pricing with Bland fallback. Deterministic for
/// identical inputs.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {},
                 const Basis* warm_start = nullptr);

} // namespace coldchain::lp
