#pragma once

#include "stoba/lp_model.hpp"

#include <cstddef>
#include <vector>

namespace stoba {

enum class SolveStatus { Optimal, Infeasible, IterationLimit, Unbounded };

std::string solve_status_name(SolveStatus status);

struct SolveDiagnostics {
    long iterations = 0;        // simplex pivots, summed over restricted solves
    std::size_t active_w2_rows = 0;
    int cut_rounds = 0;
    double max_residual = 0.0;  // over every row of the instance, lazy ones included
};

struct LPSolution {
    double objective_value = 0.0;
    std::vector<double> assignment;  // per variable, y first
    SolveStatus status = SolveStatus::IterationLimit;
    SolveDiagnostics diagnostics;
};

struct ViolationReport {
    std::size_t row_id = 0;
    double violation = 0.0;  // <= 0 means the assignment is feasible
};

struct FeasReport {
    double max_residual = 0.0;
    std::size_t worst_row = 0;
    bool feasible = true;
};

/* Reference path: materializes every constraint (guarded at 10^4 rows) and
 * hands the whole LP to the dense simplex core. */
LPSolution solve_full(const LPInstance& lp, double feas_tol = 1e-9);

/* Scaling path: starts from the base rows plus the W2 diagonals j in {0, n-i},
 * then alternates restricted solves with scans of the full W2 family, adding
 * the most violated row of each i-block until no violation exceeds cut_tol.
 * The final point is re-verified against the complete family. */
LPSolution solve_lazy(const LPInstance& lp, double feas_tol = 1e-9, double cut_tol = 1e-10);

// Largest positive violation over every row, ties to the smallest row id.
ViolationReport most_violated(const LPInstance& lp, const std::vector<double>& assignment);

FeasReport check_feasible(const LPInstance& lp, const std::vector<double>& assignment,
                          double tol = 1e-9);

}  // namespace stoba
