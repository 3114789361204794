#include "stoba/lp_solver.hpp"

#include "stoba/simplex.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace stoba {

namespace {

SolveStatus map_status(detail::SimplexStatus s) {
    switch (s) {
        case detail::SimplexStatus::Optimal: return SolveStatus::Optimal;
        case detail::SimplexStatus::Infeasible: return SolveStatus::Infeasible;
        case detail::SimplexStatus::Unbounded: return SolveStatus::Unbounded;
        case detail::SimplexStatus::IterationLimit: return SolveStatus::IterationLimit;
    }
    throw std::logic_error("unknown simplex status");
}

/* Only y is sign-unrestricted; the x variables are pinned by envelope/box rows
 * and keeping them nonnegative matches every family's constraint set. */
std::vector<uint8_t> free_flags(const LPInstance& lp) {
    std::vector<uint8_t> f(lp.num_vars, 0);
    for (int k = 0; k < lp.num_vars; ++k)
        if (lp.var_names[k] == "y") f[k] = 1;
    return f;
}

detail::SimplexProblem restricted_problem(const LPInstance& lp,
                                          const std::vector<std::size_t>& row_ids) {
    detail::SimplexProblem prob;
    prob.nvars = lp.num_vars;
    prob.objective.assign(lp.num_vars, 0.0);
    for (auto [k, a] : lp.objective.terms) prob.objective[k] += a;
    prob.free_var = free_flags(lp);
    prob.rows.reserve(row_ids.size());
    for (std::size_t id : row_ids) {
        Constraint c = lp.constraint(id);
        prob.rows.push_back({std::move(c.row.terms), c.rel, c.rhs});
    }
    return prob;
}

long iteration_cap(std::size_t rows, std::size_t cols) {
    return 50L * static_cast<long>(rows + cols);
}

}  // namespace

std::string solve_status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::IterationLimit: return "iteration_limit";
        case SolveStatus::Unbounded: return "unbounded";
    }
    throw std::logic_error("unknown status");
}

ViolationReport most_violated(const LPInstance& lp, const std::vector<double>& assignment) {
    const std::size_t m = lp.num_constraints();
    ViolationReport best{0, -std::numeric_limits<double>::infinity()};
    for (std::size_t id = 0; id < m; ++id) {
        double v = lp.row_violation(id, assignment);
        if (v > best.violation) best = {id, v};
    }
    return best;
}

FeasReport check_feasible(const LPInstance& lp, const std::vector<double>& assignment,
                          double tol) {
    ViolationReport worst = most_violated(lp, assignment);
    FeasReport rep;
    rep.max_residual = std::max(0.0, worst.violation);
    rep.worst_row = worst.row_id;
    rep.feasible = rep.max_residual <= tol;
    return rep;
}

LPSolution solve_full(const LPInstance& lp, double feas_tol) {
    const std::size_t m = lp.num_constraints();
    if (m > 10000)
        throw std::invalid_argument("solve_full is guarded at 10^4 constraints; use solve_lazy");
    std::vector<std::size_t> ids(m);
    for (std::size_t i = 0; i < m; ++i) ids[i] = i;
    detail::SimplexProblem prob = restricted_problem(lp, ids);
    auto res = detail::solve_simplex(prob, iteration_cap(m, lp.num_vars + m));

    LPSolution sol;
    sol.status = map_status(res.status);
    sol.objective_value = res.objective;
    sol.assignment = std::move(res.x);
    sol.diagnostics.iterations = res.iterations;
    sol.diagnostics.active_w2_rows = lp.num_w2();
    sol.diagnostics.cut_rounds = 0;
    if (sol.status == SolveStatus::Optimal)
        sol.diagnostics.max_residual = check_feasible(lp, sol.assignment, feas_tol).max_residual;
    return sol;
}

LPSolution solve_lazy(const LPInstance& lp, double feas_tol, double cut_tol) {
    if (lp.num_w2() == 0) return solve_full(lp, feas_tol);
    const int n = lp.n;

    std::vector<std::size_t> working;
    std::vector<uint8_t> in_set(lp.num_constraints(), 0);
    auto add_row = [&](std::size_t id) {
        if (!in_set[id]) {
            in_set[id] = 1;
            working.push_back(id);
        }
    };
    for (std::size_t id = 0; id < lp.num_base(); ++id) add_row(id);
    for (int i = 0; i <= n; ++i) {
        add_row(lp.w2_row_id(i, 0));
        add_row(lp.w2_row_id(i, n - i));
    }

    LPSolution sol;
    const int max_rounds = 500;
    for (int round = 1; round <= max_rounds; ++round) {
        detail::SimplexProblem prob = restricted_problem(lp, working);
        auto res = detail::solve_simplex(
            prob, iteration_cap(working.size(), lp.num_vars + working.size()));
        sol.status = map_status(res.status);
        sol.objective_value = res.objective;
        sol.assignment = std::move(res.x);
        sol.diagnostics.iterations += res.iterations;
        sol.diagnostics.cut_rounds = round;
        if (sol.status != SolveStatus::Optimal) break;

        /* Scan the whole family; queue the most violated row of each i-block
         * so deep cuts arrive together and restricted solves stay few. */
        double worst = 0.0;
        std::vector<std::size_t> cuts;
        for (int i = 0; i <= n; ++i) {
            std::size_t best_id = 0;
            double best_v = cut_tol;
            for (int j = 0; j <= n - i; ++j) {
                std::size_t id = lp.w2_row_id(i, j);
                double v = lp.row_violation(id, sol.assignment);
                if (v > best_v) {
                    best_v = v;
                    best_id = id;
                }
            }
            if (best_v > cut_tol) {
                cuts.push_back(best_id);
                worst = std::max(worst, best_v);
            }
        }
        if (cuts.empty()) break;  // no violation above cut_tol anywhere

        /* Purge W2 rows that went slack at the current point; without this the
         * working set only grows and late rounds dominate the runtime. */
        const double drop_tol = 1e-7;
        std::vector<std::size_t> kept;
        kept.reserve(working.size() + cuts.size());
        for (std::size_t id : working) {
            if (lp.is_w2(id) && lp.row_violation(id, sol.assignment) < -drop_tol)
                in_set[id] = 0;
            else
                kept.push_back(id);
        }
        working = std::move(kept);
        for (std::size_t id : cuts) add_row(id);
    }

    std::size_t active_w2 = 0;
    for (std::size_t id : working)
        if (lp.is_w2(id)) ++active_w2;
    sol.diagnostics.active_w2_rows = active_w2;
    if (sol.status == SolveStatus::Optimal)
        sol.diagnostics.max_residual = check_feasible(lp, sol.assignment, feas_tol).max_residual;
    return sol;
}

}  // namespace stoba
