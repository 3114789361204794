#pragma once

#include "stoba/lp_model.hpp"

#include <cstdint>
#include <vector>

namespace stoba::detail {

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/* Generic maximization LP for the dense tableau core. Variables are
 * nonnegative unless flagged free; rows may use any relation. */
struct SimplexProblem {
    int nvars = 0;
    std::vector<double> objective;
    std::vector<uint8_t> free_var;
    struct Row {
        std::vector<std::pair<int, double>> terms;
        Rel rel = Rel::LE;
        double rhs = 0.0;
    };
    std::vector<Row> rows;
};

struct SimplexResult {
    SimplexStatus status = SimplexStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;
    long iterations = 0;
};

/* Two-phase dense tableau simplex with Bland's rule, preceded by a light
 * presolve (singleton rows become bounds, fixed variables substituted,
 * finite lower bounds shifted, free variables split). Deterministic. */
SimplexResult solve_simplex(const SimplexProblem& prob, long max_iter);

}  // namespace stoba::detail
