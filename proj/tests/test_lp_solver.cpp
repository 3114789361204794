#include "stoba/lp_solver.hpp"

#include "stoba/adversary.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace stoba;

namespace {
std::vector<double> pack(double y, const std::vector<double>& x) {
    std::vector<double> a{y};
    a.insert(a.end(), x.begin(), x.end());
    return a;
}

Constraint make_row(std::vector<std::pair<int, double>> terms, Rel rel, double rhs) {
    Constraint c;
    c.row.terms = std::move(terms);
    c.rel = rel;
    c.rhs = rhs;
    return c;
}
}  // namespace

TEST_CASE("reference solve of aug(10) matches the frozen optimum") {
    LPSolution sol = solve_full(build_aug_lp(10));
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective_value == doctest::Approx(0.57127529).epsilon(1e-7));  // frozen oracle
    CHECK(sol.diagnostics.max_residual <= 1e-9);
}

TEST_CASE("reference solve of the F0 upper bound at n=10") {
    LPSolution sol = solve_full(build_aug_ub_lp(10, SpaceTag::F0));
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective_value == doctest::Approx(0.57359468).epsilon(1e-7));  // frozen oracle
}

TEST_CASE("contradictory bounds are reported infeasible") {
    SparseRow obj;
    obj.terms = {{0, 1.0}};
    std::vector<Constraint> rows;
    rows.push_back(make_row({{0, 1.0}}, Rel::GE, 0.5));
    rows.push_back(make_row({{0, 1.0}}, Rel::LE, 0.2));
    LPInstance lp = LPInstance::custom(1, {"x_0"}, obj, rows);
    CHECK(solve_full(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("generic rows without slack basis still solve (two-phase path)") {
    // max x0 + x1  s.t.  x0 + x1 = 1, x0 - x1 >= 0.2, x0 <= 0.9 -> optimum 1
    SparseRow obj;
    obj.terms = {{0, 1.0}, {1, 1.0}};
    std::vector<Constraint> rows;
    rows.push_back(make_row({{0, 1.0}, {1, 1.0}}, Rel::EQ, 1.0));
    rows.push_back(make_row({{0, 1.0}, {1, -1.0}}, Rel::GE, 0.2));
    rows.push_back(make_row({{0, 1.0}}, Rel::LE, 0.9));
    LPInstance lp = LPInstance::custom(2, {"x_0", "x_1"}, obj, rows);
    LPSolution sol = solve_full(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.assignment[0] - sol.assignment[1] >= 0.2 - 1e-9);
}

TEST_CASE("lazy and full solves agree across families and sizes") {
    for (int n : {5, 10, 25, 50}) {
        double full_aug = solve_full(build_aug_lp(n)).objective_value;
        double lazy_aug = solve_lazy(build_aug_lp(n)).objective_value;
        CHECK(std::abs(full_aug - lazy_aug) <= 1e-9);
        double full_ub = solve_full(build_aug_ub_lp(n, SpaceTag::F0)).objective_value;
        double lazy_ub = solve_lazy(build_aug_ub_lp(n, SpaceTag::F0)).objective_value;
        CHECK(std::abs(full_ub - lazy_ub) <= 1e-9);
        CHECK(full_aug >= 0.0);
        CHECK(full_aug <= kOneMinusInvE + 1e-12);
    }
}

TEST_CASE("repeated solves are bit-identical") {
    LPSolution a = solve_lazy(build_aug_lp(25));
    LPSolution b = solve_lazy(build_aug_lp(25));
    CHECK(a.objective_value == b.objective_value);
    REQUIRE(a.assignment.size() == b.assignment.size());
    for (std::size_t k = 0; k < a.assignment.size(); ++k)
        CHECK(a.assignment[k] == b.assignment[k]);
}

TEST_CASE("cauchy refinement bound at small n") {
    double e10 = solve_lazy(build_aug_lp(10)).objective_value;
    double e20 = solve_lazy(build_aug_lp(20)).objective_value;
    double e25 = solve_lazy(build_aug_lp(25)).objective_value;
    double e50 = solve_lazy(build_aug_lp(50)).objective_value;
    CHECK(std::abs(e20 - e10) <= kOneMinusInvE / 20.0);
    CHECK(std::abs(e50 - e25) <= kOneMinusInvE / 50.0);
    CHECK(e10 == doctest::Approx(0.57127529).epsilon(1e-7));
    CHECK(e20 == doctest::Approx(0.57600165).epsilon(1e-7));
    CHECK(e25 == doctest::Approx(0.57689524).epsilon(1e-7));
    CHECK(e50 == doctest::Approx(0.57865014).epsilon(1e-7));
}

TEST_CASE("the F1 cap reproduces the aug optimum at n=10") {
    double eta = solve_full(build_aug_lp(10)).objective_value;
    double zeta1 = solve_full(build_aug_ub_lp(10, SpaceTag::F1)).objective_value;
    CHECK(std::abs(eta - zeta1) <= 1e-9);
}

TEST_CASE("discrete-p optimum stays within p of the aug optimum") {
    double tau01 = solve_full(build_discrete_p_lp(0.1)).objective_value;
    double eta10 = solve_full(build_aug_lp(10)).objective_value;
    CHECK(std::abs(tau01 - eta10) <= 0.1);
}

TEST_CASE("most violated row on hand-built points") {
    LPInstance lp = build_aug_lp(1);
    ViolationReport rep = most_violated(lp, {1.0, 0.0, kOneMinusInvE});
    CHECK(rep.row_id == lp.w2_row_id(0, 1));
    CHECK(rep.violation == doctest::Approx(1.0 - kInvE).epsilon(1e-12));

    GridFunction env = envelope_function(1);
    CHECK(most_violated(lp, pack(0.0, env.values)).violation <= 1e-15);
    CHECK(most_violated(lp, pack(-1.0, env.values)).violation <= 0.0);
}

TEST_CASE("feasibility checker finds planted violations") {
    LPInstance lp = build_aug_lp(50);
    GridFunction env = envelope_function(50);
    FeasReport rep = check_feasible(lp, pack(0.0, env.values), 1e-12);
    CHECK(rep.feasible);
    CHECK(rep.max_residual <= 1e-12);

    LPSolution sol = solve_full(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    std::vector<double> bad = sol.assignment;
    bad[1 + 20] += 0.1;  // x_20 bump breaks monotonicity or a W2 row
    FeasReport worst = check_feasible(lp, bad, 1e-9);
    CHECK_FALSE(worst.feasible);
    bool mono_or_w2 = lp.is_w2(worst.worst_row) ||
                      lp.constraint(worst.worst_row).row.terms.size() == 2;
    CHECK(mono_or_w2);
}

TEST_CASE("lazy residuals are certified against the whole family") {
    LPSolution sol = solve_lazy(build_aug_lp(80));
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.diagnostics.max_residual <= 1e-9);
    CHECK(sol.diagnostics.active_w2_rows < build_aug_lp(80).num_w2());
}

TEST_CASE("solve_full guard rejects oversized instances") {
    CHECK_THROWS_AS(solve_full(build_aug_lp(200)), std::invalid_argument);
}
