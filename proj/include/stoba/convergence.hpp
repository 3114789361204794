#pragma once

#include "stoba/lp_solver.hpp"
#include "stoba/rng.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stoba {

struct MappedSolution {
    double y = 0.0;
    std::vector<double> x;
};

/* n -> 2n map: duplicate every interior sample and pay (1-1/e)/(2n) in y.
 * The input must be feasible in the n-grid LP; the output is feasible at 2n. */
MappedSolution double_solution(double y, const std::vector<double>& x, int n,
                               double tol = 1e-9);

/* 2n -> n map: average sample pairs and pay (1-1/e)/(2n) in y. */
MappedSolution halve_solution(double y_tilde, const std::vector<double>& x_tilde, int n,
                              double tol = 1e-9);

// (eta - tau/n, eta + tau/n): the certified interval around the limit value.
std::pair<double, double> bound_from_eta(int n, double eta, double tau);

// zeta + tau/n: the certified upper bound from the upper-bound family.
double bound_from_zeta(int n, double zeta, double tau);

enum class Rounding { Down, Up, Nearest };

// Render at 4 decimals: floor, ceiling, or half-up nearest at 1e-4 granularity.
std::string round_report(double value, Rounding direction);

struct BoundReport {
    Family family = Family::AUG;
    SpaceTag space = SpaceTag::F3;
    int n = 1;
    double value = 0.0;
    double tau = 0.0;
    std::optional<double> lower;  // value - tau/n; only the AUG family certifies one
    double upper = 0.0;           // value + tau/n
    std::string rounded_value;    // nearest; the published value columns round to nearest
    std::optional<std::string> rounded_lower;  // floor of (rounded value - tau/n)
    std::string rounded_upper;                 // ceiling of (rounded value + tau/n)
    SolveDiagnostics solver;
    SolveStatus status = SolveStatus::Optimal;
};

BoundReport make_bound_report(Family family, int n, const LPSolution& sol, double tau);
std::string bound_report_to_json(const BoundReport& report);

/* One table row per n: value/lower/upper from the AUG family plus value/upper
 * from the F0 upper-bound family, under the published rounding conventions. */
struct TableRow {
    int n = 1;
    std::string eta, eta_lower, eta_upper, zeta, zeta_upper;
};
std::string table_to_csv(const std::vector<TableRow>& rows);

/* Random feasible point of the n-grid LP: x sampled between the envelope and
 * 1 - 1/e with sorted uniform mixing weights, y at the W-row minimum minus a
 * uniform slack in [0, 0.1]. */
MappedSolution random_aug_feasible_point(int n, SplitMix64& rng);

}  // namespace stoba
