#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace stoba {

inline const double kInvE = std::exp(-1.0);
inline const double kOneMinusInvE = 1.0 - std::exp(-1.0);

enum class SpaceTag { F0, F1, F3, F4 };

std::string space_name(SpaceTag space);
SpaceTag space_from_name(const std::string& name);

/* A constraint of the function-space membership check that failed:
 * which family of constraints, at which grid index, and by how much. */
struct Violation {
    std::string constraint;  // "range" | "monotone" | "tail" | "envelope" | "terminal" | "derivative"
    int t = 0;
    double residual = 0.0;
};

/* Gain-sharing function discretized on {0, 1/n, ..., 1}, constant tail beyond 1. */
struct GridFunction {
    int n = 1;
    std::vector<double> values;  // x_0..x_n, x_t = f(t/n)
    double tail = 0.0;

    // Throws std::invalid_argument when the shape or ranges are off.
    void validate() const;

    /* Piecewise-constant right-endpoint lookup: f(z) = x_ceil(z*n) for z in [0,1],
     * tail for z > 1. Negative z is a domain error. */
    double value_at(double z) const;
};

// f*(z) = 1 - (e^{-z} + e^{z-2})/2 on [0,1], constant 1 - 1/e beyond.
double analytic_f4_value(double z);

GridFunction sample_analytic_f4(int n);

// The F3 lower envelope x_t = 1 - e^{-t/n} as a grid function (tail 1 - 1/e).
GridFunction envelope_function(int n);

// Pointwise lower bound of the space at grid index t: 1 - e^{-t/n} for F3/F4, 0 otherwise.
double lower_envelope_value(SpaceTag space, int t, int n);

/* Membership check; empty result means f lies in the space up to additive tol.
 * Violations are returned as data, never thrown. */
std::vector<Violation> check_space(const GridFunction& f, SpaceTag space, double tol = 1e-9);

std::string grid_function_to_json(const GridFunction& f);
GridFunction grid_function_from_json(const std::string& text);
std::string grid_function_to_csv(const GridFunction& f);  // columns t, z, x_t

}  // namespace stoba
