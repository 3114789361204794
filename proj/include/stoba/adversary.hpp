#pragma once

#include "stoba/grid_function.hpp"

#include <cstdint>
#include <vector>

namespace stoba {

/* A worst-case arrival plan against a single target node: pre-load ell,
 * total arriving load psi split into a Type I prefix psi_tilde and a
 * Type II remainder psi - psi_tilde. */
struct AdversaryStrategy {
    double ell = 0.0;
    double psi = 1.0;
    double psi_tilde = 1.0;

    void validate() const;  // 0 <= psi_tilde <= psi <= 1, ell >= 0
};

/* Explicit arrival pattern: per-arrival load p and bits q_v (1 = Type I, 0 = Type II). */
struct TypeSequence {
    double ell = 0.0;
    double p = 1.0;
    std::vector<uint8_t> q;

    void validate() const;
};

// W1 branch: (1/n) * sum_{t=1..n} x_t e^{-t/n} + e^{-1}(1 - 1/e).
double w1_discrete(const GridFunction& f);

// W2 branch at (i, j): pre-load to i/n, Type I mass j/n, Type II remainder 1 - j/n.
double w2_discrete(const GridFunction& f, int i, int j);

struct BindingConstraint {
    bool is_w1 = false;
    int i = 0;
    int j = 0;
};

struct LValue {
    double value = 0.0;
    BindingConstraint binding;
};

/* L[f] = min(W1, min_{i,j} W2(i,j)) — valid on F3 only (Proposition-style split).
 * Ties resolved W1 first, then lexicographically smallest (i, j). */
LValue l_of_f(const GridFunction& f);

/* Direct grid minimization of the payoff ratio over ell = a/n (a <= ceil(ell_max*n)),
 * psi = k/n (1 <= k <= n), psi_tilde = j/n (0 <= j <= k). Needs only F0. */
double l_of_f_full_grid(const GridFunction& f, double ell_max = 3.0);

// Payoff per unit weight of an explicit arrival sequence (accounting form).
double kappa_sequence(const TypeSequence& seq, const GridFunction& f);

/* Continuum three-term payoff
 *   integral_0^ell e^{-z} f(z) dz + (e^{-ell} - e^{-(ell+psi_tilde)})
 *   + (psi - psi_tilde)(1 - f(ell + psi_tilde)),
 * with the first term evaluated by a fine right-endpoint quadrature. */
double kappa_formula(const AdversaryStrategy& strat, const GridFunction& f);

}  // namespace stoba
