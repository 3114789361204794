#pragma once

#include "stoba/grid_function.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace stoba {

enum class Family { AUG, AUG_UB_F0, AUG_UB_F1, DISCRETE_P };

std::string family_name(Family family);

enum class Rel { LE, EQ, GE };

struct SparseRow {
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
};

struct Constraint {
    SparseRow row;
    Rel rel = Rel::LE;
    double rhs = 0.0;
};

/* One of the paper's auxiliary LPs. Variable 0 is y; variable 1+t is x_t.
 * The (typically quadratic-size) W2 family is stored implicitly and
 * materialized on demand so n = 1000 stays cheap; base rows (envelope or box,
 * monotonicity, terminal equality, W1) are explicit. Constraint ids run
 * base rows first, then W2 rows in lexicographic (i, j) order. */
class LPInstance {
public:
    Family family = Family::AUG;
    int n = 1;          // grid resolution (1/p for the discrete-p family)
    double tau = 1.0;   // tightest upper bound the rows impose on x_n
    int num_vars = 0;
    std::vector<std::string> var_names;
    SparseRow objective;  // maximized

    std::size_t num_constraints() const { return base_.size() + num_w2(); }
    std::size_t num_base() const { return base_.size(); }
    std::size_t num_w2() const;

    Constraint constraint(std::size_t id) const;
    bool is_w2(std::size_t id) const { return id >= base_.size(); }
    std::pair<int, int> w2_pair(std::size_t id) const;   // requires is_w2(id)
    std::size_t w2_row_id(int i, int j) const;
    // Index of the W1 row among the base rows, or npos when absent.
    std::size_t w1_row_id() const { return w1_row_; }
    double w1_constant() const { return w1_const_; }

    /* Signed violation of row `id` at the assignment (positive = infringed).
     * W1/W2 rows are evaluated through the shared w1/w2 summation code so the
     * residuals match the adversary module bit for bit. */
    double row_violation(std::size_t id, const std::vector<double>& assignment) const;

    // Builders.
    static LPInstance aug(int n);
    static LPInstance aug_ub(int n, SpaceTag space);  // F0 or F1 only
    static LPInstance discrete_p(double p);
    // Ad-hoc instance with explicit rows only (no implicit W2 family).
    static LPInstance custom(int num_vars, std::vector<std::string> names,
                             SparseRow objective, std::vector<Constraint> rows);

private:
    std::vector<Constraint> base_;
    std::size_t w1_row_ = static_cast<std::size_t>(-1);
    double w1_const_ = 0.0;      // constant term of the W1 row's rhs
    bool has_w2_family_ = false;
    std::vector<double> exp_grid_;  // e^{-t/n}, t = 0..n

    void build_w_common(int n);
    GridFunction as_grid(const std::vector<double>& assignment) const;
};

inline LPInstance build_aug_lp(int n) { return LPInstance::aug(n); }
inline LPInstance build_aug_ub_lp(int n, SpaceTag space) { return LPInstance::aug_ub(n, space); }
inline LPInstance build_discrete_p_lp(double p) { return LPInstance::discrete_p(p); }

/* Deterministic plain-text dump (objective line + one constraint per line,
 * coefficients at 17 significant digits); round-trips through import_lp. */
std::string export_lp(const LPInstance& lp);
LPInstance import_lp(const std::string& text);

std::string lp_to_json(const LPInstance& lp);

}  // namespace stoba
