#include "stoba/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stoba {

void AdversaryStrategy::validate() const {
    if (!(ell >= 0.0)) throw std::invalid_argument("pre-load must be nonnegative");
    if (!(psi >= 0.0 && psi <= 1.0)) throw std::invalid_argument("psi must lie in [0,1]");
    if (!(psi_tilde >= 0.0 && psi_tilde <= psi))
        throw std::invalid_argument("psi_tilde must lie in [0, psi]");
}

void TypeSequence::validate() const {
    if (!(ell >= 0.0)) throw std::invalid_argument("pre-load must be nonnegative");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0,1]");
    for (uint8_t b : q)
        if (b > 1) throw std::invalid_argument("type bits must be 0 or 1");
}

double w1_discrete(const GridFunction& f) {
    f.validate();
    const int n = f.n;
    double s = 0.0;
    for (int t = 1; t <= n; ++t)
        s += f.values[t] * std::exp(-static_cast<double>(t) / n);
    return s / n + kInvE * kOneMinusInvE;
}

double w2_discrete(const GridFunction& f, int i, int j) {
    f.validate();
    const int n = f.n;
    if (i < 0 || i > n || j < 0 || j > n - i)
        throw std::domain_error("w2 indices require 0 <= i <= n, 0 <= j <= n-i");
    double s = 0.0;
    for (int t = 1; t <= i; ++t)
        s += f.values[t] * std::exp(-static_cast<double>(t) / n);
    double m = 0.0;
    for (int t = i + 1; t <= i + j; ++t)
        m += std::exp(-static_cast<double>(t) / n);
    return s / n + m / n + (1.0 - static_cast<double>(j) / n) * (1.0 - f.values[i + j]);
}

LValue l_of_f(const GridFunction& f) {
    if (!check_space(f, SpaceTag::F3).empty())
        throw std::invalid_argument(
            "l_of_f requires an F3 member (W1/W2 split); use l_of_f_full_grid otherwise");
    const int n = f.n;
    std::vector<double> e(n + 1);
    for (int t = 0; t <= n; ++t) e[t] = std::exp(-static_cast<double>(t) / n);

    LValue best;
    best.value = w1_discrete(f);
    best.binding = {true, 0, 0};

    /* Scan W2(i,j); the running sums replay w2_discrete's accumulation order
     * term by term, so every candidate value is bit-identical to a direct call. */
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        if (i >= 1) s += f.values[i] * e[i];
        double m = 0.0;
        for (int j = 0; j <= n - i; ++j) {
            if (j >= 1) m += e[i + j];
            double v = s / n + m / n +
                       (1.0 - static_cast<double>(j) / n) * (1.0 - f.values[i + j]);
            if (v < best.value) {
                best.value = v;
                best.binding = {false, i, j};
            }
        }
    }
    return best;
}

double l_of_f_full_grid(const GridFunction& f, double ell_max) {
    if (!(ell_max >= 1.0)) throw std::domain_error("ell_max must be >= 1");
    if (!check_space(f, SpaceTag::F0).empty())
        throw std::invalid_argument("l_of_f_full_grid requires an F0 member");
    const int n = f.n;
    const int a_max = static_cast<int>(std::ceil(ell_max * n));
    const int m_max = a_max + n;

    auto x_ext = [&](int t) { return t <= n ? f.values[t] : f.tail; };
    std::vector<double> s1(m_max + 1, 0.0), es(m_max + 1, 0.0);
    for (int t = 1; t <= m_max; ++t) {
        double e = std::exp(-static_cast<double>(t) / n);
        s1[t] = s1[t - 1] + e * x_ext(t);
        es[t] = es[t - 1] + e;
    }

    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= a_max; ++a) {
        for (int k = 1; k <= n; ++k) {
            for (int j = 0; j <= k; ++j) {
                double num = s1[a] / n + (es[a + j] - es[a]) / n +
                             (static_cast<double>(k - j) / n) * (1.0 - x_ext(a + j));
                double v = num / (static_cast<double>(k) / n);
                if (v < best) best = v;
            }
        }
    }
    return best;
}

double kappa_sequence(const TypeSequence& seq, const GridFunction& f) {
    seq.validate();
    f.validate();
    double total = 0.0;
    if (seq.ell > 0.0) {
        int m = static_cast<int>(std::ceil(seq.ell / seq.p - 1e-12));
        double dz = seq.ell / m;
        for (int t = 1; t <= m; ++t) {
            double z = t * dz;
            total += std::exp(-z) * f.value_at(z) * dz;
        }
    }
    double load = seq.ell;
    for (uint8_t b : seq.q) {
        if (b) {
            total += seq.p * std::exp(-load);  // Type I: expected existence mass
            load += seq.p;
        } else {
            total += seq.p * (1.0 - f.value_at(load));  // Type II: deterministic share
        }
    }
    return total;
}

double kappa_formula(const AdversaryStrategy& strat, const GridFunction& f) {
    strat.validate();
    f.validate();
    double total = 0.0;
    if (strat.ell > 0.0) {
        const int m = 20000;  // fine right-endpoint quadrature for the pre-load term
        double h = strat.ell / m;
        for (int t = 1; t <= m; ++t) {
            double z = t * h;
            total += std::exp(-z) * f.value_at(z) * h;
        }
    }
    total += std::exp(-strat.ell) - std::exp(-(strat.ell + strat.psi_tilde));
    total += (strat.psi - strat.psi_tilde) * (1.0 - f.value_at(strat.ell + strat.psi_tilde));
    return total;
}

}  // namespace stoba
