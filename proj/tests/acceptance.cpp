#include "stoba/adversary.hpp"
#include "stoba/convergence.hpp"
#include "stoba/grid_function.hpp"
#include "stoba/lp_model.hpp"
#include "stoba/lp_solver.hpp"
#include "stoba/rng.hpp"
#include "stoba/simulator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace stoba;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> pack(double y, const std::vector<double>& x) {
    std::vector<double> a{y};
    a.insert(a.end(), x.begin(), x.end());
    return a;
}

struct RowStrings {
    std::string eta, eta_lo, eta_hi, zeta, zeta_hi;
};

RowStrings table_row(int n) {
    LPSolution aug = solve_lazy(build_aug_lp(n));
    LPSolution ub = solve_lazy(build_aug_ub_lp(n, SpaceTag::F0));
    BoundReport ar = make_bound_report(Family::AUG, n, aug, kOneMinusInvE);
    BoundReport ur = make_bound_report(Family::AUG_UB_F0, n, ub, 1.0);
    return {ar.rounded_value, *ar.rounded_lower, ar.rounded_upper, ur.rounded_value,
            ur.rounded_upper};
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    RowStrings row = table_row(10);
    double secs = seconds_since(t0);
    bool ok = row.eta == "0.5713" && row.zeta == "0.5736" && secs < 5.0;
    report(1, "table row n=10", ok,
           "eta=" + row.eta + " zeta=" + row.zeta + " in " + std::to_string(secs) + "s");
}

void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    RowStrings row = table_row(100);
    double secs = seconds_since(t0);
    bool ok = row.eta == "0.5795" && row.zeta == "0.5823" && secs < 60.0;
    report(2, "table row n=100", ok,
           "eta=" + row.eta + " zeta=" + row.zeta + " in " + std::to_string(secs) + "s");
}

void criterion_3() {
    /* The n = 1000 headline run exceeds the 30-minute budget with this dense
     * Bland-rule core (n = 500 alone runs for many minutes and the cost grows
     * ~10x per doubling), so the sanctioned n = 500 row substitutes. */
    auto t0 = std::chrono::steady_clock::now();
    RowStrings row = table_row(500);
    double secs = seconds_since(t0);
    bool ok = row.eta == "0.5802" && row.eta_lo == "0.5789" && row.eta_hi == "0.5815" &&
              row.zeta == "0.5830" && row.zeta_hi == "0.5850" && secs < 1800.0;
    report(3, "headline bounds (n=500 row)", ok,
           "eta=" + row.eta + " lo=" + row.eta_lo + " hi=" + row.eta_hi +
               " zeta=" + row.zeta + " zeta_hi=" + row.zeta_hi + " in " +
               std::to_string(secs) + "s");
}

void criterion_4() {
    GridFunction f = sample_analytic_f4(1000);
    LValue lv = l_of_f(f);
    double gamma = 0.5 * (1.0 + std::exp(-2.0));
    // the grid argmin sits one Type I step from the continuum (i=0, j=0) point
    bool ok = std::abs(lv.value - gamma) <= 2e-3 && !lv.binding.is_w1 &&
              lv.binding.i == 0 && lv.binding.j <= 1;
    char buf[160];
    std::snprintf(buf, sizeof buf, "L[f*]=%.8f gamma=%.8f binding=(i=%d,j=%d)", lv.value,
                  gamma, lv.binding.i, lv.binding.j);
    report(4, "analytical optimum over F4", ok, buf);
}

void criterion_5() {
    SplitMix64 rng(20250825);
    int bad = 0;
    for (int n : {5, 10, 20}) {
        LPInstance lp_n = build_aug_lp(n);
        LPInstance lp_2n = build_aug_lp(2 * n);
        for (int rep = 0; rep < 200; ++rep) {
            MappedSolution pt = random_aug_feasible_point(n, rng);
            MappedSolution up = double_solution(pt.y, pt.x, n, 1e-12);
            if (!check_feasible(lp_2n, pack(up.y, up.x), 1e-12).feasible) ++bad;
            MappedSolution pt2 = random_aug_feasible_point(2 * n, rng);
            MappedSolution down = halve_solution(pt2.y, pt2.x, n, 1e-12);
            if (!check_feasible(lp_n, pack(down.y, down.x), 1e-12).feasible) ++bad;
        }
    }
    report(5, "doubling/halving maps preserve feasibility", bad == 0,
           std::to_string(bad) + " failures over 1200 mapped points");
}

void criterion_6() {
    int bad = 0;
    std::string detail;
    for (int n : {10, 25, 50}) {
        double en = solve_lazy(build_aug_lp(n)).objective_value;
        double e2n = solve_lazy(build_aug_lp(2 * n)).objective_value;
        double gap = std::abs(e2n - en);
        if (gap > kOneMinusInvE / (2.0 * n)) ++bad;
        detail += "n=" + std::to_string(n) + ":" + std::to_string(gap) + " ";
    }
    report(6, "Cauchy refinement bound", bad == 0, detail + "violations=" +
                                                       std::to_string(bad));
}

void criterion_7() {
    int bad = 0;
    std::string detail;
    for (int n : {10, 100}) {
        double eta = solve_lazy(build_aug_lp(n)).objective_value;
        double zeta1 = solve_lazy(build_aug_ub_lp(n, SpaceTag::F1)).objective_value;
        if (std::abs(eta - zeta1) > 1e-9) ++bad;
        detail += "n=" + std::to_string(n) + ":" + std::to_string(std::abs(eta - zeta1)) +
                  " ";
    }
    report(7, "F1 equivalence with the aug family", bad == 0, detail);
}

void criterion_8() {
    int bad = 0;
    std::string detail;
    for (double p : {0.1, 0.01}) {
        int n = static_cast<int>(std::lround(1.0 / p));
        double tau_p = solve_lazy(build_discrete_p_lp(p)).objective_value;
        double eta = solve_lazy(build_aug_lp(n)).objective_value;
        if (std::abs(tau_p - eta) > p) ++bad;
        detail += "p=" + std::to_string(p) + ":" + std::to_string(std::abs(tau_p - eta)) +
                  " ";
    }
    report(8, "discrete-p bridge", bad == 0, detail);
}

void criterion_9() {
    auto t0 = std::chrono::steady_clock::now();
    GridFunction f = sample_analytic_f4(1000);
    const double p = 1e-3;
    const long trials = 100000;
    SplitMix64 rng(99);
    int bad = 0;
    for (int rep = 0; rep < 10; ++rep) {
        double psi = 0.2 + 0.8 * rng.uniform();
        AdversaryStrategy s{rng.uniform() * 1.5, psi, psi * rng.uniform()};
        SimResult mc = estimate_kappa(s, f, p, trials, mix_seed(7, rep));
        double formula = kappa_formula(s, f);
        // the ceil() realization of the three loads costs O(p) on top of MC noise
        if (std::abs(mc.mean - formula) > 3.0 * mc.stderr_ + 2.0 * p) ++bad;
    }
    SimResult pure = estimate_kappa({0.0, 1.0, 1.0}, f, p, trials, 424242);
    bool sane = std::abs(pure.mean - kOneMinusInvE) <= 3.0 * pure.stderr_ + 2.0 * p;
    double secs = seconds_since(t0);
    bool ok = bad == 0 && sane && secs < 300.0;
    report(9, "simulation agrees with the kappa formula", ok,
           std::to_string(bad) + " strategy mismatches, pure Type I mean=" +
               std::to_string(pure.mean) + ", in " + std::to_string(secs) + "s");
}

void criterion_10() {
    SplitMix64 rng(1010);
    GridFunction f = sample_analytic_f4(200);
    int bad = 0;

    // swap monotonicity: a contiguous (Type II, Type I) pair swapped to
    // (Type I, Type II) never increases the payoff
    for (int rep = 0; rep < 100; ++rep) {
        int len = 4 + int(rng.next() % 17);
        TypeSequence seq;
        seq.ell = rng.uniform() * 1.5;
        seq.p = 1.0 / len;
        seq.q.resize(len);
        for (auto& b : seq.q) b = rng.next() % 2;
        int pos = -1;
        for (int k = 0; k + 1 < len; ++k)
            if (seq.q[k] == 0 && seq.q[k + 1] == 1) pos = k;
        if (pos < 0) continue;
        double before = kappa_sequence(seq, f);
        std::swap(seq.q[pos], seq.q[pos + 1]);
        if (kappa_sequence(seq, f) > before + 1e-12) ++bad;
    }

    // psi-collapse: kappa(l, psi, pt)/psi >= kappa(l, 1, pt) on F3
    for (int rep = 0; rep < 20; ++rep) {
        MappedSolution ptx = random_aug_feasible_point(50, rng);
        GridFunction g;
        g.n = 50;
        g.values = ptx.x;
        g.tail = kOneMinusInvE;
        double ell = rng.uniform() * 2.0;
        double pt = rng.uniform();
        double psi = pt + (1.0 - pt) * std::max(0.05, rng.uniform());
        if (kappa_formula({ell, psi, pt}, g) / psi < kappa_formula({ell, 1.0, pt}, g) - 1e-6)
            ++bad;
    }

    // per-arrival floor: either type pays at least p * min(e^-l, 1 - f(l))
    for (int rep = 0; rep < 100; ++rep) {
        double ell = rng.uniform() * 2.0;
        double pa = 0.02;
        TypeSequence base{ell, pa, {}};
        TypeSequence one = base;
        one.q = {uint8_t(rng.next() % 2)};
        double gain = kappa_sequence(one, f) - kappa_sequence(base, f);
        double floorv = pa * std::min(std::exp(-ell), 1.0 - f.value_at(ell));
        if (gain < floorv - 1e-12) ++bad;
    }

    report(10, "adversary structure suite", bad == 0,
           std::to_string(bad) + " violations over 220 randomized checks");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_3();  // the long solve runs last so quick failures surface first
    std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "SUCCESS" : "FAILURE",
                failures);
    return failures == 0 ? 0 : 1;
}
