#include "stoba/adversary.hpp"
#include "stoba/convergence.hpp"
#include "stoba/grid_function.hpp"
#include "stoba/lp_model.hpp"
#include "stoba/lp_solver.hpp"
#include "stoba/rng.hpp"
#include "stoba/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

using namespace stoba;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + out_path);
    os << text;
}

struct BuildChoice {
    LPInstance lp;
    double tau;
};

BuildChoice build_family(const std::string& family, const std::string& space, int n) {
    if (family == "aug") {
        if (space != "f3")
            throw CLI::ValidationError("--space", "the aug family is defined over f3");
        LPInstance lp = build_aug_lp(n);
        return {lp, lp.tau};
    }
    if (family == "ub") {
        if (space != "f0" && space != "f1")
            throw CLI::ValidationError("--space", "the ub family needs f0 or f1");
        LPInstance lp = build_aug_ub_lp(n, space_from_name(space));
        return {lp, lp.tau};
    }
    throw CLI::ValidationError("--family", "unknown family: " + family);
}

json diagnostics_json(const SolveDiagnostics& d) {
    return json{{"iterations", d.iterations},
                {"active_w2_rows", d.active_w2_rows},
                {"cut_rounds", d.cut_rounds},
                {"max_residual", d.max_residual}};
}

int cmd_solve(const std::string& family, const std::string& space, int n,
              const std::string& method, double tol, const std::string& out) {
    BuildChoice bc = build_family(family, space, n);
    LPSolution sol = method == "full" ? solve_full(bc.lp, tol) : solve_lazy(bc.lp, tol);
    json j{{"command", "solve"},
           {"family", family_name(bc.lp.family)},
           {"space", space},
           {"n", n},
           {"method", method},
           {"status", solve_status_name(sol.status)},
           {"objective", sol.objective_value},
           {"assignment", sol.assignment},
           {"diagnostics", diagnostics_json(sol.diagnostics)}};
    emit(j.dump(2), out);
    return sol.status == SolveStatus::Optimal ? kExitOk : kExitSolver;
}

int cmd_bounds(const std::string& family, const std::string& space, int n,
               const std::string& out) {
    BuildChoice bc = build_family(family, space, n);
    LPSolution sol = solve_lazy(bc.lp);
    if (sol.status != SolveStatus::Optimal) {
        std::cerr << "solver failed: " << solve_status_name(sol.status) << "\n";
        return kExitSolver;
    }
    BoundReport rep = make_bound_report(bc.lp.family, n, sol, bc.tau);
    emit(bound_report_to_json(rep), out);
    return kExitOk;
}

int cmd_table(const std::vector<int>& n_list, const std::string& out) {
    std::vector<TableRow> rows;
    for (int n : n_list) {
        if (n < 1) throw CLI::ValidationError("--n-list", "grid sizes must be >= 1");
        LPSolution aug = solve_lazy(build_aug_lp(n));
        LPSolution ub = solve_lazy(build_aug_ub_lp(n, SpaceTag::F0));
        if (aug.status != SolveStatus::Optimal || ub.status != SolveStatus::Optimal) {
            std::cerr << "solver failed at n=" << n << "\n";
            return kExitSolver;
        }
        BoundReport ar = make_bound_report(Family::AUG, n, aug, kOneMinusInvE);
        BoundReport ur = make_bound_report(Family::AUG_UB_F0, n, ub, 1.0);
        rows.push_back({n, ar.rounded_value, *ar.rounded_lower, ar.rounded_upper,
                        ur.rounded_value, ur.rounded_upper});
    }
    emit(table_to_csv(rows), out);
    return kExitOk;
}

int cmd_analytic(int n, const std::string& out) {
    GridFunction f = sample_analytic_f4(n);
    LValue lv = l_of_f(f);
    json j{{"command", "analytic"},
           {"n", n},
           {"gamma_f4", 0.5 * (1.0 + std::exp(-2.0))},
           {"l_of_f", lv.value},
           {"binding",
            json{{"is_w1", lv.binding.is_w1}, {"i", lv.binding.i}, {"j", lv.binding.j}}},
           {"grid", json::parse(grid_function_to_json(f))}};
    emit(j.dump(2), out);
    return kExitOk;
}

int cmd_export_lp(const std::string& family, const std::string& space,
                  std::optional<int> n, std::optional<double> p, const std::string& out) {
    LPInstance lp = [&] {
        if (family == "discretep") {
            if (!p) throw CLI::ValidationError("--p", "discretep needs --p");
            return build_discrete_p_lp(*p);
        }
        if (!n) throw CLI::ValidationError("--n", "aug/ub need --n");
        return build_family(family, space, *n).lp;
    }();
    emit(export_lp(lp), out);
    return kExitOk;
}

int cmd_simulate(double ell, double psi, double psitilde, double p, long trials,
                 uint64_t seed, const std::string& f_arg, const std::string& mode_arg,
                 int m_copies, const std::string& out) {
    AdversaryStrategy strat{ell, psi, psitilde};
    strat.validate();
    GridFunction f;
    if (f_arg == "f4") {
        f = sample_analytic_f4(1000);
    } else {
        std::ifstream is(f_arg, std::ios::binary);
        if (!is) throw std::runtime_error("cannot open gain function file: " + f_arg);
        std::string text((std::istreambuf_iterator<char>(is)),
                         std::istreambuf_iterator<char>());
        f = grid_function_from_json(text);
        f.validate();
    }
    TypeIIMode mode = mode_arg == "gadget" ? TypeIIMode::Gadget : TypeIIMode::Oracle;
    SimResult res = estimate_kappa(strat, f, p, trials, seed, mode, m_copies);
    double formula = kappa_formula(strat, f);
    json j{{"command", "simulate"},
           {"strategy", json{{"ell", ell}, {"psi", psi}, {"psi_tilde", psitilde}}},
           {"p", p},
           {"trials", trials},
           {"seed", seed},
           {"mode", mode_arg},
           {"mean", res.mean},
           {"stderr", res.stderr_},
           {"kappa_formula", formula},
           {"abs_difference", std::abs(res.mean - formula)}};
    emit(j.dump(2), out);
    return kExitOk;
}

// --- verify suites: each prints one line per check and counts failures ---

struct SuiteStats {
    int checks = 0;
    int failures = 0;

    void record(const std::string& label, bool ok) {
        ++checks;
        if (!ok) ++failures;
        std::printf("%s %s\n", ok ? "ok  " : "FAIL", label.c_str());
    }
};

void verify_lemmas(SuiteStats& st, int n, uint64_t seed) {
    SplitMix64 rng(seed);
    LPInstance lp_n = build_aug_lp(n);
    LPInstance lp_2n = build_aug_lp(2 * n);
    auto pack = [](double y, const std::vector<double>& x) {
        std::vector<double> a{y};
        a.insert(a.end(), x.begin(), x.end());
        return a;
    };
    bool up_ok = true, down_ok = true;
    for (int rep = 0; rep < 200; ++rep) {
        MappedSolution pt = random_aug_feasible_point(n, rng);
        MappedSolution up = double_solution(pt.y, pt.x, n, 1e-12);
        up_ok = up_ok && check_feasible(lp_2n, pack(up.y, up.x), 1e-12).feasible;
        MappedSolution pt2 = random_aug_feasible_point(2 * n, rng);
        MappedSolution down = halve_solution(pt2.y, pt2.x, n, 1e-12);
        down_ok = down_ok && check_feasible(lp_n, pack(down.y, down.x), 1e-12).feasible;
    }
    st.record("lemma 5.4 doubling keeps 200 random points feasible (n=" +
                  std::to_string(n) + ")",
              up_ok);
    st.record("lemma 5.5 halving keeps 200 random points feasible (n=" +
                  std::to_string(n) + ")",
              down_ok);
}

void verify_cauchy(SuiteStats& st, int n) {
    double en = solve_lazy(build_aug_lp(n)).objective_value;
    double e2n = solve_lazy(build_aug_lp(2 * n)).objective_value;
    st.record("|eta(2n) - eta(n)| <= (1-1/e)/(2n) at n=" + std::to_string(n),
              std::abs(e2n - en) <= kOneMinusInvE / (2.0 * n) + 1e-12);
}

void verify_adversary(SuiteStats& st, int n, uint64_t seed) {
    SplitMix64 rng(seed);
    GridFunction f = sample_analytic_f4(n);

    // swap monotonicity: promoting a Type I arrival past an adjacent Type II
    // one never increases the payoff of an explicit sequence
    bool swap_ok = true;
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
        double after = kappa_sequence(seq, f);
        swap_ok = swap_ok && after <= before + 1e-12;
    }
    st.record("swap monotonicity over 100 random sequences", swap_ok);

    // psi-collapse: kappa(l, psi, pt)/psi never beats the full-mass payoff
    bool collapse_ok = true;
    for (int rep = 0; rep < 20; ++rep) {
        MappedSolution ptx = random_aug_feasible_point(50, rng);
        GridFunction g;
        g.n = 50;
        g.values = ptx.x;
        g.tail = kOneMinusInvE;
        double ell = rng.uniform() * 2.0;
        double pt = rng.uniform();
        double psi = pt + (1.0 - pt) * std::max(0.05, rng.uniform());
        double partial = kappa_formula({ell, psi, pt}, g) / psi;
        double full = kappa_formula({ell, 1.0, pt}, g);
        collapse_ok = collapse_ok && partial >= full - 1e-6;
    }
    st.record("psi-collapse at psi = 1 over 20 random F3 members", collapse_ok);

    // per-arrival floor: each arrival pays at least p * min(e^-l, 1 - f(l))
    bool floor_ok = true;
    for (int rep = 0; rep < 50; ++rep) {
        double ell = rng.uniform() * 2.0;
        double pa = 0.02;
        TypeSequence base{ell, pa, {}};
        TypeSequence one = base;
        one.q = {uint8_t(rng.next() % 2)};
        double gain = kappa_sequence(one, f) - kappa_sequence(base, f);
        double floorv = pa * std::min(std::exp(-ell), 1.0 - f.value_at(ell));
        floor_ok = floor_ok && gain >= floorv - 1e-12;
    }
    st.record("per-arrival floor over 50 random single arrivals", floor_ok);
}

void verify_simulation(SuiteStats& st, long trials, uint64_t seed) {
    GridFunction f = sample_analytic_f4(1000);
    SplitMix64 rng(seed);
    double p = 1e-3;
    bool agree = true;
    for (int rep = 0; rep < 3; ++rep) {
        double psi = 0.2 + 0.8 * rng.uniform();
        AdversaryStrategy s{rng.uniform(), psi, psi * rng.uniform()};
        SimResult mc = estimate_kappa(s, f, p, trials, mix_seed(seed, rep));
        double formula = kappa_formula(s, f);
        agree = agree && std::abs(mc.mean - formula) <= 3.0 * mc.stderr_ + 2.0 * p;
    }
    st.record("monte carlo matches the kappa formula on 3 random strategies", agree);

    SimResult pure = estimate_kappa({0.0, 1.0, 1.0}, f, p, trials, mix_seed(seed, 99));
    st.record("pure Type I mean within tolerance of 1 - 1/e",
              std::abs(pure.mean - kOneMinusInvE) <= 3.0 * pure.stderr_ + 2.0 * p);
}

int cmd_verify(const std::string& suite, int n, long trials, uint64_t seed) {
    SuiteStats st;
    if (suite == "lemmas" || suite == "all") verify_lemmas(st, n, seed);
    if (suite == "cauchy" || suite == "all") verify_cauchy(st, n);
    if (suite == "adversary" || suite == "all") verify_adversary(st, n, seed);
    if (suite == "simulation" || suite == "all") verify_simulation(st, trials, seed);
    std::printf("%d checks, %d failures\n", st.checks, st.failures);
    return st.failures == 0 ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound certification for the Stochastic Balance primal-dual analysis"};
    app.require_subcommand(1);

    std::string family = "aug", space = "f3", method = "lazy", out, mode = "oracle";
    std::string suite = "all", f_arg = "f4";
    int n = 100, m_copies = 1000;
    long trials = 10000;
    uint64_t seed = 0;
    double tol = 1e-9, ell = 0.0, psi = 1.0, psitilde = 1.0, p = 1e-3;
    std::optional<int> opt_n;
    std::optional<double> opt_p;
    std::vector<int> n_list;

    auto* solve = app.add_subcommand("solve", "solve one auxiliary LP");
    solve->add_option("--family", family)->check(CLI::IsMember({"aug", "ub"}));
    solve->add_option("--space", space)->check(CLI::IsMember({"f0", "f1", "f3"}));
    solve->add_option("--n", n)->check(CLI::Range(1, 100000000));
    solve->add_option("--method", method)->check(CLI::IsMember({"lazy", "full"}));
    solve->add_option("--tol", tol)->check(CLI::PositiveNumber);
    solve->add_option("--out", out);

    auto* bounds = app.add_subcommand("bounds", "emit a certified bound report");
    bounds->add_option("--family", family)->check(CLI::IsMember({"aug", "ub"}));
    bounds->add_option("--space", space)->check(CLI::IsMember({"f0", "f1", "f3"}));
    bounds->add_option("--n", n)->check(CLI::Range(1, 100000000));
    bounds->add_option("--out", out);

    auto* table = app.add_subcommand("table", "reproduce the published bounds table");
    table->add_option("--n-list", n_list)->required()->delimiter(',');
    table->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite)
        ->check(CLI::IsMember({"lemmas", "cauchy", "adversary", "simulation", "all"}));
    verify->add_option("--n", n)->check(CLI::Range(1, 100000000));
    verify->add_option("--trials", trials)->check(CLI::Range(1, 100000000));
    verify->add_option("--seed", seed);

    auto* simulate = app.add_subcommand("simulate", "monte carlo payoff of one strategy");
    simulate->add_option("--ell", ell)->required();
    simulate->add_option("--psi", psi)->required();
    simulate->add_option("--psitilde", psitilde)->required();
    simulate->add_option("--p", p)->required()->check(CLI::PositiveNumber);
    simulate->add_option("--trials", trials)->required()->check(CLI::Range(1, 100000000));
    simulate->add_option("--seed", seed)->required();
    simulate->add_option("--f", f_arg);
    simulate->add_option("--mode", mode)->check(CLI::IsMember({"oracle", "gadget"}));
    simulate->add_option("--M", m_copies)->check(CLI::Range(1, 100000000));
    simulate->add_option("--out", out);

    auto* analytic = app.add_subcommand("analytic", "the closed-form optimum over F4");
    analytic->add_option("--n", n)->check(CLI::Range(1, 100000000));
    analytic->add_option("--out", out);

    auto* export_cmd = app.add_subcommand("export-lp", "dump an instance as plain text");
    export_cmd->add_option("--family", family)
        ->check(CLI::IsMember({"aug", "ub", "discretep"}));
    export_cmd->add_option("--space", space)->check(CLI::IsMember({"f0", "f1", "f3"}));
    export_cmd->add_option("--n", opt_n)->check(CLI::Range(1, 100000000));
    export_cmd->add_option("--p", opt_p)->check(CLI::PositiveNumber);
    export_cmd->add_option("--out", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(family, space, n, method, tol, out);
        if (bounds->parsed()) return cmd_bounds(family, space, n, out);
        if (table->parsed()) return cmd_table(n_list, out);
        if (verify->parsed()) return cmd_verify(suite, n, trials, seed);
        if (simulate->parsed())
            return cmd_simulate(ell, psi, psitilde, p, trials, seed, f_arg, mode, m_copies,
                                out);
        if (analytic->parsed()) return cmd_analytic(n, out);
        if (export_cmd->parsed()) return cmd_export_lp(family, space, opt_n, opt_p, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}
