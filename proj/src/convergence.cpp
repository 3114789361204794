#include "stoba/convergence.hpp"

#include "stoba/adversary.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace stoba {

namespace {

std::vector<double> pack_assignment(double y, const std::vector<double>& x) {
    std::vector<double> a;
    a.reserve(x.size() + 1);
    a.push_back(y);
    a.insert(a.end(), x.begin(), x.end());
    return a;
}

void require_feasible(const LPInstance& lp, double y, const std::vector<double>& x,
                      double tol, const char* who) {
    if (x.size() != static_cast<std::size_t>(lp.n) + 1)
        throw std::invalid_argument(std::string(who) + ": x must hold n+1 samples");
    FeasReport rep = check_feasible(lp, pack_assignment(y, x), tol);
    if (!rep.feasible)
        throw std::invalid_argument(std::string(who) + ": input infeasible at row " +
                                    std::to_string(rep.worst_row) + " (residual " +
                                    std::to_string(rep.max_residual) + ")");
}

SpaceTag family_space(Family family) {
    switch (family) {
        case Family::AUG: return SpaceTag::F3;
        case Family::AUG_UB_F0: return SpaceTag::F0;
        case Family::AUG_UB_F1: return SpaceTag::F1;
        case Family::DISCRETE_P: return SpaceTag::F3;
    }
    throw std::logic_error("unknown family");
}

}  // namespace

MappedSolution double_solution(double y, const std::vector<double>& x, int n, double tol) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    require_feasible(build_aug_lp(n), y, x, tol, "double_solution");
    MappedSolution out;
    out.x.resize(2 * n + 1);
    out.x[0] = x[0];
    for (int t = 1; t <= n; ++t) {
        out.x[2 * t - 1] = x[t];
        out.x[2 * t] = x[t];
    }
    out.y = y - kOneMinusInvE / (2.0 * n);
    return out;
}

MappedSolution halve_solution(double y_tilde, const std::vector<double>& x_tilde, int n,
                              double tol) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (x_tilde.size() != static_cast<std::size_t>(2 * n) + 1)
        throw std::invalid_argument("halve_solution: x must hold 2n+1 samples");
    require_feasible(build_aug_lp(2 * n), y_tilde, x_tilde, tol, "halve_solution");
    MappedSolution out;
    out.x.resize(n + 1);
    out.x[0] = x_tilde[0];
    for (int t = 1; t < n; ++t)
        out.x[t] = 0.5 * (x_tilde[2 * t] + x_tilde[2 * t + 1]);
    out.x[n] = x_tilde[2 * n];
    out.y = y_tilde - kOneMinusInvE / (2.0 * n);
    return out;
}

std::pair<double, double> bound_from_eta(int n, double eta, double tau) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("tau must lie in [0,1]");
    return {eta - tau / n, eta + tau / n};
}

double bound_from_zeta(int n, double zeta, double tau) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("tau must lie in [0,1]");
    return zeta + tau / n;
}

std::string round_report(double value, Rounding direction) {
    if (!std::isfinite(value)) throw std::domain_error("value must be finite");
    double scaled = value * 1e4;
    long long k;
    switch (direction) {
        case Rounding::Down: k = static_cast<long long>(std::floor(scaled + 1e-6)); break;
        case Rounding::Up: k = static_cast<long long>(std::ceil(scaled - 1e-6)); break;
        case Rounding::Nearest: k = static_cast<long long>(std::floor(scaled + 0.5)); break;
        default: throw std::logic_error("unknown rounding direction");
    }
    long long a = k < 0 ? -k : k;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%04lld", k < 0 ? "-" : "", a / 10000, a % 10000);
    return buf;
}

BoundReport make_bound_report(Family family, int n, const LPSolution& sol, double tau) {
    BoundReport rep;
    rep.family = family;
    rep.space = family_space(family);
    rep.n = n;
    rep.value = sol.objective_value;
    rep.tau = tau;
    rep.upper = sol.objective_value + tau / n;
    rep.status = sol.status;
    rep.solver = sol.diagnostics;

    rep.rounded_value = round_report(sol.objective_value, Rounding::Nearest);
    /* Published convention: the value column is rounded to nearest and the
     * certified bounds are floor/ceiling of corrections applied to that
     * rounded value. */
    double rounded_num = std::stod(rep.rounded_value);
    rep.rounded_upper = round_report(rounded_num + tau / n, Rounding::Up);
    bool has_lower = family == Family::AUG;
    if (has_lower) {
        rep.lower = sol.objective_value - tau / n;
        rep.rounded_lower = round_report(rounded_num - tau / n, Rounding::Down);
    }
    return rep;
}

std::string bound_report_to_json(const BoundReport& report) {
    nlohmann::json j;
    j["family"] = family_name(report.family);
    j["space"] = space_name(report.space);
    j["n"] = report.n;
    j["value"] = report.value;
    j["tau"] = report.tau;
    j["lower"] = report.lower ? nlohmann::json(*report.lower) : nlohmann::json(nullptr);
    j["upper"] = report.upper;
    j["rounded"]["value"] = report.rounded_value;
    j["rounded"]["lower"] =
        report.rounded_lower ? nlohmann::json(*report.rounded_lower) : nlohmann::json(nullptr);
    j["rounded"]["upper"] = report.rounded_upper;
    j["solver"]["status"] = solve_status_name(report.status);
    j["solver"]["iterations"] = report.solver.iterations;
    j["solver"]["active_w2_rows"] = report.solver.active_w2_rows;
    j["solver"]["cut_rounds"] = report.solver.cut_rounds;
    j["solver"]["max_residual"] = report.solver.max_residual;
    return j.dump(2);
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "n,eta,eta_lower,eta_upper,zeta,zeta_upper\n";
    for (const auto& r : rows)
        os << r.n << "," << r.eta << "," << r.eta_lower << "," << r.eta_upper << ","
           << r.zeta << "," << r.zeta_upper << "\n";
    return os.str();
}

MappedSolution random_aug_feasible_point(int n, SplitMix64& rng) {
    std::vector<double> u(n + 1);
    for (double& v : u) v = rng.uniform();
    std::sort(u.begin(), u.end());

    GridFunction f;
    f.n = n;
    f.values.resize(n + 1);
    for (int t = 0; t <= n; ++t) {
        double env = 1.0 - std::exp(-static_cast<double>(t) / n);
        f.values[t] = env + u[t] * (kOneMinusInvE - env);
    }
    f.values[n] = kOneMinusInvE;  // terminal equality, exact
    f.tail = kOneMinusInvE;

    MappedSolution out;
    out.x = f.values;
    out.y = l_of_f(f).value - 0.1 * rng.uniform();
    return out;
}

}  // namespace stoba
