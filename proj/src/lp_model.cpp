#include "stoba/lp_model.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace stoba {

namespace {

constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt17_signed(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%+.17g", v);
    return buf;
}

}  // namespace

std::string family_name(Family family) {
    switch (family) {
        case Family::AUG: return "AUG";
        case Family::AUG_UB_F0: return "AUG_UB_F0";
        case Family::AUG_UB_F1: return "AUG_UB_F1";
        case Family::DISCRETE_P: return "DISCRETE_P";
    }
    throw std::logic_error("unknown family");
}

static Family family_from_name(const std::string& s) {
    if (s == "AUG") return Family::AUG;
    if (s == "AUG_UB_F0") return Family::AUG_UB_F0;
    if (s == "AUG_UB_F1") return Family::AUG_UB_F1;
    if (s == "DISCRETE_P") return Family::DISCRETE_P;
    throw std::invalid_argument("unknown LP family: " + s);
}

std::size_t LPInstance::num_w2() const {
    if (!has_w2_family_) return 0;
    return static_cast<std::size_t>(n + 1) * (n + 2) / 2;
}

std::pair<int, int> LPInstance::w2_pair(std::size_t id) const {
    if (!is_w2(id)) throw std::domain_error("row id is not a W2 row");
    std::size_t k = id - base_.size();
    for (int i = 0; i <= n; ++i) {
        std::size_t rows = static_cast<std::size_t>(n - i + 1);
        if (k < rows) return {i, static_cast<int>(k)};
        k -= rows;
    }
    throw std::domain_error("W2 row id out of range");
}

std::size_t LPInstance::w2_row_id(int i, int j) const {
    if (!has_w2_family_ || i < 0 || i > n || j < 0 || j > n - i)
        throw std::domain_error("W2 indices out of range");
    // offset of block i: sum_{i'<i} (n - i' + 1)
    std::size_t off = static_cast<std::size_t>(i) * (2 * n - i + 3) / 2;
    return base_.size() + off + static_cast<std::size_t>(j);
}

Constraint LPInstance::constraint(std::size_t id) const {
    if (id < base_.size()) return base_[id];
    auto [i, j] = w2_pair(id);
    Constraint c;
    c.rel = Rel::LE;
    c.row.terms.emplace_back(0, 1.0);
    for (int t = 1; t <= i; ++t)
        c.row.terms.emplace_back(1 + t, -exp_grid_[t] / n);
    double third = 1.0 - static_cast<double>(j) / n;
    if (j == 0 && i >= 1)
        c.row.terms.back().second += third;  // x_i carries both contributions
    else
        c.row.terms.emplace_back(1 + i + j, third);
    double m = 0.0;
    for (int t = i + 1; t <= i + j; ++t) m += exp_grid_[t];
    c.rhs = m / n + third;
    return c;
}

double LPInstance::row_violation(std::size_t id, const std::vector<double>& x) const {
    if (x.size() != static_cast<std::size_t>(num_vars))
        throw std::invalid_argument("assignment size mismatch");
    if (id == w1_row_) {
        // Same accumulation order as w1_discrete, for bit-equal residuals.
        double s = 0.0;
        for (int t = 1; t <= n; ++t) s += x[1 + t] * exp_grid_[t];
        return x[0] - (s / n + w1_const_);
    }
    if (is_w2(id)) {
        auto [i, j] = w2_pair(id);
        double s = 0.0;
        for (int t = 1; t <= i; ++t) s += x[1 + t] * exp_grid_[t];
        double m = 0.0;
        for (int t = i + 1; t <= i + j; ++t) m += exp_grid_[t];
        double w2 = s / n + m / n +
                    (1.0 - static_cast<double>(j) / n) * (1.0 - x[1 + i + j]);
        return x[0] - w2;
    }
    const Constraint& c = base_[id];
    double dot = 0.0;
    for (auto [k, a] : c.row.terms) dot += a * x[k];
    switch (c.rel) {
        case Rel::LE: return dot - c.rhs;
        case Rel::GE: return c.rhs - dot;
        case Rel::EQ: return std::abs(dot - c.rhs);
    }
    throw std::logic_error("unknown relation");
}

void LPInstance::build_w_common(int n_) {
    n = n_;
    num_vars = n + 2;
    var_names.clear();
    var_names.reserve(num_vars);
    const char* xname = family == Family::DISCRETE_P ? "a_" : "x_";
    var_names.emplace_back("y");
    for (int t = 0; t <= n; ++t) var_names.push_back(xname + std::to_string(t));
    objective.terms = {{0, 1.0}};
    exp_grid_.resize(n + 1);
    for (int t = 0; t <= n; ++t) exp_grid_[t] = std::exp(-static_cast<double>(t) / n);
    has_w2_family_ = true;
}

LPInstance LPInstance::aug(int n) {
    if (n < 1) throw std::domain_error("grid resolution must be >= 1");
    LPInstance lp;
    lp.family = Family::AUG;
    lp.build_w_common(n);
    lp.tau = kOneMinusInvE;
    for (int t = 0; t < n; ++t) {
        Constraint env;
        env.row.terms = {{1 + t, 1.0}};
        env.rel = Rel::GE;
        env.rhs = 1.0 - lp.exp_grid_[t];
        lp.base_.push_back(env);
        Constraint mono;
        mono.row.terms = {{1 + t, 1.0}, {2 + t, -1.0}};
        mono.rel = Rel::LE;
        mono.rhs = 0.0;
        lp.base_.push_back(mono);
    }
    Constraint term;
    term.row.terms = {{1 + n, 1.0}};
    term.rel = Rel::EQ;
    term.rhs = kOneMinusInvE;
    lp.base_.push_back(term);

    lp.w1_const_ = kInvE * kOneMinusInvE;
    Constraint w1;
    w1.row.terms.emplace_back(0, 1.0);
    for (int t = 1; t <= n; ++t) w1.row.terms.emplace_back(1 + t, -lp.exp_grid_[t] / n);
    w1.rel = Rel::LE;
    w1.rhs = lp.w1_const_;
    lp.base_.push_back(w1);
    lp.w1_row_ = lp.base_.size() - 1;
    return lp;
}

LPInstance LPInstance::aug_ub(int n, SpaceTag space) {
    if (n < 1) throw std::domain_error("grid resolution must be >= 1");
    if (space != SpaceTag::F0 && space != SpaceTag::F1)
        throw std::domain_error("upper-bound LP exists for F0/F1 only");
    LPInstance lp;
    lp.family = space == SpaceTag::F0 ? Family::AUG_UB_F0 : Family::AUG_UB_F1;
    lp.build_w_common(n);
    double cap = space == SpaceTag::F0 ? 1.0 : kOneMinusInvE;
    lp.tau = cap;
    for (int t = 0; t < n; ++t) {
        Constraint lo;
        lo.row.terms = {{1 + t, 1.0}};
        lo.rel = Rel::GE;
        lo.rhs = 0.0;
        lp.base_.push_back(lo);
        Constraint mono;
        mono.row.terms = {{1 + t, 1.0}, {2 + t, -1.0}};
        mono.rel = Rel::LE;
        mono.rhs = 0.0;
        lp.base_.push_back(mono);
    }
    Constraint capc;
    capc.row.terms = {{1 + n, 1.0}};
    capc.rel = Rel::LE;
    capc.rhs = cap;
    lp.base_.push_back(capc);

    lp.w1_const_ = kInvE * kOneMinusInvE;
    Constraint w1;
    w1.row.terms.emplace_back(0, 1.0);
    for (int t = 1; t <= n; ++t) w1.row.terms.emplace_back(1 + t, -lp.exp_grid_[t] / n);
    w1.rel = Rel::LE;
    w1.rhs = lp.w1_const_;
    lp.base_.push_back(w1);
    lp.w1_row_ = lp.base_.size() - 1;
    return lp;
}

LPInstance LPInstance::discrete_p(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p must lie in (0,1]");
    double inv = 1.0 / p;
    int n = static_cast<int>(std::lround(inv));
    if (n < 1 || std::abs(inv - n) > 1e-9 * n)
        throw std::domain_error("1/p must be a positive integer");
    LPInstance lp = aug(n);
    lp.family = Family::DISCRETE_P;
    // Rebuild names with the paper's a_k convention.
    lp.var_names.clear();
    lp.var_names.emplace_back("y");
    for (int t = 0; t <= n; ++t) lp.var_names.push_back("a_" + std::to_string(t));
    // Only the W1 constant differs: sum_{k=1..1/p} e^{-(1+kp)} p.
    double c = 0.0;
    for (int k = 1; k <= n; ++k) c += std::exp(-(1.0 + k * p)) * p;
    lp.w1_const_ = c;
    lp.base_[lp.w1_row_].rhs = c;
    return lp;
}

LPInstance LPInstance::custom(int num_vars, std::vector<std::string> names,
                              SparseRow objective, std::vector<Constraint> rows) {
    if (num_vars < 1 || names.size() != static_cast<std::size_t>(num_vars))
        throw std::invalid_argument("custom instance: name count must equal num_vars");
    LPInstance lp;
    lp.num_vars = num_vars;
    lp.var_names = std::move(names);
    lp.objective = std::move(objective);
    lp.base_ = std::move(rows);
    lp.has_w2_family_ = false;
    lp.w1_row_ = kNpos;
    lp.n = 1;
    lp.tau = 1.0;
    for (const auto& c : lp.base_)
        for (auto [k, a] : c.row.terms) {
            (void)a;
            if (k < 0 || k >= num_vars)
                throw std::invalid_argument("constraint references undeclared variable");
        }
    return lp;
}

std::string export_lp(const LPInstance& lp) {
    std::ostringstream os;
    os << "# family " << family_name(lp.family) << " n " << lp.n
       << " tau " << fmt17(lp.tau) << "\n";
    os << "vars:";
    for (const auto& name : lp.var_names) os << " " << name;
    os << "\n";
    os << "max:";
    for (auto [k, a] : lp.objective.terms)
        os << " " << fmt17_signed(a) << " " << lp.var_names[k];
    os << "\n";
    const std::size_t m = lp.num_constraints();
    for (std::size_t id = 0; id < m; ++id) {
        Constraint c = lp.constraint(id);
        os << "c" << id << ":";
        for (auto [k, a] : c.row.terms)
            os << " " << fmt17_signed(a) << " " << lp.var_names[k];
        os << (c.rel == Rel::LE ? " <= " : c.rel == Rel::EQ ? " = " : " >= ");
        os << fmt17(c.rhs) << "\n";
    }
    return os.str();
}

LPInstance import_lp(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty LP document");
    std::istringstream hs(line);
    std::string hash, kw_family, fam, kw_n, kw_tau;
    int n = 0;
    double tau = 0.0;
    hs >> hash >> kw_family >> fam >> kw_n >> n >> kw_tau >> tau;
    if (hash != "#" || kw_family != "family" || kw_n != "n" || kw_tau != "tau")
        throw std::invalid_argument("malformed LP header");

    if (!std::getline(is, line)) throw std::invalid_argument("missing vars line");
    std::istringstream vs(line);
    std::string tok;
    vs >> tok;
    if (tok != "vars:") throw std::invalid_argument("malformed vars line");
    std::vector<std::string> names;
    while (vs >> tok) names.push_back(tok);
    std::unordered_map<std::string, int> index;
    for (std::size_t k = 0; k < names.size(); ++k) index[names[k]] = static_cast<int>(k);

    auto parse_row = [&](std::istringstream& rs, SparseRow& row, Rel* rel, double* rhs) {
        std::string t;
        while (rs >> t) {
            if (t == "<=" || t == "=" || t == ">=") {
                if (!rel) throw std::invalid_argument("unexpected relation in objective");
                *rel = t == "<=" ? Rel::LE : t == "=" ? Rel::EQ : Rel::GE;
                rs >> *rhs;
                return;
            }
            double coef = std::stod(t);
            std::string name;
            rs >> name;
            auto it = index.find(name);
            if (it == index.end()) throw std::invalid_argument("unknown variable: " + name);
            row.terms.emplace_back(it->second, coef);
        }
        if (rel) throw std::invalid_argument("constraint missing relation");
    };

    if (!std::getline(is, line)) throw std::invalid_argument("missing objective line");
    std::istringstream osr(line);
    osr >> tok;
    if (tok != "max:") throw std::invalid_argument("malformed objective line");
    SparseRow obj;
    parse_row(osr, obj, nullptr, nullptr);

    std::vector<Constraint> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        rs >> tok;  // "cK:"
        Constraint c;
        parse_row(rs, c.row, &c.rel, &c.rhs);
        rows.push_back(std::move(c));
    }
    const int nvars = static_cast<int>(names.size());
    LPInstance lp = LPInstance::custom(nvars, std::move(names), std::move(obj), std::move(rows));
    lp.family = family_from_name(fam);
    lp.n = n;
    lp.tau = tau;
    return lp;
}

std::string lp_to_json(const LPInstance& lp) {
    nlohmann::json j;
    j["family"] = family_name(lp.family);
    j["n"] = lp.n;
    j["tau"] = lp.tau;
    j["num_vars"] = lp.num_vars;
    j["var_names"] = lp.var_names;
    nlohmann::json obj = nlohmann::json::array();
    for (auto [k, a] : lp.objective.terms) obj.push_back({k, a});
    j["objective"] = obj;
    nlohmann::json rows = nlohmann::json::array();
    const std::size_t m = lp.num_constraints();
    for (std::size_t id = 0; id < m; ++id) {
        Constraint c = lp.constraint(id);
        nlohmann::json terms = nlohmann::json::array();
        for (auto [k, a] : c.row.terms) terms.push_back({k, a});
        rows.push_back({{"terms", terms},
                        {"rel", c.rel == Rel::LE ? "<=" : c.rel == Rel::EQ ? "=" : ">="},
                        {"rhs", c.rhs}});
    }
    j["constraints"] = rows;
    return j.dump();
}

}  // namespace stoba
