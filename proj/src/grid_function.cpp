#include "stoba/grid_function.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace stoba {

std::string space_name(SpaceTag space) {
    switch (space) {
        case SpaceTag::F0: return "F0";
        case SpaceTag::F1: return "F1";
        case SpaceTag::F3: return "F3";
        case SpaceTag::F4: return "F4";
    }
    throw std::logic_error("unknown space tag");
}

SpaceTag space_from_name(const std::string& name) {
    if (name == "F0" || name == "f0") return SpaceTag::F0;
    if (name == "F1" || name == "f1") return SpaceTag::F1;
    if (name == "F3" || name == "f3") return SpaceTag::F3;
    if (name == "F4" || name == "f4") return SpaceTag::F4;
    throw std::invalid_argument("unknown function space: " + name);
}

void GridFunction::validate() const {
    if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
    if (values.size() != static_cast<size_t>(n) + 1)
        throw std::invalid_argument("values must hold exactly n+1 entries");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("grid values must lie in [0,1]");
    if (!(tail >= 0.0 && tail <= 1.0))
        throw std::invalid_argument("tail must lie in [0,1]");
}

double GridFunction::value_at(double z) const {
    if (z < 0.0) throw std::domain_error("f is only defined for z >= 0");
    if (z > 1.0 + 1e-12) return tail;
    // Right-endpoint lookup; the epsilon keeps on-grid z at its own index.
    int t = static_cast<int>(std::ceil(z * n - 1e-12));
    if (t < 0) t = 0;
    if (t > n) t = n;
    return values[t];
}

double analytic_f4_value(double z) {
    if (z < 0.0) throw std::domain_error("f* is only defined for z >= 0");
    if (z >= 1.0) return kOneMinusInvE;
    return 1.0 - 0.5 * (std::exp(-z) + std::exp(z - 2.0));
}

GridFunction sample_analytic_f4(int n) {
    if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
    GridFunction f;
    f.n = n;
    f.values.resize(n + 1);
    for (int t = 0; t <= n; ++t)
        f.values[t] = analytic_f4_value(static_cast<double>(t) / n);
    f.tail = kOneMinusInvE;
    return f;
}

GridFunction envelope_function(int n) {
    if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
    GridFunction f;
    f.n = n;
    f.values.resize(n + 1);
    for (int t = 0; t <= n; ++t)
        f.values[t] = 1.0 - std::exp(-static_cast<double>(t) / n);
    f.tail = kOneMinusInvE;
    return f;
}

double lower_envelope_value(SpaceTag space, int t, int n) {
    if (n < 1) throw std::domain_error("grid resolution must be >= 1");
    if (t < 0 || t > n) throw std::domain_error("grid index out of range");
    if (space == SpaceTag::F3 || space == SpaceTag::F4)
        return 1.0 - std::exp(-static_cast<double>(t) / n);
    return 0.0;
}

std::vector<Violation> check_space(const GridFunction& f, SpaceTag space, double tol) {
    f.validate();
    std::vector<Violation> out;
    const int n = f.n;

    for (int t = 0; t < n; ++t) {
        double d = f.values[t] - f.values[t + 1];
        if (d > tol) out.push_back({"monotone", t, d});
    }
    if (f.values[n] - f.tail > tol)
        out.push_back({"monotone", n, f.values[n] - f.tail});

    if (space == SpaceTag::F1) {
        double d = f.values[n] - kOneMinusInvE;
        if (d > tol) out.push_back({"terminal", n, d});
    }

    if (space == SpaceTag::F3 || space == SpaceTag::F4) {
        for (int t = 0; t <= n; ++t) {
            double env = 1.0 - std::exp(-static_cast<double>(t) / n);
            double d = env - f.values[t];
            if (d > tol) out.push_back({"envelope", t, d});
        }
        double d = std::abs(f.values[n] - kOneMinusInvE);
        if (d > tol) out.push_back({"terminal", n, d});
        double dt = std::abs(f.tail - kOneMinusInvE);
        if (dt > tol) out.push_back({"tail", n, dt});
    }

    if (space == SpaceTag::F4) {
        // 0 <= n(x_{t+1} - x_t) <= e^{-t/n} - (1 - x_t), envelope taken at the left endpoint.
        for (int t = 0; t < n; ++t) {
            double fd = n * (f.values[t + 1] - f.values[t]);
            if (fd < -tol) out.push_back({"derivative", t, -fd});
            double cap = std::exp(-static_cast<double>(t) / n) - (1.0 - f.values[t]);
            if (fd - cap > tol) out.push_back({"derivative", t, fd - cap});
        }
    }
    return out;
}

std::string grid_function_to_json(const GridFunction& f) {
    nlohmann::json j;
    j["n"] = f.n;
    j["values"] = f.values;
    j["tail"] = f.tail;
    return j.dump();
}

GridFunction grid_function_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    GridFunction f;
    f.n = j.at("n").get<int>();
    f.values = j.at("values").get<std::vector<double>>();
    f.tail = j.at("tail").get<double>();
    f.validate();
    return f;
}

std::string grid_function_to_csv(const GridFunction& f) {
    std::ostringstream os;
    os.precision(17);
    os << "t,z,x_t\n";
    for (int t = 0; t <= f.n; ++t)
        os << t << "," << static_cast<double>(t) / f.n << "," << f.values[t] << "\n";
    return os.str();
}

}  // namespace stoba
