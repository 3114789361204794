#include "stoba/simulator.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace stoba {

void SimInstance::validate() const {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0,1]");
    for (const auto& u : offline)
        if (!(u.weight > 0.0)) throw std::invalid_argument("offline weights must be positive");
    const int nu = static_cast<int>(offline.size());
    for (const auto& v : arrivals) {
        for (int u : v.neighbors)
            if (u < 0 || u >= nu) throw std::invalid_argument("neighbor id out of range");
        if (v.oracle_target >= nu) throw std::invalid_argument("oracle target out of range");
    }
}

void run_stochastic_balance(const SimInstance& inst, const GridFunction& f, uint64_t seed,
                            TrialOutcome& out) {
    const std::size_t nu = inst.offline.size(), nv = inst.arrivals.size();
    out.alpha.assign(nu, 0.0);
    out.beta.assign(nv, 0.0);
    out.load.resize(nu);
    out.theta.resize(nu);
    out.assigned.assign(nv, -1);
    out.matched.assign(nu, 0);

    SplitMix64 rng(seed);
    for (std::size_t u = 0; u < nu; ++u) {
        out.theta[u] = -std::log(rng.uniform_pos());
        out.load[u] = inst.offline[u].preload;
    }

    const double p = inst.p;
    for (std::size_t v = 0; v < nv; ++v) {
        const Arrival& a = inst.arrivals[v];
        if (a.oracle_target >= 0) {
            const OfflineNode& u = inst.offline[a.oracle_target];
            out.beta[v] = u.weight * p * (1.0 - f.value_at(a.oracle_load));
            continue;
        }
        int best = -1;
        double best_score = 0.0;
        for (int u : a.neighbors) {
            if (!(out.load[u] < out.theta[u])) continue;  // unavailable
            double score = inst.offline[u].weight * p * (1.0 - f.value_at(out.load[u]));
            if (best < 0 || score > best_score || (score == best_score && u > best)) {
                best = u;
                best_score = score;
            }
        }
        if (best < 0) continue;
        double w = inst.offline[best].weight;
        out.alpha[best] += w * p * f.value_at(out.load[best]);
        out.beta[v] = w * p * (1.0 - f.value_at(out.load[best]));
        out.load[best] += p;
        out.assigned[v] = best;
    }
    for (std::size_t u = 0; u < nu; ++u)
        out.matched[u] = out.load[u] >= out.theta[u] ? 1 : 0;
}

TrialOutcome run_stochastic_balance(const SimInstance& inst, const GridFunction& f,
                                    uint64_t seed) {
    TrialOutcome out;
    run_stochastic_balance(inst, f, seed, out);
    return out;
}

AdversarialInstance build_adversarial_instance(double w_star, const AdversaryStrategy& strat,
                                               double p, TypeIIMode mode, int m_copies) {
    strat.validate();
    if (!(w_star > 0.0)) throw std::invalid_argument("target weight must be positive");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0,1]");
    if (mode == TypeIIMode::Gadget && m_copies < 1)
        throw std::invalid_argument("gadget mode needs at least one copy");

    auto count = [&](double mass) {
        return mass <= 0.0 ? 0 : static_cast<int>(std::ceil(mass / p - 1e-9));
    };
    const int n_pre = count(strat.ell);
    const int n_one = count(strat.psi_tilde);
    const int n_two = count(strat.psi - strat.psi_tilde);

    AdversarialInstance out;
    out.target = 0;  // lowest id: loses every tie under the largest-id rule
    out.inst.p = p;
    out.inst.offline.push_back({w_star, 0.0});

    /* The nominal load replays the simulator's own accumulation (repeated
     * += p) so gadget copies tie with u* bit-for-bit while u* is available. */
    double nominal = 0.0;
    for (int k = 0; k < n_pre; ++k) {
        out.inst.arrivals.push_back({{0}, -1, 0.0});
        nominal += p;
    }
    out.s_begin = out.inst.arrivals.size();
    for (int k = 0; k < n_one; ++k) {
        out.inst.arrivals.push_back({{0}, -1, 0.0});
        nominal += p;
    }
    for (int k = 0; k < n_two; ++k) {
        if (mode == TypeIIMode::Oracle) {
            out.inst.arrivals.push_back({{}, 0, nominal});
        } else {
            Arrival a;
            a.neighbors.push_back(0);
            for (int c = 0; c < m_copies; ++c) {
                a.neighbors.push_back(static_cast<int>(out.inst.offline.size()));
                out.inst.offline.push_back({w_star, nominal});
            }
            out.inst.arrivals.push_back(std::move(a));
        }
    }
    out.inst.validate();
    return out;
}

namespace {

SimResult aggregate(long trials, const std::vector<double>& samples,
                    const std::vector<long>& match_counts) {
    SimResult res;
    res.trials = trials;
    double sum = 0.0;
    for (double s : samples) sum += s;
    res.mean = trials > 0 ? sum / trials : 0.0;
    double ss = 0.0;
    for (double s : samples) ss += (s - res.mean) * (s - res.mean);
    if (trials > 1) res.stderr_ = std::sqrt(ss / (trials - 1)) / std::sqrt(double(trials));
    res.match_frequency.resize(match_counts.size());
    for (std::size_t u = 0; u < match_counts.size(); ++u)
        res.match_frequency[u] = trials > 0 ? double(match_counts[u]) / trials : 0.0;
    return res;
}

}  // namespace

SimResult estimate_kappa(const AdversaryStrategy& strat, const GridFunction& f, double p,
                         long trials, uint64_t seed, TypeIIMode mode, int m_copies) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    AdversarialInstance adv = build_adversarial_instance(1.0, strat, p, mode, m_copies);
    std::vector<double> samples;
    samples.reserve(trials);
    std::vector<long> match_counts(adv.inst.offline.size(), 0);
    TrialOutcome buf;
    for (long i = 0; i < trials; ++i) {
        run_stochastic_balance(adv.inst, f, mix_seed(seed, static_cast<uint64_t>(i)), buf);
        double s = buf.alpha[adv.target];
        for (std::size_t v = adv.s_begin; v < buf.beta.size(); ++v) s += buf.beta[v];
        samples.push_back(s);  // w* = 1, already per unit weight
        for (std::size_t u = 0; u < match_counts.size(); ++u) match_counts[u] += buf.matched[u];
    }
    return aggregate(trials, samples, match_counts);
}

SimResult run_instance_batch(const SimInstance& inst, const GridFunction& f, long trials,
                             uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    inst.validate();
    std::vector<double> samples;
    samples.reserve(trials);
    std::vector<long> match_counts(inst.offline.size(), 0);
    TrialOutcome buf;
    for (long i = 0; i < trials; ++i) {
        run_stochastic_balance(inst, f, mix_seed(seed, static_cast<uint64_t>(i)), buf);
        double s = 0.0;
        for (std::size_t u = 0; u < inst.offline.size(); ++u) {
            if (buf.matched[u]) s += inst.offline[u].weight;
            match_counts[u] += buf.matched[u];
        }
        samples.push_back(s);
    }
    return aggregate(trials, samples, match_counts);
}

std::string sim_instance_to_json(const SimInstance& inst) {
    nlohmann::json j;
    j["p"] = inst.p;
    j["offline"] = nlohmann::json::array();
    for (std::size_t u = 0; u < inst.offline.size(); ++u)
        j["offline"].push_back({{"id", u},
                                {"weight", inst.offline[u].weight},
                                {"preload", inst.offline[u].preload}});
    j["arrivals"] = nlohmann::json::array();
    for (const auto& a : inst.arrivals) {
        nlohmann::json ja;
        ja["neighbors"] = a.neighbors;
        if (a.oracle_target >= 0) {
            ja["oracle_target"] = a.oracle_target;
            ja["oracle_load"] = a.oracle_load;
        }
        j["arrivals"].push_back(ja);
    }
    return j.dump();
}

SimInstance sim_instance_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    SimInstance inst;
    inst.p = j.at("p").get<double>();
    for (const auto& ju : j.at("offline")) {
        OfflineNode u;
        u.weight = ju.at("weight").get<double>();
        u.preload = ju.value("preload", 0.0);
        inst.offline.push_back(u);
    }
    for (const auto& ja : j.at("arrivals")) {
        Arrival a;
        a.neighbors = ja.at("neighbors").get<std::vector<int>>();
        a.oracle_target = ja.value("oracle_target", -1);
        a.oracle_load = ja.value("oracle_load", 0.0);
        inst.arrivals.push_back(std::move(a));
    }
    inst.validate();
    return inst;
}

std::string sim_result_to_json(const SimResult& result) {
    nlohmann::json j;
    j["trials"] = result.trials;
    j["mean"] = result.mean;
    j["stderr"] = result.stderr_;
    j["match_frequency"] = result.match_frequency;
    return j.dump(2);
}

}  // namespace stoba
