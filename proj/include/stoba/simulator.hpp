#pragma once

#include "stoba/adversary.hpp"
#include "stoba/grid_function.hpp"
#include "stoba/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stoba {

struct OfflineNode {
    double weight = 1.0;
    double preload = 0.0;  // initial load (gadget copies start part-way up)
};

struct Arrival {
    std::vector<int> neighbors;  // offline node ids, empty = isolated arrival
    /* Oracle-mode Type II: credit beta = w * p * (1 - f(z)) at the fixed nominal
     * load z of this target, with no graph interaction and no load change. */
    int oracle_target = -1;
    double oracle_load = 0.0;
};

struct SimInstance {
    std::vector<OfflineNode> offline;
    std::vector<Arrival> arrivals;
    double p = 1.0;

    void validate() const;
};

struct TrialOutcome {
    std::vector<double> alpha;   // per offline node
    std::vector<double> beta;    // per arrival
    std::vector<double> load;    // final loads
    std::vector<double> theta;   // sampled thresholds
    std::vector<int> assigned;   // offline id per arrival, -1 if none
    std::vector<uint8_t> matched;  // final load reached the threshold
};

struct SimResult {
    long trials = 0;
    double mean = 0.0;    // payoff per unit weight, or matched weight for batches
    double stderr_ = 0.0; // sample stdev / sqrt(trials)
    std::vector<double> match_frequency;  // per offline node
};

enum class TypeIIMode { Oracle, Gadget };

struct AdversarialInstance {
    SimInstance inst;
    int target = 0;           // id of u*
    std::size_t s_begin = 0;  // first arrival index belonging to S (after pre-load)
};

/* One run of the balance rule: each arrival goes to the available neighbor
 * (load < theta) with the highest w * p * (1 - f(load)), ties to the largest id. */
void run_stochastic_balance(const SimInstance& inst, const GridFunction& f, uint64_t seed,
                            TrialOutcome& out);
TrialOutcome run_stochastic_balance(const SimInstance& inst, const GridFunction& f,
                                    uint64_t seed);

/* Target node u* of weight w_star, ceil(ell/p) pre-load arrivals, then
 * ceil(psi_tilde/p) Type I and ceil((psi-psi_tilde)/p) Type II arrivals.
 * Gadget mode realizes each Type II with M fresh tied copies; oracle mode
 * books the Type II share directly. */
AdversarialInstance build_adversarial_instance(double w_star, const AdversaryStrategy& strat,
                                               double p, TypeIIMode mode, int m_copies = 1000);

// Monte Carlo estimate of (alpha_{u*} + sum_{v in S} beta_v) / w*.
SimResult estimate_kappa(const AdversaryStrategy& strat, const GridFunction& f, double p,
                         long trials, uint64_t seed,
                         TypeIIMode mode = TypeIIMode::Oracle, int m_copies = 1000);

// Total matched-weight statistics on an arbitrary instance.
SimResult run_instance_batch(const SimInstance& inst, const GridFunction& f, long trials,
                             uint64_t seed);

std::string sim_instance_to_json(const SimInstance& inst);
SimInstance sim_instance_from_json(const std::string& text);
std::string sim_result_to_json(const SimResult& result);

}  // namespace stoba
