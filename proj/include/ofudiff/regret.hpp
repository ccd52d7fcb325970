#pragma once

#include "ofudiff/agent.hpp"
#include "ofudiff/event_log.hpp"

#include <memory>
#include <vector>

namespace ofudiff {

// Per-run bookkeeping: realized regret against the jump-optimal gain, its
// five-term decomposition (clock deviation, optimistic-approximation error,
// prediction error, switching cost, martingale fluctuation), and the
// high-probability event flags.
struct RegretReport {
    double horizon = 0.0;
    std::size_t n_events = 0;
    double rho_star = 0.0;
    double realized_reward_sum = 0.0;
    double regret = 0.0;  // horizon * rho_star - realized_reward_sum, exactly

    bool decomposition_available = false;
    double r1_clock = 0.0;
    double r2_optimism = 0.0;
    double r3_prediction = 0.0;  // Lipschitz-bound form L_W * sum |mu_k - mu*|
    double r4_switching = 0.0;
    double r5_martingale = 0.0;
    // Quadrature form of the prediction term; with it the five terms
    // reconstruct the regret identically, so the reconstruction budget is
    // |r3_prediction - r3_tight| plus roundoff slack.
    double r3_tight = 0.0;
    double reconstruction_gap = 0.0;  // regret - (r1 + r2 + r3_tight + r4 + r5)
    double budget = 0.0;
    double lipschitz_w = 0.0;
    std::size_t switch_count = 0;

    bool coverage_ok = true;
    bool state_bound_ok = true;
    bool clock_ok = true;
};

RegretReport compute_regret(const EventLog& log, double rho_star);

// Everything the decomposition needs beyond the log: the believed parameter,
// its planned value function and its gain under its own jump dynamics, per
// deployed episode.
struct DecompositionInputs {
    std::vector<Vec> thetas;                                    // per episode
    std::vector<std::shared_ptr<const HjbSolution>> solutions;  // diffusive W per episode
    std::vector<double> believed_gains;                         // rho^{pi_k}_{theta_k}
    int gauss_hermite_order = 11;
};

// Fills the R1..R5 terms of `report`.  Conditional expectations over the next
// mark are replaced by Gauss-Hermite quadrature; R1 and R3 are exact given
// the drift evaluations.  Requires theta* (the env model) for the diagnostic.
void decompose_regret(RegretReport& report, const EventLog& log,
                      const std::vector<EpisodeRecord>& episodes, const DecompositionInputs& in,
                      const ModelSpec& env);

// Convenience: assemble DecompositionInputs for an agent run by solving the
// per-episode believed-gain policy evaluations through the cache.
DecompositionInputs make_decomposition_inputs(const AgentResult& run, const ModelSpec& env,
                                              PlannerCache& cache, const SolverOptions& solver);

// High-probability event flags at level delta/3 each (the run's delta split
// across the confidence, clock and state-bound events).
void fill_event_flags(RegretReport& report, const AgentResult& run, const ModelSpec& env,
                      double delta);

}  // namespace ofudiff
