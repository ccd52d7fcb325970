#pragma once

#include "ofudiff/confidence.hpp"
#include "ofudiff/event_log.hpp"
#include "ofudiff/hjb.hpp"
#include "ofudiff/policy.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace ofudiff {

struct PlannerSettings {
    double grid_radius = 0.0;  // 0 = derive 1.5 * H_delta at double the expected event count
    double grid_spacing = 0.05;
    int actions_per_axis = 33;
    SolverOptions solver;
};

struct AgentConfig {
    double delta = 0.1;
    std::vector<Vec> theta_grid;  // optimism search grid, subset of Theta
    PlannerSettings planner;
    Vec x0;               // empty = origin
    Vec initial_control;  // varpi_0 for the pre-fit episode; empty = zero action
    std::uint64_t seed = 0;
    int max_episodes = 100000;
    NllsOptions nlls;
    // Relative per-axis size of the theta_hat perturbations added to the
    // lazy-trigger candidate set.
    double trigger_perturbation = 0.1;
};

struct EpisodeRecord {
    std::size_t k = 0;
    std::size_t n_k = 0;
    double tau_nk = 0.0;
    Vec theta_tilde;
    Vec theta_hat;
    double beta_at_start = 0.0;
    double planner_rho = 0.0;
    std::size_t policy_id = 0;   // index into AgentResult::deployed
    bool member_star = false;    // theta* in the episode confidence set (simulation diagnostic)
    int candidates_in_set = 0;
    int planner_failures = 0;
};

struct EventTelemetry {
    std::size_t n = 0;
    std::size_t k = 0;
    bool member_star = false;
    double running_regret = 0.0;  // tau_n * rho_star - rewards so far (when rho_star known)
};

struct AgentResult {
    EventLog log;
    std::vector<EpisodeRecord> episodes;
    std::vector<EventTelemetry> telemetry;
    std::vector<std::shared_ptr<const HjbSolution>> deployed;  // policy_id -> solution
    Grid planner_grid;
    bool aborted = false;
    std::string abort_reason;
    std::size_t planner_solves = 0;
};

// Shared store of solved plans keyed by parameter point (and grid/epsilon for
// jump solutions).  Solutions are run-independent, so entries never expire.
class PlannerCache {
public:
    std::shared_ptr<const HjbSolution> diffusive(const ModelSpec& model, const Grid& grid,
                                                 const SolverOptions& opts);
    std::shared_ptr<const HjbSolution> jump(const ModelSpec& model, const Grid& grid,
                                            const SolverOptions& opts);
    // Gain of the model's diffusive greedy policy under its own jump dynamics.
    double believed_gain(const ModelSpec& model, const Grid& grid, const SolverOptions& opts);

    std::size_t solves() const { return solves_; }

private:
    std::shared_ptr<const HjbSolution> lookup_or(const std::string& key,
                                                 const std::function<HjbSolution()>& make);
    std::mutex mu_;
    std::unordered_map<std::string, std::shared_ptr<const HjbSolution>> solutions_;
    std::unordered_map<std::string, double> gains_;
    std::size_t solves_ = 0;
};

// sqrt of the sup (over the candidate set) of the accumulated squared drift
// discrepancy against the episode reference exceeds twice the current radius.
bool lazy_trigger(double sup_distance, double beta_now);

// Pick the confidence-set member of the candidate list with the largest
// planned diffusive gain; theta_hat is always appended as a candidate when
// admissible.  Returns the argmax and its cached solution.
struct OptimisticChoice {
    Vec theta_tilde;
    std::shared_ptr<const HjbSolution> solution;
    int candidates_in_set = 0;
    int planner_failures = 0;
};
OptimisticChoice select_optimistic(const Learner& learner, const ConfidenceState& conf,
                                   const std::vector<Vec>& theta_grid, const ModelSpec& env_shape,
                                   const Grid& grid, const SolverOptions& solver,
                                   PlannerCache& cache);

// Closed-loop OFU run against the (unknown to the agent) environment model.
// rho_star, when provided, feeds the running-regret telemetry column.
AgentResult run_agent(const AgentConfig& cfg, const ModelSpec& env, const ClockConfig& clock,
                      PlannerCache* cache = nullptr, const double* rho_star = nullptr);

}  // namespace ofudiff
