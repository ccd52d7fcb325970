#pragma once

#include "ofudiff/event_log.hpp"
#include "ofudiff/hjb.hpp"

#include <atomic>
#include <memory>

namespace ofudiff {

// Total state-to-action map backed by a solved HJB table: the action argmax
// is re-evaluated at the query point against the interpolated value function,
// ties broken toward the lexicographically smallest action.  Queries outside
// the grid box are clamped and counted.
class GreedyPolicy {
public:
    GreedyPolicy(std::shared_ptr<const HjbSolution> solution, std::shared_ptr<const ModelSpec> model);

    Vec operator()(const Vec& x) const;
    std::size_t clamp_count() const { return clamps_->load(); }
    const HjbSolution& solution() const { return *solution_; }

private:
    std::shared_ptr<const HjbSolution> solution_;
    std::shared_ptr<const ModelSpec> model_;
    std::shared_ptr<std::atomic<std::size_t>> clamps_;
};

struct GainEstimate {
    double mean = 0.0;
    double stderr = 0.0;
    int replicas = 0;
    int exploded = 0;
};

// Monte Carlo estimate of the long-run reward per unit wall-clock time under
// a stationary policy: replica rollouts with derived seeds, batch-mean error.
GainEstimate evaluate_gain(const Policy& policy, const ModelSpec& model, const ClockConfig& cfg,
                           int replicas, const RolloutOptions& opts = {});

// Gain gap of the diffusive greedy policy under the jump dynamics:
// rho* from the jump solver minus the simulated gain of the diffusive policy.
double policy_suboptimality(const ModelSpec& model, const Grid& grid, const ClockConfig& cfg,
                            int replicas, const SolverOptions& solver = {});

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ofudiff
