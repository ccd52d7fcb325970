#pragma once

#include "ofudiff/agent.hpp"
#include "ofudiff/model.hpp"
#include "ofudiff/sweep.hpp"

#include <json.hpp>

#include <string>

namespace ofudiff {

using Json = nlohmann::json;

// Declarative model definition (see docs/config_schema.json):
//   family: id/dimensions/boxes/L0 (+ damping/gain for tanh)
//   theta, epsilon, sigma_bar (d x d row-major nested arrays), reward.
ModelSpec load_model(const Json& j);
ModelSpec load_model_file(const std::string& path);

// Agent block: delta, theta_grid_per_dim (tensor grid over the theta box,
// inadmissible points dropped), planner settings, x0, initial_control.
AgentConfig load_agent(const Json& j, const FamilyMeta& meta);

// Sweep block: model (inline or model_path), agent, epsilons, horizons,
// seeds, flags.
SweepConfig load_sweep(const Json& j, const std::string& base_dir = "");

Json read_json_file(const std::string& path);

std::vector<Vec> tensor_theta_grid(const DriftFamily& family, int per_dim);

}  // namespace ofudiff
