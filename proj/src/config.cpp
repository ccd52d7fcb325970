#include "ofudiff/config.hpp"

#include <filesystem>
#include <fstream>

namespace ofudiff {

namespace {

Vec to_vec(const Json& j) {
    require(j.is_array(), "config: expected an array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

Mat to_mat(const Json& j) {
    require(j.is_array() && !j.empty() && j[0].is_array(), "config: expected nested arrays");
    Mat m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        require(j[r].size() == j[0].size(), "config: ragged matrix");
        for (std::size_t c = 0; c < j[r].size(); ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
    }
    return m;
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "config: cannot open " + path);
    Json j;
    f >> j;
    return j;
}

ModelSpec load_model(const Json& j) {
    require(j.contains("family") && j.contains("theta") && j.contains("epsilon") &&
                j.contains("sigma_bar") && j.contains("reward"),
            "model config: family/theta/epsilon/sigma_bar/reward required");
    const Json& fj = j.at("family");
    FamilyMeta meta;
    meta.d = fj.value("d", 1);
    meta.d_action = fj.value("d_action", 1);
    meta.theta_lo = to_vec(fj.at("theta_lo"));
    meta.theta_hi = to_vec(fj.at("theta_hi"));
    meta.d_theta = static_cast<int>(meta.theta_lo.size());
    meta.action_lo = to_vec(fj.at("action_lo"));
    meta.action_hi = to_vec(fj.at("action_hi"));
    meta.lipschitz_L0 = fj.value("lipschitz_L0", 1.0);

    const std::string id = fj.at("id").get<std::string>();
    std::shared_ptr<const DriftFamily> family;
    if (id == "linear") {
        family = make_linear_family(meta);
    } else if (id == "tanh") {
        family = make_tanh_family(meta, fj.value("damping", 1.0), fj.value("gain", 1.0));
    } else {
        throw Error("model config: unknown family id '" + id + "'");
    }

    const Json& rj = j.at("reward");
    const std::string rid = rj.at("id").get<std::string>();
    std::shared_ptr<const Reward> reward;
    if (rid == "constant") {
        reward = make_constant_reward(rj.value("value", 1.0));
    } else if (rid == "gauss_bump") {
        reward = make_gauss_bump_reward(rj.value("action_weight", 0.05));
    } else {
        throw Error("model config: unknown reward id '" + rid + "'");
    }

    return ModelSpec(family, reward, to_vec(j.at("theta")), to_mat(j.at("sigma_bar")),
                     j.at("epsilon").get<double>());
}

ModelSpec load_model_file(const std::string& path) { return load_model(read_json_file(path)); }

std::vector<Vec> tensor_theta_grid(const DriftFamily& family, int per_dim) {
    require(per_dim >= 1, "tensor_theta_grid: per_dim >= 1");
    const FamilyMeta& m = family.meta();
    std::vector<Vec> grid;
    std::vector<int> idx(m.d_theta, 0);
    long total = 1;
    for (int i = 0; i < m.d_theta; ++i) total *= per_dim;
    for (long k = 0; k < total; ++k) {
        Vec t(m.d_theta);
        for (int i = 0; i < m.d_theta; ++i) {
            const double f = per_dim == 1 ? 0.5 : static_cast<double>(idx[i]) / (per_dim - 1);
            t[i] = m.theta_lo[i] + f * (m.theta_hi[i] - m.theta_lo[i]);
        }
        if (family.theta_admissible(t)) grid.push_back(std::move(t));
        for (int i = m.d_theta - 1; i >= 0; --i) {
            if (++idx[i] < per_dim) break;
            idx[i] = 0;
        }
    }
    require(!grid.empty(), "tensor_theta_grid: no admissible grid point");
    return grid;
}

AgentConfig load_agent(const Json& j, const FamilyMeta& meta) {
    AgentConfig cfg;
    cfg.delta = j.value("delta", 0.1);
    cfg.seed = j.value("seed", 0ull);
    cfg.max_episodes = j.value("max_episodes", 100000);
    cfg.trigger_perturbation = j.value("trigger_perturbation", 0.1);
    if (j.contains("x0")) cfg.x0 = to_vec(j.at("x0"));
    if (j.contains("initial_control")) cfg.initial_control = to_vec(j.at("initial_control"));
    if (j.contains("planner")) {
        const Json& p = j.at("planner");
        cfg.planner.grid_radius = p.value("grid_radius", 0.0);
        cfg.planner.grid_spacing = p.value("grid_spacing", 0.05);
        cfg.planner.actions_per_axis = p.value("actions_per_axis", 33);
        cfg.planner.solver.tol = p.value("tol", 1e-6);
        cfg.planner.solver.max_iters = p.value("max_iters", 400000);
        cfg.planner.solver.policy_iteration = p.value("policy_iteration", true);
        cfg.planner.solver.gauss_hermite_order = p.value("gauss_hermite_order", 11);
    }
    (void)meta;
    return cfg;
}

SweepConfig load_sweep(const Json& j, const std::string& base_dir) {
    require(j.contains("epsilons") && j.contains("horizons") && j.contains("seeds"),
            "sweep config: epsilons/horizons/seeds required");
    Json model_json;
    if (j.contains("model")) {
        model_json = j.at("model");
    } else if (j.contains("model_path")) {
        auto p = std::filesystem::path(j.at("model_path").get<std::string>());
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        model_json = read_json_file(p.string());
    } else {
        throw Error("sweep config: model or model_path required");
    }
    ModelSpec model = load_model(model_json);

    SweepConfig cfg{model,
                    load_agent(j.value("agent", Json::object()), model.meta()),
                    {},
                    {},
                    {},
                    j.value("oracle_baseline", true),
                    j.value("decompose", false),
                    j.value("truth_spacing_factor", 0.5),
                    j.value("out_dir", std::string{}),
                    j.value("jobs", 1)};
    for (const auto& e : j.at("epsilons")) cfg.epsilons.push_back(e.get<double>());
    for (const auto& t : j.at("horizons")) cfg.horizons.push_back(t.get<double>());
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
    cfg.agent.theta_grid =
        tensor_theta_grid(model.family(), j.value("agent", Json::object()).value("theta_grid_per_dim", 5));
    cfg.validate();
    return cfg;
}

}  // namespace ofudiff
