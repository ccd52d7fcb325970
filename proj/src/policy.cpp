#include "ofudiff/policy.hpp"

#include "ofudiff/quadrature.hpp"
#include "ofudiff/rng.hpp"

#include <cmath>
#include <limits>

namespace ofudiff {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
    return splitmix64(s);
}

GreedyPolicy::GreedyPolicy(std::shared_ptr<const HjbSolution> solution,
                           std::shared_ptr<const ModelSpec> model)
    : solution_(std::move(solution)),
      model_(std::move(model)),
      clamps_(std::make_shared<std::atomic<std::size_t>>(0)) {
    require(solution_ != nullptr && model_ != nullptr, "GreedyPolicy: null solution or model");
    require(solution_->converged, "GreedyPolicy: solution did not converge");
}

Vec GreedyPolicy::operator()(const Vec& x) const {
    const Grid& grid = solution_->grid;
    Vec q = x;
    bool clamped = false;
    for (int ax = 0; ax < grid.d; ++ax) {
        if (q[ax] < -grid.radius || q[ax] > grid.radius) {
            q[ax] = std::clamp(q[ax], -grid.radius, grid.radius);
            clamped = true;
        }
    }
    if (clamped) clamps_->fetch_add(1);

    const ModelSpec& m = *model_;
    double best = -std::numeric_limits<double>::infinity();
    const Vec* best_a = &grid.actions.front();
    Vec mu(grid.d);
    if (solution_->kind == HjbKind::diffusive) {
        const double h = grid.spacing;
        const double w0 = solution_->w_at(q);
        for (const Vec& a : grid.actions) {
            m.drift_bar(q, a, mu);
            double val = m.reward_bar(q, a);
            for (int ax = 0; ax < grid.d; ++ax) {
                Vec qp = q, qm = q;
                qp[ax] += h;
                qm[ax] -= h;
                val += (std::max(mu[ax], 0.0) * (solution_->w_at(qp) - w0) -
                        std::max(-mu[ax], 0.0) * (w0 - solution_->w_at(qm))) / h;
            }
            if (val > best) {
                best = val;
                best_a = &a;
            }
        }
    } else {
        const double eps = solution_->epsilon;
        const double seps = std::sqrt(eps);
        const GaussHermite& gh = GaussHermite::order(11);
        const Vec pts = gh.normal_points();
        const Vec wts = gh.normal_weights();
        const int k1 = static_cast<int>(pts.size());
        const int nq = grid.d == 1 ? k1 : k1 * k1;
        for (const Vec& a : grid.actions) {
            m.drift_bar(q, a, mu);
            const Vec mean = q + eps * mu;
            double val = eps * m.reward_bar(q, a);
            for (int k = 0; k < nq; ++k) {
                Vec xi(grid.d);
                double pw;
                if (grid.d == 1) {
                    xi[0] = pts[k];
                    pw = wts[k];
                } else {
                    xi[0] = pts[k % k1];
                    xi[1] = pts[k / k1];
                    pw = wts[k % k1] * wts[k / k1];
                }
                val += pw * solution_->w_at(mean + seps * (m.sigma_bar() * xi));
            }
            if (val > best) {
                best = val;
                best_a = &a;
            }
        }
    }
    return *best_a;
}

GainEstimate evaluate_gain(const Policy& policy, const ModelSpec& model, const ClockConfig& cfg,
                           int replicas, const RolloutOptions& opts) {
    require(replicas >= 1, "evaluate_gain: replicas >= 1");
    require(cfg.horizon > 0.0, "evaluate_gain: positive horizon");
    GainEstimate est;
    est.replicas = replicas;
    std::vector<double> gains;
    gains.reserve(replicas);
    const Vec x0 = Vec::Zero(model.d());
    for (int i = 0; i < replicas; ++i) {
        ClockConfig c = cfg;
        c.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        EventLog log = rollout(policy, model, c, x0, opts);
        if (log.exploded) {
            ++est.exploded;
            continue;
        }
        gains.push_back(log.reward_sum() / cfg.horizon);
    }
    require(!gains.empty(), "evaluate_gain: all replicas hit the explosion guard");
    double mean = 0.0;
    for (double g : gains) mean += g;
    mean /= static_cast<double>(gains.size());
    double var = 0.0;
    for (double g : gains) var += (g - mean) * (g - mean);
    var = gains.size() > 1 ? var / static_cast<double>(gains.size() - 1) : 0.0;
    est.mean = mean;
    est.stderr = std::sqrt(var / static_cast<double>(gains.size()));
    return est;
}

double policy_suboptimality(const ModelSpec& model, const Grid& grid, const ClockConfig& cfg,
                            int replicas, const SolverOptions& solver) {
    auto jump = solve_jump(model, grid, solver);
    require(jump.converged, "policy_suboptimality: jump solve did not converge");
    auto diff = std::make_shared<HjbSolution>(solve_diffusive(model, grid, solver));
    require(diff->converged, "policy_suboptimality: diffusive solve did not converge");
    GreedyPolicy pol(diff, std::make_shared<ModelSpec>(model));
    const GainEstimate gain = evaluate_gain(pol, model, cfg, replicas);
    return jump.rho - gain.mean;
}

}  // namespace ofudiff
