#include "ofudiff/agent.hpp"

#include "ofudiff/state_bound.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <limits>

namespace ofudiff {

namespace {

std::string cache_key(const ModelSpec& model, const Grid& grid, const char* kind, bool with_eps) {
    std::string key;
    key.reserve(128);
    key += model.family_id();
    key += '|';
    key += model.reward().id();
    key += '|';
    key += kind;
    auto append = [&key](const double* data, std::size_t count) {
        const char* raw = reinterpret_cast<const char*>(data);
        key.append(raw, raw + count * sizeof(double));
    };
    append(model.theta().data(), model.theta().size());
    append(model.sigma_bar().data(), model.sigma_bar().size());
    const double gp[3] = {grid.radius, grid.spacing, static_cast<double>(grid.actions.size())};
    append(gp, 3);
    if (with_eps) {
        const double e = model.epsilon();
        append(&e, 1);
    }
    return key;
}

}  // namespace

std::shared_ptr<const HjbSolution> PlannerCache::lookup_or(
    const std::string& key, const std::function<HjbSolution()>& make) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = solutions_.find(key);
        if (it != solutions_.end()) return it->second;
    }
    auto sol = std::make_shared<HjbSolution>(make());  // solve outside the lock
    std::lock_guard<std::mutex> lock(mu_);
    ++solves_;
    auto [it, inserted] = solutions_.emplace(key, sol);
    return it->second;
}

std::shared_ptr<const HjbSolution> PlannerCache::diffusive(const ModelSpec& model, const Grid& grid,
                                                           const SolverOptions& opts) {
    return lookup_or(cache_key(model, grid, "diff", false),
                     [&] { return solve_diffusive(model, grid, opts); });
}

std::shared_ptr<const HjbSolution> PlannerCache::jump(const ModelSpec& model, const Grid& grid,
                                                      const SolverOptions& opts) {
    return lookup_or(cache_key(model, grid, "jump", true),
                     [&] { return solve_jump(model, grid, opts); });
}

double PlannerCache::believed_gain(const ModelSpec& model, const Grid& grid,
                                   const SolverOptions& opts) {
    const std::string key = cache_key(model, grid, "gain", true);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = gains_.find(key);
        if (it != gains_.end()) return it->second;
    }
    auto diff = diffusive(model, grid, opts);
    require(diff->converged, "believed_gain: diffusive solve did not converge");
    GreedyPolicy pol(diff, std::make_shared<ModelSpec>(model));
    HjbSolution eval = evaluate_policy_jump(model, grid, pol, opts);
    require(eval.converged, "believed_gain: policy evaluation did not converge");
    std::lock_guard<std::mutex> lock(mu_);
    gains_.emplace(key, eval.rho);
    return eval.rho;
}

bool lazy_trigger(double sup_distance, double beta_now) { return sup_distance > 2.0 * beta_now; }

OptimisticChoice select_optimistic(const Learner& learner, const ConfidenceState& conf,
                                   const std::vector<Vec>& theta_grid, const ModelSpec& env_shape,
                                   const Grid& grid, const SolverOptions& solver,
                                   PlannerCache& cache) {
    OptimisticChoice choice;
    double best = -std::numeric_limits<double>::infinity();
    double rho_hat = -std::numeric_limits<double>::infinity();

    auto consider = [&](const Vec& theta, bool is_hat) {
        if (!env_shape.family().theta_admissible(theta)) return;
        if (!is_hat && !learner.membership(theta, conf)) return;
        ++choice.candidates_in_set;
        std::shared_ptr<const HjbSolution> sol;
        try {
            sol = cache.diffusive(env_shape.with_theta(theta), grid, solver);
            if (!sol->converged) throw Error("planner did not converge");
        } catch (const Error&) {
            ++choice.planner_failures;
            return;
        }
        if (is_hat) rho_hat = sol->rho;
        if (sol->rho > best) {
            best = sol->rho;
            choice.theta_tilde = theta;
            choice.solution = sol;
        }
    };

    for (const Vec& theta : theta_grid) consider(theta, false);
    consider(conf.theta_hat, true);  // the fit always qualifies (zero distance)

    require(choice.solution != nullptr, "select_optimistic: no plannable candidate in the set");
    // Optimism sanity: the selected gain dominates the fit's own gain.
    if (std::isfinite(rho_hat))
        require(best >= rho_hat - 10.0 * solver.tol, "select_optimistic: optimism check failed");
    return choice;
}

AgentResult run_agent(const AgentConfig& cfg, const ModelSpec& env, const ClockConfig& clock,
                      PlannerCache* cache, const double* rho_star) {
    clock.validate();
    require(cfg.delta > 0.0 && cfg.delta < 1.0, "run_agent: delta in (0,1)");
    const FamilyMeta& meta = env.meta();
    const double eps = env.epsilon();
    const double delta_conf = cfg.delta / 3.0;

    const Vec x0 = cfg.x0.size() == meta.d ? cfg.x0 : Vec::Zero(meta.d);
    const Vec varpi0 = meta.clamp_action(cfg.initial_control.size() == meta.d_action
                                             ? cfg.initial_control
                                             : Vec::Zero(meta.d_action));

    StateBound bound = StateBound::from_model(env, x0);
    Learner learner(env.family_ptr(), eps, env.sigma_bar_op(), bound, cfg.nlls);

    PlannerCache local_cache;
    PlannerCache& plans = cache != nullptr ? *cache : local_cache;

    AgentResult out;
    Grid grid;
    {
        double radius = cfg.planner.grid_radius;
        if (radius <= 0.0) {
            const auto expected = static_cast<std::size_t>(std::ceil(2.0 * clock.horizon / eps)) + 1;
            radius = 1.5 * bound.h_delta(expected, cfg.delta);
        }
        grid = make_grid(meta.d, radius, cfg.planner.grid_spacing, meta,
                         cfg.planner.actions_per_axis);
    }
    out.planner_grid = grid;

    RngStream clock_stream(clock.seed, Stream::clock);
    RngStream mark_stream(clock.seed, Stream::marks);
    const std::vector<double> arrivals = sample_arrivals(clock, clock_stream);

    EventLog& log = out.log;
    log.horizon = clock.horizon;
    log.arrivals.push_back(0.0);
    log.states.push_back(x0);
    log.actions.push_back(varpi0);

    // Episode state.  Before the first fit the agent plays the initial
    // control; the first event forces a refit (degenerate trigger).
    Policy policy = [&](const Vec&) { return varpi0; };
    bool have_ref = false;
    Vec theta_ref;
    std::vector<Vec> trig_cands;
    std::vector<double> trig_sums;  // sum ||mu_bar_c - mu_bar_ref||^2 over the design log
    bool episode_member_star = false;
    double reward_running = 0.0;

    Vec mu_ref(meta.d), mu_c(meta.d);
    const RolloutOptions guard_opts;
    auto guard_cap = [&](std::size_t n) {
        return guard_opts.cap_factor * bound.h_delta(n, guard_opts.guard_delta);
    };

    for (std::size_t n = 1; n <= arrivals.size(); ++n) {
        Vec mark = mark_stream.gaussian_vec(meta.d);
        Vec x = step(log.states.back(), log.actions.back(), env, mark);
        learner.observe(log.states.back(), log.actions.back(), x);
        log.arrivals.push_back(arrivals[n - 1]);
        log.marks.push_back(std::move(mark));
        log.states.push_back(x);

        // Accumulate the new design row into the per-candidate discrepancies.
        if (have_ref && !trig_cands.empty()) {
            const Vec& px = log.states[log.states.size() - 2];
            const Vec& pa = log.actions.back();
            env.family().eval(theta_ref, px, pa, mu_ref);
            for (std::size_t c = 0; c < trig_cands.size(); ++c) {
                env.family().eval(trig_cands[c], px, pa, mu_c);
                trig_sums[c] += (mu_c - mu_ref).squaredNorm();
            }
        }

        bool fire;
        if (!have_ref) {
            fire = true;  // no reference fit yet
        } else if (trig_cands.empty()) {
            fire = true;  // degenerate candidate set forces a refit
        } else {
            double sup = 0.0;
            for (double s : trig_sums) sup = std::max(sup, s);
            fire = lazy_trigger(eps * std::sqrt(sup), learner.beta(n, delta_conf));
        }

        if (fire) {
            if (static_cast<int>(out.episodes.size()) >= cfg.max_episodes) {
                out.aborted = true;
                out.abort_reason = "planner budget exhausted";
                break;
            }
            ConfidenceState conf = learner.fit(delta_conf, have_ref ? &theta_ref : nullptr);
            OptimisticChoice choice = select_optimistic(learner, conf, cfg.theta_grid, env, grid,
                                                        cfg.planner.solver, plans);
            out.deployed.push_back(choice.solution);
            auto believed = std::make_shared<ModelSpec>(env.with_theta(choice.theta_tilde));
            policy = GreedyPolicy(choice.solution, believed);
            episode_member_star = learner.membership(env.theta(), conf);

            EpisodeRecord rec;
            rec.k = out.episodes.size() + 1;
            rec.n_k = n;
            rec.tau_nk = log.arrivals.back();
            rec.theta_tilde = choice.theta_tilde;
            rec.theta_hat = conf.theta_hat;
            rec.beta_at_start = conf.beta;
            rec.planner_rho = choice.solution->rho;
            rec.policy_id = out.deployed.size() - 1;
            rec.member_star = episode_member_star;
            rec.candidates_in_set = choice.candidates_in_set;
            rec.planner_failures = choice.planner_failures;
            out.episodes.push_back(std::move(rec));

            // Rebuild the trigger candidate set and its history sums.
            theta_ref = conf.theta_hat;
            have_ref = true;
            trig_cands.clear();
            for (const Vec& th : cfg.theta_grid)
                if (learner.membership(th, conf)) trig_cands.push_back(th);
            for (int j = 0; j < meta.d_theta; ++j) {
                const double eta = cfg.trigger_perturbation * (meta.theta_hi[j] - meta.theta_lo[j]);
                for (double sgn : {-1.0, 1.0}) {
                    Vec th = conf.theta_hat;
                    th[j] += sgn * eta;
                    if (meta.theta_in_box(th) && learner.membership(th, conf))
                        trig_cands.push_back(th);
                }
            }
            trig_sums.assign(trig_cands.size(), 0.0);
            for (std::size_t c = 0; c < trig_cands.size(); ++c) {
                trig_sums[c] = learner.design_distance2_bar(trig_cands[c], theta_ref);
            }
        }

        log.actions.push_back(meta.clamp_action(policy(x)));
        const double reward = eps * env.reward_bar(log.states.back(), log.actions.back());
        log.rewards.push_back(reward);
        reward_running += reward;

        EventTelemetry tel;
        tel.n = n;
        tel.k = out.episodes.empty() ? 0 : out.episodes.back().k;
        tel.member_star = episode_member_star;
        tel.running_regret = rho_star != nullptr
                                 ? log.arrivals.back() * (*rho_star) - reward_running
                                 : std::numeric_limits<double>::quiet_NaN();
        out.telemetry.push_back(tel);

        if (x.norm() > guard_cap(n)) {
            log.exploded = true;
            out.aborted = true;
            out.abort_reason = "state explosion guard";
            break;
        }
    }
    out.planner_solves = plans.solves();
    return out;
}

}  // namespace ofudiff
