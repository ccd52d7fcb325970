#include "ofudiff/studies.hpp"

#include "ofudiff/state_bound.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace ofudiff {

LearnStudyResult learn_study(const ModelSpec& env, const ClockConfig& clock, double delta,
                             const Policy* policy) {
    LearnStudyResult res;
    const Vec x0 = Vec::Zero(env.d());
    Policy pol = policy != nullptr ? *policy : Policy([&](const Vec&) {
        return Vec::Zero(env.d_action());
    });
    res.log = rollout(pol, env, clock, x0);

    StateBound bound = StateBound::from_model(env, x0);
    Learner learner(env.family_ptr(), env.epsilon(), env.sigma_bar_op(), bound);

    std::vector<Vec> theta_hats;
    Vec warm;
    for (std::size_t n = 1; n <= res.log.n_events(); ++n) {
        learner.observe(res.log.states[n - 1], res.log.actions[n - 1], res.log.states[n]);
        ConfidenceState conf = learner.fit(delta, warm.size() > 0 ? &warm : nullptr);
        warm = conf.theta_hat;
        theta_hats.push_back(conf.theta_hat);

        LearnStudyRow row;
        row.n = n;
        row.beta = conf.beta;
        row.theta_hat = conf.theta_hat;
        row.member_star = learner.membership(env.theta(), conf);
        row.h_delta = learner.h_delta(n, delta);
        row.state_norm = res.log.states[n].norm();
        if (!row.member_star) res.coverage_all = false;
        if (row.state_norm > row.h_delta) res.state_bound_all = false;
        res.rows.push_back(std::move(row));
    }
    auto [first, second] = prediction_error_sums(res.log, theta_hats, env);
    res.first_order_error = first;
    res.second_order_error = second;
    return res;
}

std::pair<double, double> prediction_error_sums(const EventLog& log,
                                                const std::vector<Vec>& theta_hats,
                                                const ModelSpec& env) {
    double first = 0.0, second = 0.0;
    Vec mu_hat(env.d()), mu_star(env.d());
    // theta_hats[n-1] is the fit on the first n transitions; its prediction
    // error is scored on the query the next event actually poses.
    for (std::size_t n = 1; n < log.states.size() && n <= theta_hats.size(); ++n) {
        const Vec& x = log.states[n];
        const Vec& a = log.actions[n];
        env.family().eval(theta_hats[n - 1], x, a, mu_hat);
        env.family().eval(env.theta(), x, a, mu_star);
        const double gap = env.epsilon() * (mu_hat - mu_star).norm();
        first += gap;
        second += gap * gap;
    }
    return {first, second};
}

namespace {

void put(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_learn_csv(const LearnStudyResult& result, std::ostream& out) {
    const int dt = result.rows.empty() ? 0 : static_cast<int>(result.rows.front().theta_hat.size());
    out << "n,beta_n";
    for (int i = 1; i <= dt; ++i) out << ",theta_hat_" << i;
    out << ",member_star,h_delta\n";
    for (const LearnStudyRow& r : result.rows) {
        out << r.n << ",";
        put(out, r.beta);
        for (int i = 0; i < dt; ++i) {
            out << ",";
            put(out, r.theta_hat[i]);
        }
        out << "," << (r.member_star ? 1 : 0) << ",";
        put(out, r.h_delta);
        out << "\n";
    }
}

void write_solution_csv(const HjbSolution& sol, std::ostream& out) {
    out << "node";
    for (int i = 1; i <= sol.grid.d; ++i) out << ",x_" << i;
    out << ",w";
    const int da = static_cast<int>(sol.grid.actions.front().size());
    for (int i = 1; i <= da; ++i) out << ",a_" << i;
    out << "\n";
    for (std::size_t node = 0; node < sol.grid.n_nodes(); ++node) {
        out << node;
        const Vec x = sol.grid.coord(node);
        for (int i = 0; i < sol.grid.d; ++i) {
            out << ",";
            put(out, x[i]);
        }
        out << ",";
        put(out, sol.w[node]);
        const int ai = sol.policy[node];
        for (int i = 0; i < da; ++i) {
            out << ",";
            put(out, ai >= 0 ? sol.grid.actions[ai][i] : std::numeric_limits<double>::quiet_NaN());
        }
        out << "\n";
    }
}

std::string solution_sidecar_json(const HjbSolution& sol) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\n  \"kind\": \"%s\",\n  \"rho\": %.17g,\n  \"residual\": %.17g,\n"
                  "  \"iterations\": %d,\n  \"lipschitz_estimate\": %.17g,\n"
                  "  \"converged\": %s,\n  \"grid_radius\": %.17g,\n  \"grid_spacing\": %.17g\n}\n",
                  sol.kind == HjbKind::diffusive ? "diffusive" : "jump", sol.rho, sol.residual,
                  sol.iterations, sol.lipschitz_estimate, sol.converged ? "true" : "false",
                  sol.grid.radius, sol.grid.spacing);
    return buf;
}

}  // namespace ofudiff
