#pragma once

#include "ofudiff/clock.hpp"
#include "ofudiff/common.hpp"
#include "ofudiff/model.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace ofudiff {

// Realized trajectory of one run.  Row n holds the arrival tau_n, the state
// X_{tau_n} and the action played there; rewards and marks are indexed from
// the first arrival (rewards has one entry fewer than states, and the regret
// sum runs over exactly those entries).
struct EventLog {
    double horizon = 0.0;
    std::vector<double> arrivals;      // tau_0 = 0, tau_1, ..., tau_N
    std::vector<Vec> states;           // X at each arrival
    std::vector<Vec> actions;          // action played at each arrival
    std::vector<double> rewards;       // r(X_{tau_n}, a_{tau_n}) for n = 1..N
    std::vector<Vec> marks;            // xi_1, ..., xi_N
    bool exploded = false;

    std::size_t n_events() const { return marks.size(); }
    double reward_sum() const;
    void validate() const;
};

// One transition of the jump recursion: x + eps*mu_bar(x,a) + sqrt(eps)*Sigma_bar*mark.
Vec step(const Vec& x, const Vec& a, const ModelSpec& model, const Vec& mark);

using Policy = std::function<Vec(const Vec&)>;

struct RolloutOptions {
    // Explosion guard.  Zero means derive the cap as cap_factor * H_delta(n)
    // from the model's certificate (or fall back to 1e6 without one).
    double hard_cap = 0.0;
    double cap_factor = 10.0;
    double guard_delta = 0.05;
};

// Closed-loop simulation of the marked compound-Poisson recursion under a
// stationary policy.  Arrival and mark streams are derived independently from
// cfg.seed.  On a guard hit the log is truncated and flagged, not thrown.
EventLog rollout(const Policy& policy, const ModelSpec& model, const ClockConfig& cfg,
                 const Vec& x0, const RolloutOptions& opts = {});

// CSV with mandatory header n,tau,x_1..x_d,a_1..a_dA,reward,xi_1..xi_d and
// 17-significant-digit floats (doubles round-trip exactly).  Row 0 carries
// zero placeholders in the reward and mark columns.
void write_event_log_csv(const EventLog& log, std::ostream& out);
EventLog read_event_log_csv(std::istream& in);

}  // namespace ofudiff
