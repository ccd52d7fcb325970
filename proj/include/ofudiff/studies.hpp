#pragma once

#include "ofudiff/confidence.hpp"
#include "ofudiff/event_log.hpp"
#include "ofudiff/hjb.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace ofudiff {

// Per-event learning telemetry from a single trajectory: refit at every n,
// radius, membership of theta*, state envelope.
struct LearnStudyRow {
    std::size_t n = 0;
    double beta = 0.0;
    Vec theta_hat;
    bool member_star = false;
    double h_delta = 0.0;
    double state_norm = 0.0;
};

struct LearnStudyResult {
    std::vector<LearnStudyRow> rows;
    bool coverage_all = true;     // theta* in every confidence set
    bool state_bound_all = true;  // |X_n| <= H_delta(n) for every n
    double first_order_error = 0.0;   // sum |mu_hat_n - mu_star| along the trajectory
    double second_order_error = 0.0;  // sum |.|^2
    EventLog log;
};

// Rolls out `policy` (zero action by default), then replays the trajectory
// through the learner with a fit at every event.
LearnStudyResult learn_study(const ModelSpec& env, const ClockConfig& clock, double delta,
                             const Policy* policy = nullptr);

// Realized prediction-error sums for a given fit sequence (theta_hats[n-1]
// is the fit available at event n); diagnostic, requires theta* via env.
std::pair<double, double> prediction_error_sums(const EventLog& log,
                                                const std::vector<Vec>& theta_hats,
                                                const ModelSpec& env);

// CSV: n, beta_n, theta_hat components, member flag, H_delta(n).
void write_learn_csv(const LearnStudyResult& result, std::ostream& out);

// Node table (coordinates, w, action) plus a JSON sidecar string with rho,
// residual, iterations and the measured Lipschitz constant.
void write_solution_csv(const HjbSolution& sol, std::ostream& out);
std::string solution_sidecar_json(const HjbSolution& sol);

}  // namespace ofudiff
