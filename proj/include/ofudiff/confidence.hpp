#pragma once

#include "ofudiff/common.hpp"
#include "ofudiff/event_log.hpp"
#include "ofudiff/model.hpp"
#include "ofudiff/nlls.hpp"
#include "ofudiff/state_bound.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace ofudiff {

// Anytime confidence radius
//   beta_n(delta) = beta_0 v 2 sqrt(eps) S ( sqrt(1 + 2(sqrt(2 log(4 pi^2 n^3 / 3 delta))
//                   + sqrt(2 sqrt(eps) S^-1 kappa))) + sqrt(kappa) )
// with kappa = log( (2 pi^2 n^2 eps N / 3 delta) (S^2 + 8 L0^2 (1 + H)) ),
// beta_0 = sqrt(eps), and log N passed in as `log_cover`.
double beta_n(std::size_t n, double delta, double epsilon, double sigma_bar_norm,
              double log_cover, double h, double l0);

struct ConfidenceState {
    Vec theta_hat;
    std::size_t n = 0;
    double beta = 0.0;
    double delta = 0.0;
    double fit_error_sq = 0.0;  // NLLS objective at theta_hat
    bool fit_converged = true;
};

// The (state, action, increment) triples the fits and distances run over.
struct DesignLog {
    std::vector<Vec> x, a, dx;

    std::size_t size() const { return x.size(); }
    void push(Vec xi, Vec ai, Vec dxi);
    static DesignLog from_event_log(const EventLog& log);
};

// Sequential estimation state for one trajectory: owns the design log and
// produces fits, radii and membership tests in the mu = eps*mu_bar scale.
class Learner {
public:
    Learner(std::shared_ptr<const DriftFamily> family, double epsilon, double sigma_bar_op,
            StateBound bound, NllsOptions opts = {});

    void observe(const Vec& x, const Vec& a, const Vec& x_next);
    void observe_log(const EventLog& log);

    std::size_t n() const { return design_.size(); }
    const DesignLog& design() const { return design_; }
    const DriftFamily& family() const { return *family_; }
    double epsilon() const { return epsilon_; }
    const StateBound& bound() const { return bound_; }

    double h_delta(std::size_t n, double delta) const { return bound_.h_delta(n, delta); }
    // Radius at event count n; the covering number is the analytic family
    // bound on the ball of radius H_delta(n) at tolerance eps*S^2/n.
    double beta(std::size_t n, double delta) const;

    // sqrt( sum_i || mu_a(x_i,a_i) - mu_b(x_i,a_i) ||^2 ) over the first
    // first_n design rows (all by default).  Theta-linear families go through
    // the accumulated Gram matrix instead of a pass over the log.
    double design_distance(const Vec& theta_a, const Vec& theta_b,
                           std::size_t first_n = static_cast<std::size_t>(-1)) const;

    // Same quantity squared in the mu_bar scale (no eps factor).
    double design_distance2_bar(const Vec& theta_a, const Vec& theta_b) const;

    bool has_gram() const { return has_gram_; }
    const Mat& gram() const { return gram_; }  // sum_i J_i' J_i over design rows

    // NLLS fit plus radius at the current n.
    ConfidenceState fit(double delta, const Vec* warm_start = nullptr) const;

    bool membership(const Vec& theta, const ConfidenceState& conf) const;

private:
    std::shared_ptr<const DriftFamily> family_;
    double epsilon_;
    double sigma_op_;
    StateBound bound_;
    NllsOptions opts_;
    DesignLog design_;
    // Sufficient statistics for theta-linear families (mu_bar = J(x,a) theta):
    // Gram = sum J'J, jt_dx = sum J'dx, sum_dx2 = sum |dx|^2.
    bool has_gram_ = false;
    Mat gram_;
    Vec jt_dx_;
    double sum_dx2_ = 0.0;
};

}  // namespace ofudiff
