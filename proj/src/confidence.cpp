#include "ofudiff/confidence.hpp"

#include <cmath>
#include <numbers>

namespace ofudiff {

double beta_n(std::size_t n, double delta, double epsilon, double sigma_bar_norm,
              double log_cover, double h, double l0) {
    require(n >= 1, "beta_n: n >= 1");
    require(delta > 0.0 && delta < 1.0, "beta_n: delta in (0,1)");
    require(epsilon > 0.0 && sigma_bar_norm > 0.0, "beta_n: positive epsilon and sigma norm");
    const double beta0 = std::sqrt(epsilon);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double nn = static_cast<double>(n);
    const double kappa = std::log(2.0 * pi2 * nn * nn * epsilon / (3.0 * delta)) + log_cover +
                         std::log(sigma_bar_norm * sigma_bar_norm + 8.0 * l0 * l0 * (1.0 + h));
    const double log_term = std::sqrt(2.0 * std::log(4.0 * pi2 * nn * nn * nn / (3.0 * delta)));
    const double inner = 1.0 + 2.0 * (log_term +
                                      std::sqrt(2.0 * std::sqrt(epsilon) / sigma_bar_norm * kappa));
    const double value = 2.0 * std::sqrt(epsilon) * sigma_bar_norm *
                         (std::sqrt(inner) + std::sqrt(kappa));
    return std::max(beta0, value);
}

void DesignLog::push(Vec xi, Vec ai, Vec dxi) {
    x.push_back(std::move(xi));
    a.push_back(std::move(ai));
    dx.push_back(std::move(dxi));
}

DesignLog DesignLog::from_event_log(const EventLog& log) {
    DesignLog d;
    for (std::size_t n = 0; n + 1 < log.states.size(); ++n)
        d.push(log.states[n], log.actions[n], log.states[n + 1] - log.states[n]);
    return d;
}

Learner::Learner(std::shared_ptr<const DriftFamily> family, double epsilon, double sigma_bar_op,
                 StateBound bound, NllsOptions opts)
    : family_(std::move(family)),
      epsilon_(epsilon),
      sigma_op_(sigma_bar_op),
      bound_(bound),
      opts_(opts) {
    require(family_ != nullptr, "Learner: null family");
    require(epsilon_ > 0.0 && epsilon_ <= 1.0, "Learner: epsilon in (0,1]");
    has_gram_ = family_->linear_in_theta();
    if (has_gram_) {
        const int dt = family_->meta().d_theta;
        gram_ = Mat::Zero(dt, dt);
        jt_dx_ = Vec::Zero(dt);
    }
}

void Learner::observe(const Vec& x, const Vec& a, const Vec& x_next) {
    const Vec dx = x_next - x;
    design_.push(x, a, dx);
    if (has_gram_) {
        // Theta-linear: the Jacobian does not depend on theta.
        Mat jac(family_->meta().d, family_->meta().d_theta);
        const Vec any_theta = Vec::Zero(family_->meta().d_theta);
        family_->jacobian_theta(any_theta, design_.x.back(), design_.a.back(), jac);
        gram_.noalias() += jac.transpose() * jac;
        jt_dx_.noalias() += jac.transpose() * dx;
        sum_dx2_ += dx.squaredNorm();
    }
}

void Learner::observe_log(const EventLog& log) {
    for (std::size_t n = 0; n + 1 < log.states.size(); ++n)
        observe(log.states[n], log.actions[n], log.states[n + 1]);
}

double Learner::beta(std::size_t n, double delta) const {
    if (n == 0) return std::sqrt(epsilon_);
    const double h = bound_.h_delta(n, delta);
    const double tol = epsilon_ * sigma_op_ * sigma_op_ / static_cast<double>(n);
    const double log_cover = family_->meta().log_cover_bound(h, tol);
    return beta_n(n, delta, epsilon_, sigma_op_, log_cover, h, family_->meta().lipschitz_L0);
}

double Learner::design_distance2_bar(const Vec& theta_a, const Vec& theta_b) const {
    if (has_gram_) {
        const Vec v = theta_a - theta_b;
        return v.dot(gram_ * v);
    }
    double sum = 0.0;
    Vec mu_a(family_->meta().d), mu_b(family_->meta().d);
    for (std::size_t i = 0; i < design_.size(); ++i) {
        family_->eval(theta_a, design_.x[i], design_.a[i], mu_a);
        family_->eval(theta_b, design_.x[i], design_.a[i], mu_b);
        sum += (mu_a - mu_b).squaredNorm();
    }
    return sum;
}

double Learner::design_distance(const Vec& theta_a, const Vec& theta_b, std::size_t first_n) const {
    const std::size_t limit = std::min(first_n, design_.size());
    if (limit == design_.size())
        return epsilon_ * std::sqrt(design_distance2_bar(theta_a, theta_b));
    double sum = 0.0;
    Vec mu_a(family_->meta().d), mu_b(family_->meta().d);
    for (std::size_t i = 0; i < limit; ++i) {
        family_->eval(theta_a, design_.x[i], design_.a[i], mu_a);
        family_->eval(theta_b, design_.x[i], design_.a[i], mu_b);
        sum += (mu_a - mu_b).squaredNorm();
    }
    return epsilon_ * std::sqrt(sum);  // mu = eps * mu_bar
}

ConfidenceState Learner::fit(double delta, const Vec* warm_start) const {
    require(design_.size() >= 1, "Learner::fit: empty design log");
    ConfidenceState c;
    c.n = design_.size();
    c.delta = delta;
    c.beta = beta(c.n, delta);

    if (has_gram_) {
        // Closed-form least squares from the sufficient statistics; fall back
        // to the iterative path when the unconstrained optimum leaves the box.
        const FamilyMeta& m = family_->meta();
        Mat reg = gram_ + 1e-12 * Mat::Identity(m.d_theta, m.d_theta);
        Vec theta = reg.ldlt().solve(jt_dx_) / epsilon_;
        if (m.theta_in_box(theta, 1e-12)) {
            for (int i = 0; i < m.d_theta; ++i)
                theta[i] = std::clamp(theta[i], m.theta_lo[i], m.theta_hi[i]);
            c.theta_hat = theta;
            c.fit_error_sq = sum_dx2_ - 2.0 * epsilon_ * theta.dot(jt_dx_) +
                             epsilon_ * epsilon_ * theta.dot(gram_ * theta);
            c.fit_converged = true;
            return c;
        }
    }
    NllsResult res = fit_nlls(design_, *family_, epsilon_, opts_, warm_start);
    c.theta_hat = res.theta;
    c.fit_error_sq = res.objective;
    c.fit_converged = res.converged;
    return c;
}

bool Learner::membership(const Vec& theta, const ConfidenceState& conf) const {
    return design_distance(theta, conf.theta_hat, conf.n) <= conf.beta;
}

}  // namespace ofudiff
