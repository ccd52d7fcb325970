#include "ofudiff/model.hpp"

#include <cmath>

namespace ofudiff {

double FamilyMeta::theta_diameter() const { return (theta_hi - theta_lo).norm(); }

double FamilyMeta::action_radius() const {
    // The farthest corner of the action box from the origin.
    double r2 = 0.0;
    for (int i = 0; i < d_action; ++i) {
        const double m = std::max(std::abs(action_lo[i]), std::abs(action_hi[i]));
        r2 += m * m;
    }
    return std::sqrt(r2);
}

Vec FamilyMeta::clamp_action(const Vec& a) const {
    Vec out = a;
    for (int i = 0; i < d_action; ++i) out[i] = std::clamp(out[i], action_lo[i], action_hi[i]);
    return out;
}

bool FamilyMeta::theta_in_box(const Vec& theta, double slack) const {
    if (theta.size() != d_theta) return false;
    for (int i = 0; i < d_theta; ++i) {
        if (theta[i] < theta_lo[i] - slack || theta[i] > theta_hi[i] + slack) return false;
    }
    return true;
}

double FamilyMeta::log_cover_bound(double state_radius, double tol) const {
    require(tol > 0.0, "log_cover_bound: tol must be positive");
    const double probe = 1.0 + std::max(state_radius, 0.0) + action_radius();
    const double diam = theta_diameter();
    if (tol >= diam * probe) return 0.0;  // a single element covers
    return d_theta * std::log(1.0 + 2.0 * probe * diam / tol);
}

bool DriftFamily::theta_admissible(const Vec& theta) const { return meta().theta_in_box(theta); }

ModelSpec::ModelSpec(std::shared_ptr<const DriftFamily> family, std::shared_ptr<const Reward> reward,
                     Vec theta, Mat sigma_bar, double epsilon)
    : family_(std::move(family)),
      reward_(std::move(reward)),
      theta_(std::move(theta)),
      sigma_bar_(std::move(sigma_bar)),
      epsilon_(epsilon) {
    require(family_ != nullptr && reward_ != nullptr, "ModelSpec: null family or reward");
    const FamilyMeta& m = family_->meta();
    require(epsilon_ > 0.0 && epsilon_ <= 1.0, "ModelSpec: epsilon must lie in (0, 1]");
    require(theta_.size() == m.d_theta, "ModelSpec: theta dimension mismatch");
    require(sigma_bar_.rows() == m.d && sigma_bar_.cols() == m.d,
            "ModelSpec: sigma_bar must be d x d");
    require(family_->theta_admissible(theta_), "ModelSpec: theta outside the admissible set");
    require(reward_->bound() <= m.lipschitz_L0 + 1e-12,
            "ModelSpec: reward bound exceeds the family L0");

    // Noise non-degeneracy: sigma_bar sigma_bar' >= varsigma I with varsigma > 0.
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma_bar_ * sigma_bar_.transpose());
    require(es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0,
            "ModelSpec: sigma_bar must be full rank");
    sigma_op_ = std::sqrt(es.eigenvalues().maxCoeff());

    lyap_ = family_->lyapunov(theta_);
}

void ModelSpec::drift_bar(const Vec& x, const Vec& a, Vec& out) const {
    family_->eval(theta_, x, a, out);
    if (!out.allFinite()) throw Error("model fault: non-finite drift at requested point");
}

Vec ModelSpec::drift_bar(const Vec& x, const Vec& a) const {
    Vec out(d());
    drift_bar(x, a, out);
    return out;
}

double ModelSpec::reward_bar(const Vec& x, const Vec& a) const {
    const double r = reward_->eval(x, a);
    if (!std::isfinite(r)) throw Error("model fault: non-finite reward");
    if (std::abs(r) > meta().lipschitz_L0 + 1e-12) throw Error("model fault: reward exceeds L0 bound");
    return r;
}

ModelSpec ModelSpec::with_theta(Vec theta) const {
    return ModelSpec(family_, reward_, std::move(theta), sigma_bar_, epsilon_);
}

ModelSpec ModelSpec::with_epsilon(double epsilon) const {
    return ModelSpec(family_, reward_, theta_, sigma_bar_, epsilon);
}

}  // namespace ofudiff
