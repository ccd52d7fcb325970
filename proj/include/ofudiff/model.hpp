#pragma once

#include "ofudiff/care.hpp"
#include "ofudiff/common.hpp"

#include <memory>
#include <optional>
#include <string>

namespace ofudiff {

// Static description of a parametric drift family: parameter and action
// boxes, the shared regularity constant L0, and an analytic covering bound.
struct FamilyMeta {
    int d = 1;
    int d_action = 1;
    int d_theta = 1;
    Vec theta_lo, theta_hi;
    Vec action_lo, action_hi;
    double lipschitz_L0 = 1.0;

    double theta_diameter() const;  // Euclidean diameter of the parameter box
    double action_radius() const;   // largest Euclidean norm over the action box
    Vec clamp_action(const Vec& a) const;
    bool theta_in_box(const Vec& theta, double slack = 0.0) const;

    // Upper bound on log N for covering the drift family, restricted to the
    // state ball of `state_radius`, at sup-distance `tol`:
    //   d_theta * log(1 + 2 * L_probe * diam(Theta) / tol),
    // with L_probe = 1 + state_radius + action_radius, and 0 once a single
    // element covers (tol >= diam * L_probe).
    double log_cover_bound(double state_radius, double tol) const;
};

// A parametric drift family mu_bar_theta(x, a).
class DriftFamily {
public:
    virtual ~DriftFamily() = default;
    virtual const std::string& id() const = 0;
    virtual const FamilyMeta& meta() const = 0;
    virtual void eval(const Vec& theta, const Vec& x, const Vec& a, Vec& out) const = 0;
    // d x d_theta Jacobian of mu_bar with respect to theta.
    virtual void jacobian_theta(const Vec& theta, const Vec& x, const Vec& a, Mat& jac) const = 0;
    virtual bool linear_in_theta() const = 0;
    // Box membership plus family-specific stability constraints.
    virtual bool theta_admissible(const Vec& theta) const;
    // Lyapunov certificate for this parameter point; throws CertificateError.
    virtual LyapunovSpec lyapunov(const Vec& theta) const = 0;

    Vec eval(const Vec& theta, const Vec& x, const Vec& a) const {
        Vec out(meta().d);
        eval(theta, x, a, out);
        return out;
    }
};

class Reward {
public:
    virtual ~Reward() = default;
    virtual const std::string& id() const = 0;
    virtual double eval(const Vec& x, const Vec& a) const = 0;
    virtual double bound() const = 0;  // sup |r_bar|
};

// mu_bar(x,a) = A x + B a with theta = (vec A, vec B), column-major, A Hurwitz.
std::shared_ptr<const DriftFamily> make_linear_family(FamilyMeta meta);

// 1-D mu_bar(x,a) = -c x + theta1 * tanh(theta2 * x) + b a, contraction kept by
// |theta1 * theta2| < c on the box.
std::shared_ptr<const DriftFamily> make_tanh_family(FamilyMeta meta, double damping, double gain);

std::shared_ptr<const Reward> make_constant_reward(double value);
// exp(-|x|^2) - w * min(|a|^2, 1)
std::shared_ptr<const Reward> make_gauss_bump_reward(double action_weight);

// One model instance: a parameter point with the maps and certificate it
// induces.  Immutable after construction; safe to share across threads.
class ModelSpec {
public:
    ModelSpec(std::shared_ptr<const DriftFamily> family, std::shared_ptr<const Reward> reward,
              Vec theta, Mat sigma_bar, double epsilon);

    const DriftFamily& family() const { return *family_; }
    std::shared_ptr<const DriftFamily> family_ptr() const { return family_; }
    const Reward& reward() const { return *reward_; }
    const FamilyMeta& meta() const { return family_->meta(); }
    const std::string& family_id() const { return family_->id(); }
    const Vec& theta() const { return theta_; }
    const Mat& sigma_bar() const { return sigma_bar_; }
    double sigma_bar_op() const { return sigma_op_; }
    double epsilon() const { return epsilon_; }
    int d() const { return meta().d; }
    int d_action() const { return meta().d_action; }
    const std::optional<LyapunovSpec>& lyapunov() const { return lyap_; }

    // Rescaled maps; non-finite output raises a model fault.
    void drift_bar(const Vec& x, const Vec& a, Vec& out) const;
    Vec drift_bar(const Vec& x, const Vec& a) const;
    double reward_bar(const Vec& x, const Vec& a) const;

    ModelSpec with_theta(Vec theta) const;
    ModelSpec with_epsilon(double epsilon) const;

private:
    std::shared_ptr<const DriftFamily> family_;
    std::shared_ptr<const Reward> reward_;
    Vec theta_;
    Mat sigma_bar_;
    double epsilon_;
    double sigma_op_;
    std::optional<LyapunovSpec> lyap_;
};

}  // namespace ofudiff
