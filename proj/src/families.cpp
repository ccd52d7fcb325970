#include "ofudiff/model.hpp"

#include <cmath>
#include <utility>

namespace ofudiff {
namespace {

void check_meta(const FamilyMeta& m) {
    require(m.d >= 1 && m.d_action >= 1 && m.d_theta >= 1, "FamilyMeta: bad dimensions");
    require(m.theta_lo.size() == m.d_theta && m.theta_hi.size() == m.d_theta,
            "FamilyMeta: theta box size mismatch");
    require(m.action_lo.size() == m.d_action && m.action_hi.size() == m.d_action,
            "FamilyMeta: action box size mismatch");
    require((m.theta_hi - m.theta_lo).minCoeff() >= 0.0, "FamilyMeta: empty theta box");
    require((m.action_hi - m.action_lo).minCoeff() >= 0.0, "FamilyMeta: empty action box");
    require(m.lipschitz_L0 > 0.0, "FamilyMeta: L0 must be positive");
}

class LinearFamily final : public DriftFamily {
public:
    explicit LinearFamily(FamilyMeta meta) : meta_(std::move(meta)) {
        check_meta(meta_);
        require(meta_.d_theta == meta_.d * meta_.d + meta_.d * meta_.d_action,
                "linear family: d_theta must equal d*d + d*d_action");
    }

    const std::string& id() const override { return id_; }
    const FamilyMeta& meta() const override { return meta_; }
    bool linear_in_theta() const override { return true; }

    // theta = (vec A, vec B), column-major.
    Mat a_of(const Vec& theta) const {
        return Eigen::Map<const Mat>(theta.data(), meta_.d, meta_.d);
    }
    Mat b_of(const Vec& theta) const {
        return Eigen::Map<const Mat>(theta.data() + meta_.d * meta_.d, meta_.d, meta_.d_action);
    }

    void eval(const Vec& theta, const Vec& x, const Vec& a, Vec& out) const override {
        out.noalias() = a_of(theta) * x;
        out.noalias() += b_of(theta) * a;
    }

    void jacobian_theta(const Vec& theta, const Vec& x, const Vec& a, Mat& jac) const override {
        (void)theta;
        const int d = meta_.d;
        jac.setZero(d, meta_.d_theta);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) jac(i, j * d + i) = x[j];
        const int off = d * d;
        for (int j = 0; j < meta_.d_action; ++j)
            for (int i = 0; i < d; ++i) jac(i, off + j * d + i) = a[j];
    }

    bool theta_admissible(const Vec& theta) const override {
        return meta_.theta_in_box(theta) && is_hurwitz(a_of(theta));
    }

    LyapunovSpec lyapunov(const Vec& theta) const override { return solve_care(a_of(theta)); }

private:
    FamilyMeta meta_;
    std::string id_ = "linear";
};

class TanhFamily final : public DriftFamily {
public:
    TanhFamily(FamilyMeta meta, double damping, double gain)
        : meta_(std::move(meta)), c_(damping), b_(gain) {
        check_meta(meta_);
        require(meta_.d == 1 && meta_.d_action == 1 && meta_.d_theta == 2,
                "tanh family: d = d_action = 1, theta = (theta1, theta2)");
        require(c_ > 0.0 && c_ <= 1.0, "tanh family: damping must lie in (0, 1]");
        // Contraction margin over the whole box.
        const double m = std::max(std::abs(meta_.theta_lo[0]), std::abs(meta_.theta_hi[0])) *
                         std::max(std::abs(meta_.theta_lo[1]), std::abs(meta_.theta_hi[1]));
        require(m < c_, "tanh family: box must keep |theta1*theta2| < damping");
    }

    const std::string& id() const override { return id_; }
    const FamilyMeta& meta() const override { return meta_; }
    bool linear_in_theta() const override { return false; }
    double damping() const { return c_; }
    double gain() const { return b_; }

    void eval(const Vec& theta, const Vec& x, const Vec& a, Vec& out) const override {
        out.resize(1);
        out[0] = -c_ * x[0] + theta[0] * std::tanh(theta[1] * x[0]) + b_ * a[0];
    }

    void jacobian_theta(const Vec& theta, const Vec& x, const Vec& a, Mat& jac) const override {
        (void)a;
        jac.resize(1, 2);
        const double t = std::tanh(theta[1] * x[0]);
        jac(0, 0) = t;
        jac(0, 1) = theta[0] * x[0] * (1.0 - t * t);
    }

    bool theta_admissible(const Vec& theta) const override {
        return meta_.theta_in_box(theta) && std::abs(theta[0] * theta[1]) < c_;
    }

    LyapunovSpec lyapunov(const Vec& theta) const override {
        // Same scaling as the 1-D CARE with A = -c: P = 1/(2c).  The drift's
        // x-derivative lies in [-(c + |t1 t2|), -(c - |t1 t2|)], so the
        // contraction rate is c - |t1 t2| for any eps with eps*c <= 1.
        LyapunovSpec s;
        s.metric = Mat::Constant(1, 1, 1.0 / (2.0 * c_));
        const double sp = std::sqrt(s.metric(0, 0));
        s.ell_v = s.L_v = s.M_v = sp;
        s.M_v_prime = 0.0;
        s.c_v = c_ - std::abs(theta[0] * theta[1]);
        require(s.c_v > 0.0, "tanh family: contraction rate not positive at this theta");
        return s;
    }

private:
    FamilyMeta meta_;
    double c_, b_;
    std::string id_ = "tanh";
};

class ConstantReward final : public Reward {
public:
    explicit ConstantReward(double v) : v_(v) {}
    const std::string& id() const override { return id_; }
    double eval(const Vec&, const Vec&) const override { return v_; }
    double bound() const override { return std::abs(v_); }

private:
    double v_;
    std::string id_ = "constant";
};

class GaussBumpReward final : public Reward {
public:
    explicit GaussBumpReward(double w) : w_(w) { require(w_ >= 0.0, "gauss_bump: weight >= 0"); }
    const std::string& id() const override { return id_; }
    double eval(const Vec& x, const Vec& a) const override {
        return std::exp(-x.squaredNorm()) - w_ * std::min(a.squaredNorm(), 1.0);
    }
    double bound() const override { return std::max(1.0, w_); }

private:
    double w_;
    std::string id_ = "gauss_bump";
};

}  // namespace

std::shared_ptr<const DriftFamily> make_linear_family(FamilyMeta meta) {
    return std::make_shared<LinearFamily>(std::move(meta));
}

std::shared_ptr<const DriftFamily> make_tanh_family(FamilyMeta meta, double damping, double gain) {
    return std::make_shared<TanhFamily>(std::move(meta), damping, gain);
}

std::shared_ptr<const Reward> make_constant_reward(double value) {
    return std::make_shared<ConstantReward>(value);
}

std::shared_ptr<const Reward> make_gauss_bump_reward(double action_weight) {
    return std::make_shared<GaussBumpReward>(action_weight);
}

}  // namespace ofudiff
