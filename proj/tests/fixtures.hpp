#pragma once

#include "ofudiff/config.hpp"
#include "ofudiff/model.hpp"

#include <memory>

namespace ofudiff::testing {

// 1-D controlled linear benchmark: mu_bar = A x + B a, gaussian bump reward
// with a small action penalty, unit noise.
inline ModelSpec bench_linear_1d(double eps, double a_true = -0.7, double b_true = 1.0) {
    FamilyMeta meta;
    meta.d = 1;
    meta.d_action = 1;
    meta.d_theta = 2;
    meta.theta_lo = (Vec(2) << -1.5, 0.5).finished();
    meta.theta_hi = (Vec(2) << -0.3, 1.5).finished();
    meta.action_lo = Vec::Constant(1, -1.0);
    meta.action_hi = Vec::Constant(1, 1.0);
    meta.lipschitz_L0 = 5.0;
    auto family = make_linear_family(meta);
    auto reward = make_gauss_bump_reward(0.05);
    Vec theta(2);
    theta << a_true, b_true;
    return ModelSpec(family, reward, theta, Mat::Identity(1, 1), eps);
}

// 2-D linear instance with diagonal noise (certification tests).
inline ModelSpec bench_linear_2d(double eps) {
    FamilyMeta meta;
    meta.d = 2;
    meta.d_action = 1;
    meta.d_theta = 6;
    meta.theta_lo = (Vec(6) << -2.0, -0.5, -0.5, -2.0, -1.0, -1.0).finished();
    meta.theta_hi = (Vec(6) << -0.2, 0.5, 0.5, -0.2, 1.5, 1.5).finished();
    meta.action_lo = Vec::Constant(1, -1.0);
    meta.action_hi = Vec::Constant(1, 1.0);
    meta.lipschitz_L0 = 7.0;
    auto family = make_linear_family(meta);
    auto reward = make_gauss_bump_reward(0.05);
    Vec theta(6);
    // A = [[-1, 0], [0.3, -1.2]] column-major, B = [1, 0.5]
    theta << -1.0, 0.3, 0.0, -1.2, 1.0, 0.5;
    Mat sigma = Mat::Zero(2, 2);
    sigma(0, 0) = 1.0;
    sigma(1, 1) = 0.8;
    return ModelSpec(family, reward, theta, sigma, eps);
}

// 1-D tanh benchmark (genuinely non-linear least squares).
inline ModelSpec bench_tanh(double eps, double t1 = 0.3, double t2 = 0.8) {
    FamilyMeta meta;
    meta.d = 1;
    meta.d_action = 1;
    meta.d_theta = 2;
    meta.theta_lo = (Vec(2) << -0.45, 0.2).finished();
    meta.theta_hi = (Vec(2) << 0.45, 1.0).finished();
    meta.action_lo = Vec::Constant(1, -1.0);
    meta.action_hi = Vec::Constant(1, 1.0);
    meta.lipschitz_L0 = 5.0;
    auto family = make_tanh_family(meta, 1.0, 1.0);
    auto reward = make_gauss_bump_reward(0.05);
    Vec theta(2);
    theta << t1, t2;
    return ModelSpec(family, reward, theta, Mat::Identity(1, 1) * 0.7, eps);
}

// Single-action, uncontrolled 1-D instance (planner oracles).
inline ModelSpec bench_ou_uncontrolled(double eps, double a_true = -1.0,
                                       double reward_const = 0.0) {
    FamilyMeta meta;
    meta.d = 1;
    meta.d_action = 1;
    meta.d_theta = 2;
    meta.theta_lo = (Vec(2) << -1.5, 0.0).finished();
    meta.theta_hi = (Vec(2) << -0.5, 0.0).finished();
    meta.action_lo = Vec::Zero(1);
    meta.action_hi = Vec::Zero(1);
    meta.lipschitz_L0 = 4.0;
    auto family = make_linear_family(meta);
    auto reward = reward_const != 0.0
                      ? make_constant_reward(reward_const)
                      : std::static_pointer_cast<const Reward>(make_gauss_bump_reward(0.0));
    Vec theta(2);
    theta << a_true, 0.0;
    return ModelSpec(family, reward, theta, Mat::Identity(1, 1), eps);
}

}  // namespace ofudiff::testing
