#include "ofudiff/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace ofudiff {

namespace {

GaussHermite build(int k) {
    require(k >= 1, "GaussHermite: order >= 1");
    // Jacobi matrix of the Hermite recurrence: off-diagonal sqrt(j/2).
    Mat jac = Mat::Zero(k, k);
    for (int j = 1; j < k; ++j) {
        const double b = std::sqrt(j / 2.0);
        jac(j, j - 1) = b;
        jac(j - 1, j) = b;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(jac);
    require(es.info() == Eigen::Success, "GaussHermite: eigensolver failure");
    GaussHermite gh;
    gh.nodes = es.eigenvalues();
    gh.weights.resize(k);
    const double mu0 = std::sqrt(std::numbers::pi);  // integral of exp(-x^2)
    for (int j = 0; j < k; ++j) {
        const double v0 = es.eigenvectors()(0, j);
        gh.weights[j] = mu0 * v0 * v0;
    }
    return gh;
}

}  // namespace

const GaussHermite& GaussHermite::order(int k) {
    static std::map<int, GaussHermite> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, build(k)).first;
    return it->second;
}

Vec GaussHermite::normal_points() const { return std::numbers::sqrt2 * nodes; }

Vec GaussHermite::normal_weights() const { return weights / std::sqrt(std::numbers::pi); }

}  // namespace ofudiff
