#include "ofudiff/nlls.hpp"

#include "ofudiff/confidence.hpp"
#include "ofudiff/model.hpp"

#include <cmath>
#include <limits>

namespace ofudiff {

double nlls_objective(const DesignLog& design, const DriftFamily& family, double epsilon,
                      const Vec& theta) {
    double f = 0.0;
    Vec mu(family.meta().d);
    for (std::size_t i = 0; i < design.size(); ++i) {
        family.eval(theta, design.x[i], design.a[i], mu);
        f += (design.dx[i] - epsilon * mu).squaredNorm();
    }
    return f;
}

namespace {

Vec project_box(const FamilyMeta& m, Vec theta) {
    for (int i = 0; i < m.d_theta; ++i) theta[i] = std::clamp(theta[i], m.theta_lo[i], m.theta_hi[i]);
    return theta;
}

// Damped Gauss-Newton with box projection from one seed.
NllsResult descend(const DesignLog& design, const DriftFamily& family, double epsilon,
                   const NllsOptions& opts, Vec theta0) {
    const FamilyMeta& m = family.meta();
    NllsResult res;
    res.theta = project_box(m, std::move(theta0));
    res.objective = nlls_objective(design, family, epsilon, res.theta);
    res.converged = false;

    double lambda = 1e-8;
    Mat jac(m.d, m.d_theta);
    Vec mu(m.d);
    for (int it = 0; it < opts.max_iters; ++it) {
        res.iterations = it + 1;
        Mat jtj = Mat::Zero(m.d_theta, m.d_theta);
        Vec jtr = Vec::Zero(m.d_theta);
        for (std::size_t i = 0; i < design.size(); ++i) {
            family.eval(res.theta, design.x[i], design.a[i], mu);
            family.jacobian_theta(res.theta, design.x[i], design.a[i], jac);
            const Vec r = design.dx[i] - epsilon * mu;
            jtj.noalias() += (epsilon * epsilon) * (jac.transpose() * jac);
            jtr.noalias() += epsilon * (jac.transpose() * r);
        }
        if (jtr.norm() <= opts.grad_tol * (1.0 + res.objective)) {
            res.converged = true;
            break;
        }
        bool stepped = false;
        for (int tries = 0; tries < 12; ++tries) {
            Mat damped = jtj + lambda * Mat::Identity(m.d_theta, m.d_theta);
            Vec delta = damped.ldlt().solve(jtr);
            Vec cand = project_box(m, res.theta + delta);
            const double f = nlls_objective(design, family, epsilon, cand);
            if (f < res.objective) {
                if ((cand - res.theta).norm() <= opts.step_tol * (1.0 + res.theta.norm())) {
                    res.theta = cand;
                    res.objective = f;
                    res.converged = true;
                    return res;
                }
                res.theta = cand;
                res.objective = f;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) {
            // No descent direction at damping limit: stationary within tolerance.
            res.converged = true;
            break;
        }
    }
    return res;
}

std::vector<Vec> seed_grid(const FamilyMeta& m, int per_dim, int max_starts) {
    std::vector<Vec> seeds;
    const int dt = m.d_theta;
    long total = 1;
    for (int i = 0; i < dt; ++i) {
        total *= per_dim;
        if (total > 4096) break;
    }
    if (total > 4096) {
        seeds.push_back(project_box(m, (m.theta_lo + m.theta_hi) / 2.0));
        return seeds;
    }
    std::vector<int> idx(dt, 0);
    for (long k = 0; k < total; ++k) {
        Vec t(dt);
        for (int i = 0; i < dt; ++i) {
            const double frac = per_dim == 1 ? 0.5 : (idx[i] + 0.5) / per_dim;
            t[i] = m.theta_lo[i] + frac * (m.theta_hi[i] - m.theta_lo[i]);
        }
        seeds.push_back(std::move(t));
        for (int i = 0; i < dt; ++i) {
            if (++idx[i] < per_dim) break;
            idx[i] = 0;
        }
    }
    if (static_cast<int>(seeds.size()) > max_starts) {
        // Keep an evenly strided subset, preserving order.
        std::vector<Vec> kept;
        const double stride = static_cast<double>(seeds.size()) / max_starts;
        for (int i = 0; i < max_starts; ++i)
            kept.push_back(seeds[static_cast<std::size_t>(i * stride)]);
        seeds = std::move(kept);
    }
    return seeds;
}

}  // namespace

NllsResult fit_nlls(const DesignLog& design, const DriftFamily& family, double epsilon,
                    const NllsOptions& opts, const Vec* warm_start) {
    require(design.size() >= 1, "fit_nlls: empty design log");
    const FamilyMeta& m = family.meta();

    std::vector<Vec> seeds;
    if (warm_start != nullptr && warm_start->size() == m.d_theta)
        seeds.push_back(project_box(m, *warm_start));
    if (family.linear_in_theta()) {
        if (seeds.empty()) seeds.push_back((m.theta_lo + m.theta_hi) / 2.0);
    } else {
        auto grid = seed_grid(m, opts.starts_per_dim, opts.max_starts);
        seeds.insert(seeds.end(), grid.begin(), grid.end());
    }

    NllsResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (const Vec& s : seeds) {
        NllsResult r = descend(design, family, epsilon, opts, s);
        if (r.objective < best.objective) best = r;  // strict: lowest seed index wins ties
    }

    // Grid dominance: the returned point must beat every coarse grid seed.
    if (!family.linear_in_theta()) {
        for (const Vec& s : seed_grid(m, opts.starts_per_dim, opts.max_starts)) {
            if (nlls_objective(design, family, epsilon, s) < best.objective) {
                NllsResult r = descend(design, family, epsilon, opts, s);
                if (r.objective < best.objective) best = r;
            }
        }
    }
    return best;
}

}  // namespace ofudiff
