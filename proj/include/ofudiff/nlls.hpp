#pragma once

#include "ofudiff/common.hpp"

namespace ofudiff {

class DriftFamily;
struct DesignLog;

struct NllsOptions {
    int max_iters = 80;
    double grad_tol = 1e-11;
    double step_tol = 1e-13;
    int starts_per_dim = 3;  // coarse seed grid for non-convex families
    int max_starts = 81;
};

struct NllsResult {
    Vec theta;
    double objective = 0.0;
    bool converged = true;
    int iterations = 0;
};

double nlls_objective(const DesignLog& design, const DriftFamily& family, double epsilon,
                      const Vec& theta);

// Box-projected damped Gauss-Newton, multi-started from a coarse theta grid
// (single start for theta-linear families, where the problem is convex) plus
// an optional warm start.  A final grid-dominance pass restarts from any seed
// that still beats the iterate; ties keep the lowest seed index.
NllsResult fit_nlls(const DesignLog& design, const DriftFamily& family, double epsilon,
                    const NllsOptions& opts = {}, const Vec* warm_start = nullptr);

}  // namespace ofudiff
