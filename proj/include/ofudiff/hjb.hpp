#pragma once

#include "ofudiff/grid.hpp"
#include "ofudiff/model.hpp"

#include <functional>

namespace ofudiff {

struct SolverOptions {
    double tol = 1e-6;      // sup-norm Bellman residual target (gain units)
    int max_iters = 400000; // value-iteration sweeps / policy iterations
    bool policy_iteration = true;  // exact policy evaluation between sweeps
    int gauss_hermite_order = 11;  // jump expectation nodes per axis
};

// Ergodic HJB for the controlled diffusion via the upwind Markov-chain
// approximation (centered diffusion, upwind drift, reflecting boundary),
// solved by relative value iteration anchored at the origin; with
// `policy_iteration` the iterate is accelerated by exact policy evaluation.
// Requires a diagonal diffusion matrix in d = 2.
HjbSolution solve_diffusive(const ModelSpec& model, const Grid& grid,
                            const SolverOptions& opts = {});

// Ergodic HJB for the jump recursion: relative value iteration on
//   (T w)(x) = max_a { eps r(x,a) + E[w(x + eps mu(x,a) + sqrt(eps) S xi)] }
// with the expectation by Gauss-Hermite quadrature and w extended linearly
// beyond the grid.  Refuses when quadrature points leave [-3R, 3R]^d.
HjbSolution solve_jump(const ModelSpec& model, const Grid& grid, const SolverOptions& opts = {});

// Gain of a fixed stationary policy under the jump dynamics (same iteration
// without the maximisation).  The policy is evaluated at node coordinates.
HjbSolution evaluate_policy_jump(const ModelSpec& model, const Grid& grid,
                                 const std::function<Vec(const Vec&)>& policy,
                                 const SolverOptions& opts = {});

}  // namespace ofudiff
