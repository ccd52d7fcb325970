#pragma once

#include "ofudiff/common.hpp"
#include "ofudiff/model.hpp"

#include <vector>

namespace ofudiff {

// Uniform node grid on [-R, R]^d (d in {1, 2}) with an odd node count per
// axis so the origin is a node, plus a finite action grid.
struct Grid {
    int d = 1;
    double radius = 1.0;
    double spacing = 0.1;
    int n_axis = 21;  // nodes per axis, odd
    std::vector<Vec> actions;

    std::size_t n_nodes() const;
    std::size_t origin_index() const;
    Vec coord(std::size_t idx) const;
    double axis_coord(int i) const { return -radius + i * spacing; }
    // Nearest node, clamped into the box; sets *clamped when x was outside.
    std::size_t nearest(const Vec& x, bool* clamped = nullptr) const;

    // Multilinear interpolation of node values, extended linearly beyond the
    // box with the one-sided boundary gradient.
    double interpolate(const Vec& values, const Vec& x) const;

    void validate() const;
};

// Action grid: `actions_per_axis` equispaced values per action axis, tensor
// product in lexicographic order (first axis fastest).
Grid make_grid(int d, double radius, double spacing, const FamilyMeta& meta,
               int actions_per_axis = 33);

enum class HjbKind { diffusive, jump };

struct HjbSolution {
    Grid grid;
    HjbKind kind = HjbKind::diffusive;
    double epsilon = 0.0;  // jump solutions only
    Vec w;                 // relative value per node, w(origin) = 0
    double rho = 0.0;
    std::vector<int> policy;  // argmax action index per node (-1 when external)
    double residual = 0.0;
    double lipschitz_estimate = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // tail kept for diagnostics

    double w_at(const Vec& x) const { return grid.interpolate(w, x); }
};

}  // namespace ofudiff
