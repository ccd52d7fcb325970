#include "ofudiff/grid.hpp"

#include <cmath>

namespace ofudiff {

std::size_t Grid::n_nodes() const {
    std::size_t n = static_cast<std::size_t>(n_axis);
    return d == 1 ? n : n * n;
}

std::size_t Grid::origin_index() const {
    const std::size_t mid = static_cast<std::size_t>(n_axis / 2);
    return d == 1 ? mid : mid * n_axis + mid;
}

Vec Grid::coord(std::size_t idx) const {
    Vec x(d);
    if (d == 1) {
        x[0] = axis_coord(static_cast<int>(idx));
    } else {
        x[0] = axis_coord(static_cast<int>(idx % n_axis));
        x[1] = axis_coord(static_cast<int>(idx / n_axis));
    }
    return x;
}

std::size_t Grid::nearest(const Vec& x, bool* clamped) const {
    if (clamped != nullptr) *clamped = false;
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int ax = 0; ax < d; ++ax) {
        double v = x[ax];
        if (v < -radius || v > radius) {
            if (clamped != nullptr) *clamped = true;
            v = std::clamp(v, -radius, radius);
        }
        int i = static_cast<int>(std::lround((v + radius) / spacing));
        i = std::clamp(i, 0, n_axis - 1);
        idx += stride * static_cast<std::size_t>(i);
        stride *= static_cast<std::size_t>(n_axis);
    }
    return idx;
}

namespace {

// Per-axis two-point stencil: value = c0 * f(i0) + c1 * f(i0 + 1) reproduces
// linear interpolation inside the box and the one-sided linear extension
// beyond it (coefficients outside [0, 1] extrapolate with the edge slope).
struct AxisStencil {
    int i0;
    double c0, c1;
};

AxisStencil axis_stencil(double v, double radius, double spacing, int n_axis) {
    const double t = (v + radius) / spacing;
    int i0 = static_cast<int>(std::floor(t));
    i0 = std::clamp(i0, 0, n_axis - 2);
    const double f = t - i0;
    return {i0, 1.0 - f, f};
}

}  // namespace

double Grid::interpolate(const Vec& values, const Vec& x) const {
    if (d == 1) {
        const AxisStencil s = axis_stencil(x[0], radius, spacing, n_axis);
        return s.c0 * values[s.i0] + s.c1 * values[s.i0 + 1];
    }
    const AxisStencil sx = axis_stencil(x[0], radius, spacing, n_axis);
    const AxisStencil sy = axis_stencil(x[1], radius, spacing, n_axis);
    auto at = [&](int i, int j) { return values[static_cast<std::size_t>(j) * n_axis + i]; };
    return sy.c0 * (sx.c0 * at(sx.i0, sy.i0) + sx.c1 * at(sx.i0 + 1, sy.i0)) +
           sy.c1 * (sx.c0 * at(sx.i0, sy.i0 + 1) + sx.c1 * at(sx.i0 + 1, sy.i0 + 1));
}

void Grid::validate() const {
    require(d == 1 || d == 2, "Grid: d must be 1 or 2");
    require(radius > 0.0 && spacing > 0.0, "Grid: positive radius and spacing");
    require(n_axis >= 3 && n_axis % 2 == 1, "Grid: odd node count >= 3 per axis");
    require(!actions.empty(), "Grid: action grid must be nonempty");
    require(std::abs(axis_coord(n_axis - 1) - radius) < 1e-9, "Grid: spacing/radius mismatch");
}

Grid make_grid(int d, double radius, double spacing, const FamilyMeta& meta, int actions_per_axis) {
    require(actions_per_axis >= 1, "make_grid: actions_per_axis >= 1");
    Grid g;
    g.d = d;
    // Round to an odd node count containing the origin exactly.
    int half = std::max(1, static_cast<int>(std::ceil(radius / spacing)));
    g.n_axis = 2 * half + 1;
    g.spacing = spacing;
    g.radius = half * spacing;

    const int da = meta.d_action;
    std::vector<std::vector<double>> axis(da);
    for (int i = 0; i < da; ++i) {
        for (int k = 0; k < actions_per_axis; ++k) {
            const double f = actions_per_axis == 1 ? 0.5 : static_cast<double>(k) / (actions_per_axis - 1);
            axis[i].push_back(meta.action_lo[i] + f * (meta.action_hi[i] - meta.action_lo[i]));
        }
    }
    std::vector<int> idx(da, 0);
    const long total = static_cast<long>(std::pow(actions_per_axis, da));
    for (long k = 0; k < total; ++k) {
        Vec a(da);
        for (int i = 0; i < da; ++i) a[i] = axis[i][idx[i]];
        g.actions.push_back(std::move(a));
        for (int i = da - 1; i >= 0; --i) {  // last axis fastest: lexicographic order
            if (++idx[i] < actions_per_axis) break;
            idx[i] = 0;
        }
    }
    g.validate();
    return g;
}

}  // namespace ofudiff
