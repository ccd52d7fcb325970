#include "ofudiff/hjb.hpp"

#include "ofudiff/quadrature.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ofudiff {
namespace {

// The quadrature evaluation of w(x) with linear extension is always a
// two-point (1-D) or four-point (2-D) stencil; bake it per (node, action,
// quad point) so a sweep is a handful of fused multiply-adds per term.
struct QuadTerm {
    int idx[4];
    double coeff[4];
};

struct JumpOperator {
    int n_actions = 0;
    int n_quad = 0;  // K^d
    std::vector<QuadTerm> terms;  // node-major, action, quad point
    std::vector<double> reward;   // eps * r_bar, node-major action-minor
    double eps = 0.0;

    double apply(const Vec& w, std::size_t node, int action) const {
        const std::size_t base = (node * n_actions + action) * n_quad;
        double acc = reward[node * n_actions + action];
        for (int k = 0; k < n_quad; ++k) {
            const QuadTerm& t = terms[base + k];
            double v = 0.0;
            for (int j = 0; j < 4 && t.idx[j] >= 0; ++j) v += t.coeff[j] * w[t.idx[j]];
            acc += v;
        }
        return acc;
    }
};

struct AxisStencil {
    int i0;
    double c0, c1;
};

AxisStencil axis_stencil(double v, const Grid& g) {
    const double t = (v + g.radius) / g.spacing;
    int i0 = static_cast<int>(std::floor(t));
    i0 = std::clamp(i0, 0, g.n_axis - 2);
    const double f = t - i0;
    return {i0, 1.0 - f, f};
}

JumpOperator build_operator(const ModelSpec& model, const Grid& grid,
                            const std::vector<Vec>& actions_per_node, const SolverOptions& opts) {
    const int d = grid.d;
    const double eps = model.epsilon();
    const double seps = std::sqrt(eps);
    const GaussHermite& gh = GaussHermite::order(opts.gauss_hermite_order);
    const Vec pts = gh.normal_points();
    const Vec wts = gh.normal_weights();
    const int k1 = static_cast<int>(pts.size());
    const int nq = d == 1 ? k1 : k1 * k1;

    // Quadrature displacements sqrt(eps) * Sigma_bar * xi_k and their weights.
    std::vector<Vec> disp(nq, Vec(d));
    std::vector<double> qw(nq);
    for (int k = 0; k < nq; ++k) {
        Vec xi(d);
        if (d == 1) {
            xi[0] = pts[k];
            qw[k] = wts[k];
        } else {
            xi[0] = pts[k % k1];
            xi[1] = pts[k / k1];
            qw[k] = wts[k % k1] * wts[k / k1];
        }
        disp[k] = seps * (model.sigma_bar() * xi);
    }

    const bool per_node_actions = !actions_per_node.empty();
    JumpOperator op;
    op.eps = eps;
    op.n_actions = per_node_actions ? 1 : static_cast<int>(grid.actions.size());
    op.n_quad = nq;
    op.terms.resize(grid.n_nodes() * op.n_actions * nq);
    op.reward.resize(grid.n_nodes() * op.n_actions);

    const double reach = 3.0 * grid.radius;
    Vec mu(d);
    for (std::size_t node = 0; node < grid.n_nodes(); ++node) {
        const Vec x = grid.coord(node);
        for (int ai = 0; ai < op.n_actions; ++ai) {
            const Vec& a = per_node_actions ? actions_per_node[node] : grid.actions[ai];
            model.drift_bar(x, a, mu);
            op.reward[node * op.n_actions + ai] = eps * model.reward_bar(x, a);
            const Vec mean = x + eps * mu;
            for (int k = 0; k < nq; ++k) {
                const Vec y = mean + disp[k];
                for (int ax = 0; ax < d; ++ax)
                    if (std::abs(y[ax]) > reach)
                        throw Error("solve_jump: quadrature mass outside 3R (grid too small)");
                QuadTerm& t = op.terms[(node * op.n_actions + ai) * nq + k];
                if (d == 1) {
                    const AxisStencil s = axis_stencil(y[0], grid);
                    t.idx[0] = s.i0;
                    t.coeff[0] = qw[k] * s.c0;
                    t.idx[1] = s.i0 + 1;
                    t.coeff[1] = qw[k] * s.c1;
                    t.idx[2] = t.idx[3] = -1;
                } else {
                    const AxisStencil sx = axis_stencil(y[0], grid);
                    const AxisStencil sy = axis_stencil(y[1], grid);
                    t.idx[0] = sy.i0 * grid.n_axis + sx.i0;
                    t.coeff[0] = qw[k] * sy.c0 * sx.c0;
                    t.idx[1] = sy.i0 * grid.n_axis + sx.i0 + 1;
                    t.coeff[1] = qw[k] * sy.c0 * sx.c1;
                    t.idx[2] = (sy.i0 + 1) * grid.n_axis + sx.i0;
                    t.coeff[2] = qw[k] * sy.c1 * sx.c0;
                    t.idx[3] = (sy.i0 + 1) * grid.n_axis + sx.i0 + 1;
                    t.coeff[3] = qw[k] * sy.c1 * sx.c1;
                }
            }
        }
    }
    return op;
}

HjbSolution iterate_jump(const ModelSpec& model, const Grid& grid, const JumpOperator& op,
                         bool maximize, const SolverOptions& opts) {
    const std::size_t n = grid.n_nodes();
    const std::size_t anchor = grid.origin_index();
    const double eps = model.epsilon();

    HjbSolution sol;
    sol.grid = grid;
    sol.kind = HjbKind::jump;
    sol.epsilon = eps;
    sol.w = Vec::Zero(n);
    sol.policy.assign(n, maximize ? 0 : -1);

    Vec tw(n);
    double rho = 0.0;
    for (int it = 0; it < opts.max_iters; ++it) {
        sol.iterations = it + 1;
        for (std::size_t node = 0; node < n; ++node) {
            if (maximize) {
                double best = -std::numeric_limits<double>::infinity();
                for (int ai = 0; ai < op.n_actions; ++ai)
                    best = std::max(best, op.apply(sol.w, node, ai));
                tw[node] = best;
            } else {
                tw[node] = op.apply(sol.w, node, 0);
            }
        }
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < n; ++i) {
            const double dphi = tw[i] - sol.w[i];
            lo = std::min(lo, dphi);
            hi = std::max(hi, dphi);
        }
        rho = 0.5 * (lo + hi) / eps;
        const double anchor_val = tw[anchor];
        for (std::size_t i = 0; i < n; ++i) sol.w[i] = tw[i] - anchor_val;
        if ((hi - lo) / eps <= opts.tol) {
            sol.converged = true;
            break;
        }
        if (it % 16 == 0) {
            sol.residual_history.push_back((hi - lo) / eps);
            if (sol.residual_history.size() > 512)
                sol.residual_history.erase(sol.residual_history.begin());
        }
    }
    sol.rho = rho;

    // Final residual and greedy policy at the converged iterate.
    double res = 0.0;
    for (std::size_t node = 0; node < n; ++node) {
        double best = -std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int ai = 0; ai < op.n_actions; ++ai) {
            const double q = op.apply(sol.w, node, ai);
            if (q > best) {
                best = q;
                best_a = ai;
            }
        }
        if (maximize) sol.policy[node] = best_a;
        const double h = maximize ? best : op.apply(sol.w, node, 0);
        res = std::max(res, std::abs(h - sol.w[node] - eps * rho) / eps);
    }
    sol.residual = res;

    double lip = 0.0;
    for (std::size_t node = 0; node < n; ++node) {
        const int i = static_cast<int>(grid.d == 1 ? node : node % grid.n_axis);
        if (i + 1 < grid.n_axis)
            lip = std::max(lip, std::abs(sol.w[node + 1] - sol.w[node]) / grid.spacing);
        if (grid.d == 2 && node + grid.n_axis < n)
            lip = std::max(lip, std::abs(sol.w[node + grid.n_axis] - sol.w[node]) / grid.spacing);
    }
    sol.lipschitz_estimate = lip;
    return sol;
}

}  // namespace

HjbSolution solve_jump(const ModelSpec& model, const Grid& grid, const SolverOptions& opts) {
    grid.validate();
    const JumpOperator op = build_operator(model, grid, {}, opts);
    return iterate_jump(model, grid, op, /*maximize=*/true, opts);
}

HjbSolution evaluate_policy_jump(const ModelSpec& model, const Grid& grid,
                                 const std::function<Vec(const Vec&)>& policy,
                                 const SolverOptions& opts) {
    grid.validate();
    std::vector<Vec> actions(grid.n_nodes());
    for (std::size_t node = 0; node < grid.n_nodes(); ++node)
        actions[node] = model.meta().clamp_action(policy(grid.coord(node)));
    const JumpOperator op = build_operator(model, grid, actions, opts);
    return iterate_jump(model, grid, op, /*maximize=*/false, opts);
}

}  // namespace ofudiff
