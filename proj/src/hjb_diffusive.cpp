#include "ofudiff/hjb.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <vector>

namespace ofudiff {
namespace {

// Per-node, per-action outgoing rates of the approximating chain.
struct Rates {
    // rate[axis][0] -> x - h e_axis, rate[axis][1] -> x + h e_axis
    double rate[2][2] = {{0, 0}, {0, 0}};
    double total = 0.0;
    double reward = 0.0;
};

struct Chain {
    std::vector<Rates> rates;  // node-major, action-minor
    double lambda = 0.0;       // uniformization rate
    int n_actions = 0;

    const Rates& at(std::size_t node, int action) const { return rates[node * n_actions + action]; }
};

Chain build_chain(const ModelSpec& model, const Grid& grid) {
    const int d = grid.d;
    Mat cov = model.sigma_bar() * model.sigma_bar().transpose();
    if (d == 2)
        require(std::abs(cov(0, 1)) <= 1e-12,
                "solve_diffusive: d=2 requires a diagonal diffusion matrix");
    const double h = grid.spacing;

    Chain chain;
    chain.n_actions = static_cast<int>(grid.actions.size());
    chain.rates.resize(grid.n_nodes() * grid.actions.size());
    double max_rate = 0.0;
    Vec mu(d);
    for (std::size_t node = 0; node < grid.n_nodes(); ++node) {
        const Vec x = grid.coord(node);
        for (int ai = 0; ai < chain.n_actions; ++ai) {
            Rates& r = chain.rates[node * chain.n_actions + ai];
            model.drift_bar(x, grid.actions[ai], mu);
            r.reward = model.reward_bar(x, grid.actions[ai]);
            for (int ax = 0; ax < d; ++ax) {
                const double diff = 0.5 * cov(ax, ax);
                double down = (diff + h * std::max(-mu[ax], 0.0)) / (h * h);
                double up = (diff + h * std::max(mu[ax], 0.0)) / (h * h);
                // Reflecting boundary: outward flux folds into the node.
                const int i = static_cast<int>(d == 1 ? node
                                                      : (ax == 0 ? node % grid.n_axis
                                                                 : node / grid.n_axis));
                if (i == 0) down = 0.0;
                if (i == grid.n_axis - 1) up = 0.0;
                r.rate[ax][0] = down;
                r.rate[ax][1] = up;
                r.total += down + up;
            }
            max_rate = std::max(max_rate, r.total);
        }
    }
    chain.lambda = 1.02 * max_rate;
    return chain;
}

std::size_t neighbor(const Grid& grid, std::size_t node, int axis, int dir) {
    const long step = axis == 0 ? 1 : grid.n_axis;
    return node + static_cast<std::size_t>(dir == 0 ? -step : step);
}

// One Bellman sweep; returns T w and fills the argmax policy.
void bellman(const Grid& grid, const Chain& chain, const Vec& w, Vec& tw, std::vector<int>* policy) {
    const double lam = chain.lambda;
    for (std::size_t node = 0; node < grid.n_nodes(); ++node) {
        double best = -std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int ai = 0; ai < chain.n_actions; ++ai) {
            const Rates& r = chain.at(node, ai);
            double q = r.reward / lam + w[node] * (1.0 - r.total / lam);
            for (int ax = 0; ax < grid.d; ++ax) {
                if (r.rate[ax][0] > 0.0) q += r.rate[ax][0] / lam * w[neighbor(grid, node, ax, 0)];
                if (r.rate[ax][1] > 0.0) q += r.rate[ax][1] / lam * w[neighbor(grid, node, ax, 1)];
            }
            if (q > best) {  // strict: first (lexicographically smallest) action wins ties
                best = q;
                best_a = ai;
            }
        }
        tw[node] = best;
        if (policy != nullptr) (*policy)[node] = best_a;
    }
}

// Exact gain/bias of a fixed policy: solve (I - P) w + gamma 1 = r/Lambda with
// w(anchor) = 0; bordered sparse system, rho = Lambda * gamma.
bool evaluate_policy(const Grid& grid, const Chain& chain, const std::vector<int>& policy,
                     Vec& w, double& rho) {
    const std::size_t n = grid.n_nodes();
    const double lam = chain.lambda;
    const std::size_t anchor = grid.origin_index();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n * 6);
    for (std::size_t node = 0; node < n; ++node) {
        const Rates& r = chain.at(node, policy[node]);
        trip.emplace_back(node, node, r.total / lam);
        for (int ax = 0; ax < grid.d; ++ax)
            for (int dir = 0; dir < 2; ++dir)
                if (r.rate[ax][dir] > 0.0)
                    trip.emplace_back(node, neighbor(grid, node, ax, dir), -r.rate[ax][dir] / lam);
        trip.emplace_back(node, n, 1.0);  // gamma column
    }
    trip.emplace_back(n, anchor, 1.0);  // w(anchor) = 0
    Eigen::SparseMatrix<double> sys(n + 1, n + 1);
    sys.setFromTriplets(trip.begin(), trip.end());
    Vec rhs = Vec::Zero(n + 1);
    for (std::size_t node = 0; node < n; ++node) rhs[node] = chain.at(node, policy[node]).reward / lam;

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys);
    if (lu.info() != Eigen::Success) return false;
    Vec sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success) return false;
    w = sol.head(n);
    rho = lam * sol[n];
    return true;
}

double measure_lipschitz(const Grid& grid, const Vec& w) {
    double worst = 0.0;
    for (std::size_t node = 0; node < grid.n_nodes(); ++node) {
        const int i = static_cast<int>(grid.d == 1 ? node : node % grid.n_axis);
        if (i + 1 < grid.n_axis)
            worst = std::max(worst, std::abs(w[node + 1] - w[node]) / grid.spacing);
        if (grid.d == 2 && node + grid.n_axis < grid.n_nodes())
            worst = std::max(worst, std::abs(w[node + grid.n_axis] - w[node]) / grid.spacing);
    }
    return worst;
}

}  // namespace

HjbSolution solve_diffusive(const ModelSpec& model, const Grid& grid, const SolverOptions& opts) {
    grid.validate();
    const Chain chain = build_chain(model, grid);
    const std::size_t n = grid.n_nodes();
    const std::size_t anchor = grid.origin_index();

    HjbSolution sol;
    sol.grid = grid;
    sol.kind = HjbKind::diffusive;
    sol.w = Vec::Zero(n);
    sol.policy.assign(n, 0);

    Vec tw(n);
    double rho = 0.0;
    if (opts.policy_iteration) {
        std::vector<int> policy(n, 0);
        bellman(grid, chain, sol.w, tw, &policy);  // greedy start from w = 0
        std::vector<int> next(n, 0);
        for (int it = 0; it < std::min(opts.max_iters, 1000); ++it) {
            sol.iterations = it + 1;
            if (!evaluate_policy(grid, chain, policy, sol.w, rho)) break;
            bellman(grid, chain, sol.w, tw, &next);
            // Residual in gain units: T w - w = rho/Lambda at the fixed point.
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                res = std::max(res, std::abs(chain.lambda * (tw[i] - sol.w[i]) - rho));
            sol.residual = res;
            sol.residual_history.push_back(res);
            if (res <= opts.tol) {
                sol.converged = true;
                break;
            }
            if (next == policy) break;  // stable policy, residual floor reached
            policy.swap(next);
        }
        sol.policy = policy;
        sol.rho = rho;
    } else {
        // Plain relative value iteration with span-seminorm stopping.
        Vec diff(n);
        for (int it = 0; it < opts.max_iters; ++it) {
            sol.iterations = it + 1;
            bellman(grid, chain, sol.w, tw, nullptr);
            diff = tw - sol.w;
            const double span = diff.maxCoeff() - diff.minCoeff();
            rho = chain.lambda * 0.5 * (diff.maxCoeff() + diff.minCoeff());
            sol.w = tw.array() - tw[anchor];
            if (chain.lambda * span <= opts.tol) {
                sol.converged = true;
                break;
            }
            if (it % 64 == 0) {
                sol.residual_history.push_back(chain.lambda * span);
                if (sol.residual_history.size() > 512)
                    sol.residual_history.erase(sol.residual_history.begin());
            }
        }
        bellman(grid, chain, sol.w, tw, &sol.policy);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            res = std::max(res, std::abs(chain.lambda * (tw[i] - sol.w[i]) - rho));
        sol.residual = res;
        sol.rho = rho;
    }

    sol.w.array() -= sol.w[anchor];  // normalization w(origin) = 0
    sol.lipschitz_estimate = measure_lipschitz(grid, sol.w);
    return sol;
}

}  // namespace ofudiff
