#include "ofudiff/eluder.hpp"

#include "ofudiff/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ofudiff {

double EluderInstance::diameter() const {
    double diam = 0.0;
    for (std::size_t f = 0; f < n_members(); ++f)
        for (std::size_t g = f + 1; g < n_members(); ++g)
            for (std::size_t i = 0; i < n_points(); ++i)
                diam = std::max(diam, (values[f][i] - values[g][i]).norm());
    return diam;
}

namespace {

struct Tab {
    int n_points = 0;
    int n_pairs = 0;
    std::vector<double> gap;  // gap[p * n_points + i]

    double g(int p, int i) const { return gap[static_cast<std::size_t>(p) * n_points + i]; }
};

Tab tabulate(const EluderInstance& inst) {
    Tab t;
    t.n_points = static_cast<int>(inst.n_points());
    const int m = static_cast<int>(inst.n_members());
    t.n_pairs = m * (m - 1) / 2;
    t.gap.resize(static_cast<std::size_t>(t.n_pairs) * t.n_points);
    int p = 0;
    for (int f = 0; f < m; ++f)
        for (int g = f + 1; g < m; ++g, ++p)
            for (int i = 0; i < t.n_points; ++i)
                t.gap[static_cast<std::size_t>(p) * t.n_points + i] =
                    (inst.values[f][i] - inst.values[g][i]).norm();
    return t;
}

// Thresholds at which independence can change: just below each distinct gap
// value above the requested level (independence is weakly improving in eps'
// between gap values, so these suffice), plus the level itself.
std::vector<double> candidate_levels(const Tab& t, double eps) {
    std::vector<double> cand{eps};
    for (double g : t.gap)
        if (g > eps) cand.push_back(std::nextafter(g, 0.0));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return cand;
}

// Exact longest-sequence length at fixed eps' via reachability over subsets.
int longest_exact(const Tab& t, double eps_prime, const std::vector<std::vector<double>>& sum2,
                  std::vector<int>* witness) {
    const int n = t.n_points;
    const double e2 = eps_prime * eps_prime;
    const std::size_t n_sets = std::size_t{1} << n;
    std::vector<int> parent(n_sets, -2);  // -2 unreachable, -1 root, else added point
    parent[0] = -1;
    int best_size = 0;
    std::size_t best_set = 0;
    for (std::size_t s = 1; s < n_sets; ++s) {
        for (int x = 0; x < n; ++x) {
            if (!(s >> x & 1)) continue;
            const std::size_t prev = s & ~(std::size_t{1} << x);
            if (parent[prev] == -2) continue;
            bool indep = false;
            for (int p = 0; p < t.n_pairs; ++p) {
                if (sum2[p][prev] <= e2 && t.g(p, x) > eps_prime) {
                    indep = true;
                    break;
                }
            }
            if (indep) {
                parent[s] = x;
                const int size = static_cast<int>(std::popcount(s));
                if (size > best_size) {
                    best_size = size;
                    best_set = s;
                }
                break;
            }
        }
    }
    if (witness != nullptr) {
        witness->clear();
        for (std::size_t s = best_set; s != 0;) {
            witness->push_back(parent[s]);
            s &= ~(std::size_t{1} << parent[s]);
        }
        std::reverse(witness->begin(), witness->end());
    }
    return best_size;
}

// Greedy lower bound: extend with the first index-ordered point that is still
// independent of the accumulated prefix.
int longest_greedy(const Tab& t, double eps_prime, std::vector<int>* witness) {
    const int n = t.n_points;
    const double e2 = eps_prime * eps_prime;
    std::vector<double> run(t.n_pairs, 0.0);
    std::vector<bool> used(n, false);
    std::vector<int> seq;
    bool extended = true;
    while (extended) {
        extended = false;
        for (int x = 0; x < n && !extended; ++x) {
            if (used[x]) continue;
            for (int p = 0; p < t.n_pairs; ++p) {
                if (run[p] <= e2 && t.g(p, x) > eps_prime) {
                    used[x] = true;
                    seq.push_back(x);
                    for (int q = 0; q < t.n_pairs; ++q) run[q] += t.g(q, x) * t.g(q, x);
                    extended = true;
                    break;
                }
            }
        }
    }
    if (witness != nullptr) *witness = seq;
    return static_cast<int>(seq.size());
}

}  // namespace

EluderReport estimate_eluder(const EluderInstance& instance, double epsilon_level,
                             std::size_t exact_point_limit) {
    require(epsilon_level > 0.0, "estimate_eluder: epsilon_level must be positive");
    EluderReport report;
    report.epsilon_level = epsilon_level;
    if (instance.n_members() < 2 || instance.n_points() == 0) return report;  // nothing distinguishable

    Tab t = tabulate(instance);
    const auto levels = candidate_levels(t, epsilon_level);
    const bool exact = instance.n_points() <= exact_point_limit;
    report.exact = exact;

    std::vector<std::vector<double>> sum2;
    if (exact) {
        const std::size_t n_sets = std::size_t{1} << t.n_points;
        sum2.assign(t.n_pairs, std::vector<double>(n_sets, 0.0));
        for (int p = 0; p < t.n_pairs; ++p)
            for (std::size_t s = 1; s < n_sets; ++s) {
                const int low = std::countr_zero(s);
                sum2[p][s] = sum2[p][s & (s - 1)] + t.g(p, low) * t.g(p, low);
            }
    }

    for (double level : levels) {
        std::vector<int> witness;
        const int len = exact ? longest_exact(t, level, sum2, &witness)
                              : longest_greedy(t, level, &witness);
        if (len > report.dimension_estimate) {
            report.dimension_estimate = len;
            report.witness_sequences.clear();
            report.witness_sequences.push_back(std::move(witness));
        }
    }
    return report;
}

EluderInstance make_eluder_instance(const DriftFamily& family, const std::vector<Vec>& thetas,
                                    const std::vector<std::pair<Vec, Vec>>& probes, double scale) {
    EluderInstance inst;
    inst.values.resize(thetas.size());
    Vec mu(family.meta().d);
    for (std::size_t f = 0; f < thetas.size(); ++f) {
        inst.values[f].reserve(probes.size());
        for (const auto& [x, a] : probes) {
            family.eval(thetas[f], x, a, mu);
            inst.values[f].push_back(scale * mu);
        }
    }
    return inst;
}

}  // namespace ofudiff
