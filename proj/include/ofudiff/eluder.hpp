#pragma once

#include "ofudiff/common.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ofudiff {

class DriftFamily;

// A finite function class tabulated on a finite probe grid:
// values[f][i] is the value of class member f at probe point i.
struct EluderInstance {
    std::vector<std::vector<Vec>> values;

    std::size_t n_members() const { return values.size(); }
    std::size_t n_points() const { return values.empty() ? 0 : values[0].size(); }
    double diameter() const;  // max over points of the pairwise prediction gap
};

struct EluderReport {
    double epsilon_level = 0.0;
    int dimension_estimate = 0;
    bool exact = true;  // false when the combinatorial budget forced the greedy lower bound
    std::vector<std::vector<int>> witness_sequences;
};

// Longest sequence of probe points in which every point is eps'-independent
// of its predecessors, maximised over thresholds eps' >= epsilon_level
// (a point is independent when some pair of members stays within eps' on the
// predecessors in the quadratic-sum metric yet differs by more than eps' at
// the point).  Exact via subset dynamic programming on small instances;
// greedy scan above `exact_point_limit`, flagged as a lower bound.
EluderReport estimate_eluder(const EluderInstance& instance, double epsilon_level,
                             std::size_t exact_point_limit = 16);

// Tabulate {scale * mu_bar_theta} on (x, a) probes.
EluderInstance make_eluder_instance(const DriftFamily& family, const std::vector<Vec>& thetas,
                                    const std::vector<std::pair<Vec, Vec>>& probes, double scale);

}  // namespace ofudiff
