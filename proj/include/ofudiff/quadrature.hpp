#pragma once

#include "ofudiff/common.hpp"

namespace ofudiff {

// Physicists' Gauss-Hermite rule for weight exp(-x^2), via Golub-Welsch.
// For a standard normal xi:  E[f(xi)] = sum_k (weights[k]/sqrt(pi)) f(sqrt(2) nodes[k]).
struct GaussHermite {
    Vec nodes;
    Vec weights;

    static const GaussHermite& order(int k);  // cached per order

    // Normal-expectation form: points[k] = sqrt(2)*nodes[k], probs sum to 1.
    Vec normal_points() const;
    Vec normal_weights() const;
};

}  // namespace ofudiff
