#pragma once

#include "ofudiff/common.hpp"

#include <cstddef>

namespace ofudiff {

class ModelSpec;

// High-probability envelope H_delta(n) for the state norm after n events,
// assembled from the model's Lyapunov constants.  H_delta grows like
// sqrt(log(n/delta)) and is nondecreasing in n.
struct StateBound {
    double ell_v = 1.0;
    double L_v = 1.0;
    double M_v = 1.0;
    double c_v = 1.0;
    double c_v_prime = 1.0;
    double C_H = 1.0;
    double x0_norm = 0.0;
    double sigma_op = 1.0;

    // Derives C_H and c_v_prime from the certificate:
    //   C_H  = L_v ((1 + L0) S sqrt(8 d / e) + 1 + S sqrt(d))
    //   c_v' = M_v L0 (1 + S sqrt(d)) + 2 M_v S sqrt(d) + (M_v'/2) S^2
    static StateBound from_model(const ModelSpec& model, const Vec& x0);

    double h_delta(std::size_t n, double delta) const;
};

}  // namespace ofudiff
