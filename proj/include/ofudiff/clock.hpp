#pragma once

#include "ofudiff/common.hpp"
#include "ofudiff/rng.hpp"

#include <cstdint>
#include <vector>

namespace ofudiff {

// Event arrivals follow a Poisson clock of intensity 1/epsilon: i.i.d.
// exponential inter-arrival gaps of mean epsilon on the wall-clock axis.
struct ClockConfig {
    double epsilon = 1.0;   // mean inter-arrival time, in (0, 1]
    double horizon = 1.0;   // wall-clock horizon T > 0
    std::uint64_t seed = 0;

    void validate() const;
};

// Arrival times tau_1 < tau_2 < ... <= horizon (tau_0 = 0 is implicit and not
// returned).  Empty when no event arrives before the horizon.
std::vector<double> sample_arrivals(const ClockConfig& cfg);
std::vector<double> sample_arrivals(const ClockConfig& cfg, RngStream& clock_stream);

// Two-sided deviation envelope for |eps*N_T - T| at confidence delta:
// 2*sqrt(eps*T*log(2/delta)) or 2*eps*log(2/delta), whichever is larger.
double clock_deviation_envelope(double epsilon, double horizon, double delta);

}  // namespace ofudiff
