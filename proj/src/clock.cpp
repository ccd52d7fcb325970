#include "ofudiff/clock.hpp"

#include <algorithm>
#include <cmath>

namespace ofudiff {

void ClockConfig::validate() const {
    require(epsilon > 0.0 && epsilon <= 1.0, "ClockConfig: epsilon must lie in (0, 1]");
    require(horizon >= 0.0 && std::isfinite(horizon), "ClockConfig: horizon must be finite and >= 0");
}

std::vector<double> sample_arrivals(const ClockConfig& cfg) {
    RngStream stream(cfg.seed, Stream::clock);
    return sample_arrivals(cfg, stream);
}

std::vector<double> sample_arrivals(const ClockConfig& cfg, RngStream& clock_stream) {
    cfg.validate();
    std::vector<double> arrivals;
    double t = 0.0;
    for (;;) {
        t += clock_stream.exponential(cfg.epsilon);
        if (t > cfg.horizon) break;
        arrivals.push_back(t);
    }
    return arrivals;
}

double clock_deviation_envelope(double epsilon, double horizon, double delta) {
    require(delta > 0.0 && delta < 1.0, "clock_deviation_envelope: delta in (0,1)");
    const double l = std::log(2.0 / delta);
    return std::max(2.0 * std::sqrt(epsilon * horizon * l), 2.0 * epsilon * l);
}

}  // namespace ofudiff
