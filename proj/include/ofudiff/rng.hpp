#pragma once

#include "ofudiff/common.hpp"

#include <cstdint>
#include <random>

namespace ofudiff {

// Named sub-streams derived from one run seed. The environment streams
// (clock, marks) are separate from agent randomness so that learning code
// cannot perturb the realized event sequence of a seeded run.
enum class Stream : std::uint64_t {
    clock = 0x9e3779b97f4a7c15ull,
    marks = 0xbf58476d1ce4e5b9ull,
    agent = 0x94d049bb133111ebull,
    eval = 0xd6e8feb86659fd93ull,
};

std::uint64_t splitmix64(std::uint64_t& state);

// One independent random stream, seeded from (seed, stream, instance).
class RngStream {
public:
    RngStream(std::uint64_t seed, Stream stream, std::uint64_t instance = 0);

    double uniform01();
    // Exponential with the given mean.
    double exponential(double mean);
    double gaussian();
    Vec gaussian_vec(int dim);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace ofudiff
