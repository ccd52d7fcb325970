#include "ofudiff/rng.hpp"

namespace ofudiff {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, Stream stream, std::uint64_t instance) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= static_cast<std::uint64_t>(stream);
    std::uint64_t b = splitmix64(s);
    s ^= instance * 0xda942042e4dd58b5ull + 1;
    std::uint64_t c = splitmix64(s);
    std::seed_seq seq{static_cast<unsigned>(a), static_cast<unsigned>(a >> 32),
                      static_cast<unsigned>(b), static_cast<unsigned>(b >> 32),
                      static_cast<unsigned>(c), static_cast<unsigned>(c >> 32)};
    engine_ = std::mt19937_64(seq);
}

double RngStream::uniform01() { return unif_(engine_); }

double RngStream::exponential(double mean) {
    require(mean > 0.0, "exponential: mean must be positive");
    std::exponential_distribution<double> d(1.0 / mean);
    return d(engine_);
}

double RngStream::gaussian() { return normal_(engine_); }

Vec RngStream::gaussian_vec(int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal_(engine_);
    return v;
}

}  // namespace ofudiff
