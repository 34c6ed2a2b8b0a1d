#include "loadbayes/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace loadbayes {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
        word = splitmix64(s);
    }
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    if (!(lo <= hi)) {
        throw std::invalid_argument("uniform: lo must not exceed hi");
    }
    return lo + (hi - lo) * uniform01();
}

double RngStream::normal(double mean, double stddev) {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return mean + stddev * cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * m;
    has_cached_normal_ = true;
    return mean + stddev * (u * m);
}

double RngStream::gamma_at_least_one(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal(0.0, 1.0);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v;
        }
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double RngStream::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
        throw std::invalid_argument("gamma: shape and rate must be positive");
    }
    if (shape >= 1.0) {
        return gamma_at_least_one(shape) / rate;
    }
    // Boost: X ~ Gamma(shape + 1), X * U^(1/shape) ~ Gamma(shape).
    const double g = gamma_at_least_one(shape + 1.0);
    double u = uniform01();
    while (u == 0.0) {
        u = uniform01();
    }
    return g * std::pow(u, 1.0 / shape) / rate;
}

RngStream RngStream::substream(std::uint64_t index) const {
    std::uint64_t mix = seed_;
    (void)splitmix64(mix);
    mix ^= 0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL;
    return RngStream(splitmix64(mix));
}

}  // namespace loadbayes
