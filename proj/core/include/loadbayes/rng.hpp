#pragma once

#include <array>
#include <cstdint>

namespace loadbayes {

/// Seed used by every front end when the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 123456789ULL;

/// Deterministic pseudo-random stream with a fixed, documented algorithm so
/// that a seed reproduces the same sequence on every platform and build:
///   - state: xoshiro256++ initialized by four splitmix64 steps of the seed
///   - uniform doubles: top 53 bits of the next output, scaled to [0, 1)
///   - normal draws: Marsaglia polar method (second value cached)
///   - gamma draws: Marsaglia-Tsang squeeze rejection, with the
///     Gamma(k + 1) * U^(1/k) boost for shapes below one
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform01();
    double uniform(double lo, double hi);
    double normal(double mean, double stddev);
    /// Shape/rate parameterization: mean = shape / rate.
    double gamma(double shape, double rate);

    /// Independent stream for the worker at `index`; deriving the same index
    /// twice yields the same stream.
    RngStream substream(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }

  private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;

    double gamma_at_least_one(double shape);
};

}  // namespace loadbayes
