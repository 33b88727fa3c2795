#pragma once

#include <cstdint>
#include <random>

namespace hbeta {

/// Seedable random source. Every chain, round or replicate owns one.
///
/// Streams are derived from a user seed and a stream id through
/// std::seed_seq, so (seed, stream) pairs give independent, replayable
/// sequences on a given standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double exponential();
    /// Gamma(shape, 1).
    double gamma(double shape);
    /// Beta(a, b) as a ratio of two Gamma draws, kept strictly inside (0, 1).
    double beta(double a, double b);
    std::uint64_t binomial(std::uint64_t n, double p);
    std::uint64_t poisson(double mean);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace hbeta
