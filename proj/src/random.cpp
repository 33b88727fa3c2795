#include "hbeta/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbeta {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x68426574u};
    engine_.seed(seq);
}

double Rng::normal() {
    std::normal_distribution<double> dist;
    return dist(engine_);
}

double Rng::exponential() {
    return -std::log(uniform_open());
}

double Rng::gamma(double shape) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(engine_);
}

double Rng::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    const double v = x / (x + y);
    constexpr double lo = std::numeric_limits<double>::min();
    constexpr double hi = 1.0 - 0x1.0p-53;
    if (!(v > lo)) return lo;
    return std::min(v, hi);
}

std::uint64_t Rng::binomial(std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::uint64_t> dist(n, p);
    return dist(engine_);
}

std::uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(engine_);
}

}  // namespace hbeta
