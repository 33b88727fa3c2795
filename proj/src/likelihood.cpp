#include "hbeta/likelihood.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "hbeta/errors.hpp"

namespace hbeta {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double parse_number(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------- normal helpers

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z - kLogSqrt2Pi);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * kInvSqrt2);
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z * kInvSqrt2);
}

double log_normal_sf(double z) {
    if (z < 30.0) return std::log(normal_sf(z));
    // Asymptotic Mills-ratio expansion; relative error below 1e-9 at z >= 30.
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - kLogSqrt2Pi - std::log(z) + std::log(series);
}

double normal_prob_between(double a, double b) {
    if (!(a <= b)) return 0.0;
    if (a >= 0.0) return std::max(0.0, normal_sf(a) - normal_sf(b));
    if (b <= 0.0) return std::max(0.0, normal_cdf(b) - normal_cdf(a));
    return std::max(0.0, 1.0 - normal_cdf(a) - normal_sf(b));
}

double normal_quantile(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

// ---------------------------------------------------------------- NormalKnownSd

NormalKnownSd::NormalKnownSd(double sd) : sd_(sd) {
    if (!(sd > 0.0) || !std::isfinite(sd)) throw InvalidArgument("normal sd must be positive and finite");
}

double NormalKnownSd::loglik(double y, double theta) const {
    const double z = (y - theta) / sd_;
    return -0.5 * z * z - kLogSqrt2Pi - std::log(sd_);
}

double NormalKnownSd::interval_mass(double y, double lo, double hi) const {
    if (lo > hi) throw InvalidArgument("interval_mass: lo > hi");
    return normal_prob_between((lo - y) / sd_, (hi - y) / sd_);
}

double NormalKnownSd::interval_mean(double y, double lo, double hi) const {
    if (lo > hi) throw InvalidArgument("interval_mean: lo > hi");
    const double a = (lo - y) / sd_;
    const double b = (hi - y) / sd_;
    const double z = normal_prob_between(a, b);
    if (!(z > 1e-280)) return 0.5 * (lo + hi);
    const double shift = (normal_pdf(a) - normal_pdf(b)) / z;
    return std::clamp(y + sd_ * shift, lo, hi);
}

double NormalKnownSd::sample_within(double y, double lo, double hi, Rng& rng) const {
    const double a = (lo - y) / sd_;
    const double b = (hi - y) / sd_;
    const double u = rng.uniform_open();
    double z = 0.0;
    if (a >= 0.0) {
        const double sa = normal_sf(a);
        const double sb = normal_sf(b);
        if (!(sa > sb)) return lo + (hi - lo) * u;
        z = -normal_quantile(sa - u * (sa - sb));
    } else {
        const double ca = normal_cdf(a);
        const double cb = normal_cdf(b);
        if (!(cb > ca)) return lo + (hi - lo) * u;
        z = normal_quantile(ca + u * (cb - ca));
    }
    return std::clamp(y + sd_ * z, lo, hi);
}

std::string NormalKnownSd::describe() const {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), sd_);
    return "normal:" + std::string(buf, end);
}

// ---------------------------------------------------------------- PoissonLik

PoissonLik::PoissonLik(int sub_points) : sub_points_(sub_points) {
    if (sub_points < 1) throw InvalidArgument("poisson quadrature needs at least one sub-point");
}

double PoissonLik::loglik(double y, double theta) const {
    if (!(y >= 0.0) || y != std::floor(y)) {
        throw DomainError("poisson observation must be a nonnegative integer");
    }
    if (theta < 0.0 || std::isnan(theta)) throw DomainError("poisson rate must be nonnegative");
    if (theta == 0.0) return y == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return y * std::log(theta) - theta - std::lgamma(y + 1.0);
}

double PoissonLik::interval_mass(double y, double lo, double hi) const {
    if (lo > hi) throw InvalidArgument("interval_mass: lo > hi");
    const double h = (hi - lo) / sub_points_;
    double sum = 0.0;
    for (int k = 0; k < sub_points_; ++k) sum += std::exp(loglik(y, lo + (k + 0.5) * h));
    return sum * h;
}

double PoissonLik::interval_mean(double y, double lo, double hi) const {
    if (lo > hi) throw InvalidArgument("interval_mean: lo > hi");
    const double h = (hi - lo) / sub_points_;
    double mass = 0.0;
    double first = 0.0;
    for (int k = 0; k < sub_points_; ++k) {
        const double t = lo + (k + 0.5) * h;
        const double p = std::exp(loglik(y, t));
        mass += p;
        first += p * t;
    }
    return mass > 0.0 ? first / mass : 0.5 * (lo + hi);
}

double PoissonLik::sample_within(double y, double lo, double hi, Rng& rng) const {
    const double h = (hi - lo) / sub_points_;
    std::vector<double> w(static_cast<std::size_t>(sub_points_));
    double total = 0.0;
    for (int k = 0; k < sub_points_; ++k) {
        w[static_cast<std::size_t>(k)] = std::exp(loglik(y, lo + (k + 0.5) * h));
        total += w[static_cast<std::size_t>(k)];
    }
    if (!(total > 0.0)) return lo + (hi - lo) * rng.uniform();
    double u = rng.uniform() * total;
    int cell = sub_points_ - 1;
    for (int k = 0; k < sub_points_; ++k) {
        u -= w[static_cast<std::size_t>(k)];
        if (u < 0.0) {
            cell = k;
            break;
        }
    }
    return lo + (cell + rng.uniform()) * h;
}

std::string PoissonLik::describe() const {
    return sub_points_ == 16 ? std::string("poisson") : "poisson:" + std::to_string(sub_points_);
}

std::unique_ptr<SequenceLikelihood> parse_likelihood(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view family = spec.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (family == "normal") {
        if (arg.empty()) throw InvalidArgument("normal likelihood needs an sd: normal:SD");
        return std::make_unique<NormalKnownSd>(parse_number(arg, "normal sd"));
    }
    if (family == "poisson") {
        if (arg.empty()) return std::make_unique<PoissonLik>();
        return std::make_unique<PoissonLik>(static_cast<int>(parse_number(arg, "poisson sub-points")));
    }
    throw InvalidArgument("unknown likelihood '" + std::string(spec) + "' (expected normal:SD or poisson)");
}

}  // namespace hbeta
