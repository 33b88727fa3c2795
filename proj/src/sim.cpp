#include "hbeta/sim.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hbeta/errors.hpp"
#include "hbeta/likelihood.hpp"
#include "hbeta/stats.hpp"

namespace hbeta::sim {

DiscreteMixture normal_means_prior() {
    return DiscreteMixture({-2.0, -0.2, -0.02, 0.02, 0.2, 2.0}, {0.025, 0.05, 0.425, 0.425, 0.05, 0.025});
}

namespace {

double draw_from(const DiscreteMixture& g, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        acc += g.weights()[j];
        if (u < acc) return g.support()[j];
    }
    return g.support().back();
}

}  // namespace

std::vector<double> gen_normal_means_theta(std::uint64_t seed, std::size_t m) {
    const DiscreteMixture g = normal_means_prior();
    Rng rng(seed, 0);
    std::vector<double> theta(m);
    for (double& t : theta) t = draw_from(g, rng);
    return theta;
}

std::vector<double> gen_normal_means_round(std::span<const double> theta, std::uint64_t seed, std::size_t round) {
    Rng rng(seed, round + 1);
    std::vector<double> y(theta.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = theta[i] + rng.normal();
    return y;
}

// ---------------------------------------------------------------- truncated normal / uniform

namespace {

constexpr double kTnWeight = 0.90;
constexpr double kWideWeight = 0.09;
constexpr double kSpikeWeight = 0.01;
constexpr double kTnMean = 0.5;
constexpr double kTnSd = 0.1;
constexpr double kSpikeLo = 0.49;
constexpr double kSpikeHi = 0.51;

double tn_norm() { return normal_cdf((1.0 - kTnMean) / kTnSd) - normal_cdf(-kTnMean / kTnSd); }

}  // namespace

SequenceData gen_tn_uniform(std::uint64_t seed, std::size_t m) {
    Rng rng(seed, 0);
    SequenceData d{std::vector<double>(m), std::vector<double>(m)};
    for (std::size_t i = 0; i < m; ++i) {
        const double u = rng.uniform();
        double t;
        if (u < kTnWeight) {
            do t = rng.normal(kTnMean, kTnSd);
            while (t < 0.0 || t > 1.0);
        } else if (u < kTnWeight + kWideWeight) {
            t = rng.uniform();
        } else {
            t = rng.uniform(kSpikeLo, kSpikeHi);
        }
        d.theta[i] = t;
        d.y[i] = t + kTnNoiseSd * rng.normal();
    }
    return d;
}

double tn_uniform_pdf(double theta) {
    if (theta < 0.0 || theta > 1.0) return 0.0;
    double p = kTnWeight * normal_pdf((theta - kTnMean) / kTnSd) / (kTnSd * tn_norm()) + kWideWeight;
    if (theta >= kSpikeLo && theta <= kSpikeHi) p += kSpikeWeight / (kSpikeHi - kSpikeLo);
    return p;
}

double tn_uniform_cdf(double theta) {
    if (theta <= 0.0) return 0.0;
    if (theta >= 1.0) return 1.0;
    const double tn = (normal_cdf((theta - kTnMean) / kTnSd) - normal_cdf(-kTnMean / kTnSd)) / tn_norm();
    const double spike = std::clamp((theta - kSpikeLo) / (kSpikeHi - kSpikeLo), 0.0, 1.0);
    return kTnWeight * tn + kWideWeight * theta + kSpikeWeight * spike;
}

PosteriorSummary tn_uniform_true_posterior(double y, double sd) {
    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto weight = [&](double t) { return tn_uniform_pdf(t) * normal_pdf((y - t) / sd); };
    // Integral of f over [0, x], split at the density's jumps.
    auto integral = [&](auto&& f, double x) {
        double s = 0.0;
        double a = 0.0;
        for (double b : {kSpikeLo, kSpikeHi, 1.0}) {
            const double hi = std::min(b, x);
            if (hi > a) s += Quad::integrate(f, a, hi, 15, 1e-13);
            a = b;
            if (a >= x) break;
        }
        return s;
    };
    const double z = integral(weight, 1.0);
    const double first = integral([&](double t) { return t * weight(t); }, 1.0);
    auto quantile_at = [&](double p) {
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (integral(weight, mid) / z < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    return {first / z, quantile_at(0.025), quantile_at(0.975)};
}

// ---------------------------------------------------------------- no-noise chain

std::vector<std::uint64_t> gen_exa00_chain(int levels, std::uint64_t n, Rng& rng) {
    if (levels < 1) throw InvalidArgument("chain needs at least one level");
    std::vector<std::uint64_t> chain(static_cast<std::size_t>(levels));
    std::uint64_t prev = n;
    for (auto& c : chain) {
        c = rng.binomial(prev, 0.5);
        prev = c;
    }
    return chain;
}

double exa00_hbeta_estimate(std::span<const std::uint64_t> chain, std::uint64_t n) {
    double est = 1.0;
    double prev = static_cast<double>(n);
    for (std::uint64_t c : chain) {
        est *= 2.0 * (1.0 + static_cast<double>(c)) / (2.0 + prev);
        prev = static_cast<double>(c);
    }
    return est;
}

double exa00_pmf_estimate(std::span<const std::uint64_t> chain, std::uint64_t n) {
    return static_cast<double>(chain.back()) / static_cast<double>(n) * std::ldexp(1.0, static_cast<int>(chain.size()));
}

Exa00Summary exa00_study(int levels, std::size_t runs, std::uint64_t seed, std::uint64_t n) {
    if (runs < 2) throw InvalidArgument("need at least two runs");
    Rng rng(seed, 0);
    std::vector<double> hb(runs), pmf(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        const auto chain = gen_exa00_chain(levels, n, rng);
        hb[r] = exa00_hbeta_estimate(chain, n);
        pmf[r] = exa00_pmf_estimate(chain, n);
    }
    return {mean(hb), sample_sd(hb), mean(pmf), sample_sd(pmf)};
}

// ---------------------------------------------------------------- Poisson mixture

PoissonData gen_poisson_mixture(const DiscreteMixture& g, std::size_t m, std::uint64_t seed) {
    Rng rng(seed, 0);
    PoissonData d{std::vector<double>(m), std::vector<std::uint64_t>(m)};
    for (std::size_t i = 0; i < m; ++i) {
        d.lambda[i] = draw_from(g, rng);
        d.y[i] = rng.poisson(d.lambda[i]);
    }
    return d;
}

PoissonData gen_simar_sim(std::uint64_t seed, std::size_t m) {
    return gen_poisson_mixture(DiscreteMixture({0.089, 0.580, 3.176, 3.669}, {0.7600, 0.2362, 0.0037, 0.0001}), m,
                               seed);
}

// ---------------------------------------------------------------- logistic

std::vector<double> logistic_coefficients(int example, std::size_t m, Rng& rng) {
    std::vector<double> beta(m, 0.0);
    switch (example) {
    case 1: {
        const std::size_t block = m / 8;
        for (std::size_t j = 0; j < block; ++j) beta[j] = -10.0;
        for (std::size_t j = block; j < 2 * block; ++j) beta[j] = 10.0;
        break;
    }
    case 2:
        for (double& b : beta) b = rng.normal(3.0, 4.0);
        break;
    case 3:
        for (double& b : beta) b = rng.uniform() < 0.5 ? 0.0 : rng.normal(7.0, 1.0);
        break;
    default:
        throw InvalidArgument("logistic example must be 1, 2 or 3");
    }
    return beta;
}

LogisticData gen_logistic(int example, std::uint64_t seed, std::size_t n, std::size_t m) {
    Rng beta_rng(seed, 0);
    std::vector<double> beta = logistic_coefficients(example, m, beta_rng);
    Rng x_rng(seed, 1);
    const double sd = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> data(n * m);
    for (double& v : data) v = sd * x_rng.normal();
    logistic::DesignMatrix x(n, m, std::move(data));
    const std::vector<double> mu = x.multiply(beta);
    Rng y_rng(seed, 2);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = y_rng.uniform() < logistic::logistic_fn(mu[i]) ? 1.0 : 0.0;
    return {std::move(beta), std::move(x), std::move(y)};
}

// ---------------------------------------------------------------- losses

double mean_squared_error(std::span<const double> truth, std::span<const double> estimate) {
    if (truth.size() != estimate.size() || truth.empty()) throw InvalidArgument("loss needs equal, nonempty vectors");
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) s += (estimate[i] - truth[i]) * (estimate[i] - truth[i]);
    return s / static_cast<double>(truth.size());
}

double relative_mse(std::span<const double> truth, std::span<const double> estimate,
                    std::span<const double> reference) {
    return mean_squared_error(truth, estimate) / mean_squared_error(truth, reference);
}

SelectionTally selection_tally(std::span<const double> theta, std::span<const std::size_t> rejected) {
    SelectionTally t;
    std::vector<bool> hit(theta.size(), false);
    for (std::size_t i : rejected) {
        if (i >= theta.size()) throw InvalidArgument("rejected index out of range");
        hit[i] = true;
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const bool null = theta[i] <= 0.0;
        if (hit[i]) {
            ++t.rejections;
            if (null) ++t.false_rejections;
        }
        if (!null) {
            ++t.non_nulls;
            if (!hit[i]) ++t.missed;
        }
    }
    t.fdp = t.rejections ? static_cast<double>(t.false_rejections) / static_cast<double>(t.rejections) : 0.0;
    t.mdr = t.non_nulls ? static_cast<double>(t.missed) / static_cast<double>(t.non_nulls) : 0.0;
    return t;
}

std::vector<std::size_t> select_above(std::span<const double> y, double cutoff, bool strict) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (strict ? y[i] > cutoff : y[i] >= cutoff) out.push_back(i);
    }
    return out;
}

}  // namespace hbeta::sim
