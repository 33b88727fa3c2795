#pragma once

// Seeded generators for the simulated experiments and loss tallies.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hbeta/logistic.hpp"
#include "hbeta/mixture.hpp"

namespace hbeta::sim {

// ---------------------------------------------------------------- normal means

/// Six-point prior: +-0.02 w.p. 0.425 each, +-0.2 w.p. 0.05, +-2 w.p. 0.025.
DiscreteMixture normal_means_prior();

/// Parameter vector drawn once from the six-point prior (stream 0).
std::vector<double> gen_normal_means_theta(std::uint64_t seed, std::size_t m = 10000);

/// Y ~ N(theta, 1) for one round (stream round + 1).
std::vector<double> gen_normal_means_round(std::span<const double> theta, std::uint64_t seed, std::size_t round);

// ---------------------------------------------------------------- truncated normal / uniform

inline constexpr double kTnNoiseSd = 0.1;

struct SequenceData {
    std::vector<double> theta;
    std::vector<double> y;
};

/// theta ~ 0.90 TN(0.5, 0.1^2; [0, 1]) + 0.09 U[0, 1] + 0.01 U[0.49, 0.51], y ~ N(theta, 0.1^2).
SequenceData gen_tn_uniform(std::uint64_t seed, std::size_t m = 1000);

double tn_uniform_pdf(double theta);
double tn_uniform_cdf(double theta);

struct PosteriorSummary {
    double mean;
    double lo;
    double hi;
};

/// Exact posterior of theta | y under the mixture above by adaptive quadrature.
PosteriorSummary tn_uniform_true_posterior(double y, double sd = kTnNoiseSd);

// ---------------------------------------------------------------- no-noise chain

/// N_1 ~ Binom(n, 1/2), N_l ~ Binom(N_{l-1}, 1/2) for l = 2..L.
std::vector<std::uint64_t> gen_exa00_chain(int levels, std::uint64_t n, Rng& rng);

/// prod (1 + N_l) / (2 + N_{l-1}) / 2^-L with N_0 = n.
double exa00_hbeta_estimate(std::span<const std::uint64_t> chain, std::uint64_t n);
/// (N_L / n) / 2^-L.
double exa00_pmf_estimate(std::span<const std::uint64_t> chain, std::uint64_t n);

struct Exa00Summary {
    double hbeta_mean;
    double hbeta_sd;
    double pmf_mean;
    double pmf_sd;
};

Exa00Summary exa00_study(int levels, std::size_t runs, std::uint64_t seed, std::uint64_t n = 1000);

// ---------------------------------------------------------------- Poisson mixture

struct PoissonData {
    std::vector<double> lambda;
    std::vector<std::uint64_t> y;
};

/// lambda ~ the mixing distribution, y ~ Poisson(lambda).
PoissonData gen_poisson_mixture(const DiscreteMixture& g, std::size_t m, std::uint64_t seed);

/// Simar's four-point mixture with m = 9461.
PoissonData gen_simar_sim(std::uint64_t seed, std::size_t m = 9461);

// ---------------------------------------------------------------- logistic

struct LogisticData {
    std::vector<double> beta;
    logistic::DesignMatrix x;
    std::vector<double> y;
};

/// Example 1: 100 x -10, 100 x +10, rest 0. Example 2: beta ~ N(3, 4^2).
/// Example 3: 0 or N(7, 1) with equal probability. X entries N(0, 1/n).
LogisticData gen_logistic(int example, std::uint64_t seed, std::size_t n = 4000, std::size_t m = 800);

/// True coefficients of an example (deterministic for Example 1).
std::vector<double> logistic_coefficients(int example, std::size_t m, Rng& rng);

// ---------------------------------------------------------------- losses

/// sum (est - truth)^2 / n.
double mean_squared_error(std::span<const double> truth, std::span<const double> estimate);

/// MSE of estimate divided by MSE of reference.
double relative_mse(std::span<const double> truth, std::span<const double> estimate,
                    std::span<const double> reference);

struct SelectionTally {
    std::size_t rejections = 0;
    std::size_t false_rejections = 0;
    std::size_t non_nulls = 0;
    std::size_t missed = 0;
    /// false / rejections, 0 when nothing is rejected.
    double fdp = 0.0;
    /// missed / non-nulls, 0 when there are no non-nulls.
    double mdr = 0.0;
};

/// Null hypotheses are theta_i <= 0.
SelectionTally selection_tally(std::span<const double> theta, std::span<const std::size_t> rejected);

/// Indices with y_i >= cutoff (strictly above when `strict`).
std::vector<std::size_t> select_above(std::span<const double> y, double cutoff, bool strict = false);

}  // namespace hbeta::sim
