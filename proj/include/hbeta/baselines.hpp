#pragma once

// Comparators: Benjamini-Hochberg, oracle Bayes rules for a known parameter
// vector under unit-free Normal noise, and the Poisson empirical Bayes
// estimators (Robbins, Gamma-Poisson, k-point NPMLE by EM).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hbeta/mixture.hpp"

namespace hbeta {

// ---------------------------------------------------------------- testing

/// Step-up BH: indices (ascending) of every p <= p_(k), k the largest with p_(k) <= k alpha / m.
std::vector<std::size_t> bh_procedure(std::span<const double> pvalues, double alpha);

/// One-sided p-values P(Z >= y / sd) for H0: theta <= 0.
std::vector<double> one_sided_pvalues(std::span<const double> y, double sd = 1.0);

/// sum_{theta_i <= 0} phi(y - theta_i) / sum_i phi(y - theta_i).
double oracle_fdr(std::span<const double> theta, double y, double sd = 1.0);
/// Same with the upper tail probability in place of the density.
double oracle_Fdr(std::span<const double> theta, double y, double sd = 1.0);
/// Cutoff with oracle_Fdr = alpha by bisection. -inf when every y qualifies,
/// +inf when none does.
double oracle_threshold(std::span<const double> theta, double alpha, double sd = 1.0);
/// sum_i theta_i phi(y - theta_i) / sum_i phi(y - theta_i).
double oracle_posterior_mean(std::span<const double> theta, double y, double sd = 1.0);

// ---------------------------------------------------------------- Poisson EB

/// counts[y] = number of observations equal to y.
using Histogram = std::vector<std::uint64_t>;

Histogram make_histogram(std::span<const std::uint64_t> values);
std::uint64_t histogram_total(const Histogram& h);

/// The accident data: 7840, 1317, 239, 42, 14, 4, 4, 1 for y = 0..7.
const Histogram& accident_histogram();

/// Simar's four-point fit to the accident data, with the smallest weight taken as 0.0001
/// so the weights sum to one.
DiscreteMixture simar_mixture();

/// (y + 1) m(y + 1) / m(y); empty where m(y) = 0.
std::vector<std::optional<double>> robbins_poisson(const Histogram& h);

struct GammaPoissonFit {
    /// Gamma scale and shape of the rate distribution.
    double theta = 0.0;
    double r = 0.0;
    double loglik = 0.0;
    int iterations = 0;

    /// (y + r) theta / (1 + theta).
    double posterior_mean(double y) const { return (y + r) * theta / (1.0 + theta); }
};

/// Negative-binomial marginal log-likelihood of a histogram.
double negbin_loglik(const Histogram& h, double theta, double r);

/// Maximum-likelihood fit by Newton on (log theta, log r). Throws
/// ConvergenceError after 500 iterations.
GammaPoissonFit gamma_poisson_eb(const Histogram& h);

/// Method-of-moments fit: theta = var / mean - 1, r = mean / theta.
GammaPoissonFit gamma_poisson_moments(const Histogram& h);

double poisson_log_pmf(double y, double rate);

double mixture_loglik_poisson(const DiscreteMixture& g, const Histogram& h);
double mixture_posterior_mean_poisson(const DiscreteMixture& g, double y);

struct EmResult {
    DiscreteMixture mixture;
    double loglik = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Log-likelihood after every iteration, starting with the initial value.
    std::vector<double> trace;
};

struct EmOptions {
    int max_iterations = 20000;
    double tolerance = 1e-9;
};

/// Simar's EM for a k-point Poisson mixture from the given start.
EmResult npmle_em(const Histogram& h, const DiscreteMixture& init, const EmOptions& opts = {});

/// Best of `starts` EM runs from jittered data quantiles and Dirichlet weights.
EmResult npmle_multistart(const Histogram& h, std::size_t k, std::size_t starts, std::uint64_t seed,
                          const EmOptions& opts = {});

}  // namespace hbeta
