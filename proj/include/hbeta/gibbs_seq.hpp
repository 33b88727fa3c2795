#pragma once

// Gibbs sampler for the sequence model: alternate Theta | (Y, pi) and
// pi | Theta, the latter being the conjugate no-noise posterior.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hbeta/likelihood.hpp"
#include "hbeta/random.hpp"
#include "hbeta/tree.hpp"

namespace hbeta {

enum class ThetaSampling {
    /// Interval weight pi_j p(y; midpoint_j), then uniform inside the interval.
    MidpointGrid,
    /// Interval weight pi_j / w_j * int p(y; t) dt, then the likelihood restricted to it.
    ExactInterval,
};

std::string to_string(ThetaSampling mode);
ThetaSampling parse_theta_sampling(const std::string& text);

struct ChainConfig {
    std::size_t iterations = 150;
    std::size_t burn_in = 50;
    std::size_t chains = 1;
    std::uint64_t seed = 1;
    ThetaSampling mode = ThetaSampling::MidpointGrid;
    /// Keep per-draw Theta (or beta) vectors.
    bool record_theta = false;

    /// Throws InvalidArgument unless iterations >= 1, burn_in < iterations, chains >= 1.
    void validate() const;
    std::size_t recorded_per_chain() const { return iterations - burn_in; }

    bool operator==(const ChainConfig&) const = default;
};

/// Default burn-in of one third of the iterations.
ChainConfig make_chain_config(std::size_t iterations, std::size_t chains, std::uint64_t seed);

/// Post burn-in states of all chains, pooled in chain order.
struct PosteriorDraws {
    Grid grid;
    ChainConfig config;
    std::string likelihood;
    std::vector<ProbVector> pi_draws;
    /// Theta (sequence model) or beta (logistic) per recorded draw; may be empty.
    std::vector<std::vector<double>> theta_draws;

    std::size_t size() const { return pi_draws.size(); }
    bool empty() const { return pi_draws.empty(); }
    /// Recorded draws of one chain (contiguous block in pooled order).
    std::span<const ProbVector> chain(std::size_t c) const;
    /// Pointwise posterior mean of the leaf probabilities.
    ProbVector mean_pi() const;

    bool operator==(const PosteriorDraws&) const = default;
};

/// One draw from f(theta | y, pi) proportional to p(y; theta) f(theta; a, pi).
double sample_theta_conditional(double y, const ProbVector& pi, const Grid& grid,
                                const SequenceLikelihood& lik, ThetaSampling mode, Rng& rng);

/// Runs cfg.chains independent chains (in parallel) of the sequence-model sampler.
/// Each chain starts from a Dirichlet(1, ..., 1) draw of pi and uses Rng(seed, chain).
PosteriorDraws run_chain_seq(std::span<const double> y, const Grid& grid,
                             const SequenceLikelihood& lik, const ChainConfig& cfg);

}  // namespace hbeta
