#pragma once

// Component-wise grid-scan Gibbs sampler for logistic regression under the
// hierarchical Beta prior on the coefficients, plus the plain MLE.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hbeta/gibbs_seq.hpp"
#include "hbeta/random.hpp"
#include "hbeta/tree.hpp"

namespace hbeta::logistic {

/// n x m design, column-major so one coefficient's column is contiguous.
class DesignMatrix {
public:
    DesignMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);
    static DesignMatrix from_eigen(const Eigen::MatrixXd& x);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
    std::span<const double> column(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> data() const { return data_; }
    Eigen::Map<const Eigen::MatrixXd> matrix() const { return {data_.data(), Eigen::Index(rows_), Eigen::Index(cols_)}; }

    /// mu = X beta.
    std::vector<double> multiply(std::span<const double> beta) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

/// sum_i y_i mu_i - log(1 + exp(mu_i)). Throws InvalidArgument on y outside {0, 1}.
double bernoulli_loglik(std::span<const double> y, std::span<const double> mu);

/// Rejects labels other than 0 and 1.
void check_labels(std::span<const double> y);

struct LogisticState {
    std::vector<double> beta;
    /// Cached X beta, updated incrementally by the scan.
    std::vector<double> mu;
    ProbVector pi;
};

/// State with mu recomputed from beta.
LogisticState make_state(const DesignMatrix& x, std::vector<double> beta, ProbVector pi);

/// max_i |mu_i - (X beta)_i|.
double cache_error(const LogisticState& state, const DesignMatrix& x);

/// Candidate values for one coefficient.
class CandidateSet {
public:
    /// Arbitrary candidates, evaluated directly.
    explicit CandidateSet(std::vector<double> values);
    /// K = I * per_interval equally spaced cell midpoints strictly inside [a_min, a_max].
    static CandidateSet regular(const Grid& grid, std::size_t per_interval);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    std::span<const double> values() const { return values_; }
    bool equally_spaced() const { return equally_spaced_; }
    double step() const { return step_; }

private:
    std::vector<double> values_;
    bool equally_spaced_ = false;
    double step_ = 0.0;
};

/// out[k] = sum_r softplus(base[r] + x[r] * candidates[k]).
/// Equally spaced candidates use a blocked exp recurrence; others go direct.
void softplus_sums(std::span<const double> base, std::span<const double> x, const CandidateSet& candidates,
                   std::span<double> out);

/// Unnormalized log full-conditional of coefficient i at every candidate:
/// bernoulli_loglik(y, mu - X_i beta_i + X_i b_k) + log step_pdf(b_k).
std::vector<double> scan_log_weights(std::size_t i, const CandidateSet& candidates, const LogisticState& state,
                                     std::span<const double> y, const DesignMatrix& x, const Grid& grid);

/// Draws beta_i from its full conditional over the candidates and updates
/// beta and the mu cache. Returns the new value.
double conditional_beta_scan(std::size_t i, const CandidateSet& candidates, LogisticState& state,
                             std::span<const double> y, const DesignMatrix& x, const Grid& grid, Rng& rng);

struct IrlsOptions {
    double gradient_tolerance = 1e-8;
    int max_iterations = 100;
    double divergence_norm = 1e4;
};

struct IrlsResult {
    std::vector<double> beta;
    double loglik = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    /// Log-likelihood after every accepted step (nondecreasing).
    std::vector<double> loglik_trace;
};

/// Newton / IRLS with step halving. Throws SeparationError when the
/// coefficients diverge or the data are fit perfectly.
IrlsResult irls_fit(std::span<const double> y, const DesignMatrix& x, const IrlsOptions& opts = {});
std::vector<double> irls_mle(std::span<const double> y, const DesignMatrix& x);

struct LogisticRun {
    /// pi draws plus beta draws in theta_draws.
    PosteriorDraws draws;
    std::vector<double> mle;
    /// True when the MLE did not exist and chains started from beta = 0.
    bool mle_fallback = false;
    /// Largest mu-cache drift seen at the periodic resync.
    double max_cache_error = 0.0;
};

/// Runs cfg.chains chains of the logistic sampler starting from the MLE and
/// the empirical mass function of the MLE over the grid.
LogisticRun run_chain_logistic(std::span<const double> y, const DesignMatrix& x, const Grid& grid,
                               const ChainConfig& cfg, std::size_t k_per_interval = 20);

struct QSummary {
    std::vector<double> mean;
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Per-observation posterior mean and 2.5 / 97.5 % quantiles of q = logistic(X beta).
QSummary posterior_q(const PosteriorDraws& draws, const DesignMatrix& x);

inline double logistic_fn(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace hbeta::logistic
