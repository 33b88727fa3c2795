#pragma once

// End-to-end drivers for the studies. Each returns a result
// struct; the write_* functions turn one into CSV files under a directory.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hbeta/analytics.hpp"
#include "hbeta/baselines.hpp"
#include "hbeta/gibbs_seq.hpp"
#include "hbeta/logistic.hpp"
#include "hbeta/sim.hpp"

namespace hbeta::experiments {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- normal means

struct NormalFdrConfig {
    std::size_t m = 10000;
    std::size_t rounds = 20;
    std::uint64_t seed = 1;
    int levels = 7;
    double lo = -5.0;
    double hi = 5.0;
    std::size_t iterations = 150;
    std::size_t burn_in = 50;
    std::size_t chains = 4;
    double alpha = 0.1;
    double threshold_step = 0.01;
};

struct MethodRates {
    double fdr = 0.0;
    double mdr = 0.0;
    double rejections = 0.0;
};

struct NormalFdrResult {
    NormalFdrConfig config;
    MethodRates oracle;
    MethodRates bh;
    MethodRates hbeta;
    double oracle_threshold = 0.0;
    std::vector<double> hbeta_thresholds;
    /// Selected-set MSE relative to the oracle posterior mean, pooled over rounds.
    double selected_mse_ratio_hbeta = 0.0;
    double selected_mse_ratio_naive = 0.0;
    /// First-round curves on a regular y grid.
    FdrCurve first_curve;
    FdrCurve oracle_curve;
};

NormalFdrResult normal_fdr_study(const NormalFdrConfig& cfg);

// ---------------------------------------------------------------- no-noise chain

struct Exa00Row {
    int levels;
    sim::Exa00Summary summary;
    /// sqrt(2^-L (1 - 2^-L) / n) / 2^-L.
    double pmf_sd_exact;
};

std::vector<Exa00Row> exa00_table(int max_levels, std::size_t runs, std::uint64_t seed);

// ---------------------------------------------------------------- exa01

struct Exa01Config {
    std::uint64_t seed = 1;
    std::size_t m = 1000;
    int levels = 10;
    int coarse_levels = 5;
    double lo = -0.2;
    double hi = 1.2;
    std::size_t chains = 20;
    std::size_t iterations = 150;
    std::size_t burn_in = 50;
    ThetaSampling mode = ThetaSampling::MidpointGrid;
    double query = 0.7;
};

struct Exa01Result {
    Exa01Config config;
    sim::SequenceData data;
    PosteriorDraws draws;
    CdfBand band;
    CdfBand coarse_band;
    DensityEstimate density;
    DensityEstimate coarse_density;
    ThetaPosterior posterior;
    sim::PosteriorSummary truth;
    /// Fraction of band endpoints with lo <= true CDF <= hi.
    double band_coverage = 0.0;
};

Exa01Result exa01_study(const Exa01Config& cfg);

// ---------------------------------------------------------------- accident data

struct HbetaPoissonConfig {
    int levels = 8;
    double lo = 0.0;
    double hi = 4.0;
    std::size_t chains = 20;
    std::size_t iterations = 250;
    std::size_t burn_in = 50;
    ThetaSampling mode = ThetaSampling::ExactInterval;
    std::uint64_t seed = 1;
};

struct HbetaPoissonFit {
    PosteriorDraws draws;
    /// Posterior mean of lambda | y for y = 0..max_y.
    std::vector<double> means;
    std::vector<double> lo;
    std::vector<double> hi;
    /// Mixture log-likelihood of the posterior-mean step density.
    double loglik = 0.0;
};

/// Runs the sequence sampler on Poisson counts and summarizes lambda | y.
HbetaPoissonFit hbeta_poisson(const Histogram& h, const HbetaPoissonConfig& cfg, bool intervals = true);

/// Log-likelihood of counts under a step density mixing distribution.
double step_mixture_loglik_poisson(const Grid& grid, const ProbVector& pi, const Histogram& h);

struct AccidentResult {
    Histogram histogram;
    std::vector<std::optional<double>> robbins;
    GammaPoissonFit gamma_mle;
    GammaPoissonFit gamma_moments;
    DiscreteMixture simar;
    double simar_loglik = 0.0;
    EmResult em3;
    EmResult em4;
    HbetaPoissonFit hbeta;
};

AccidentResult accident_study(const HbetaPoissonConfig& cfg, std::size_t em_starts = 20);

// ---------------------------------------------------------------- Poisson risk

struct RiskConfig {
    std::size_t reps = 40;
    std::size_t m = 9461;
    std::uint64_t seed = 1;
    HbetaPoissonConfig hbeta{};
    std::size_t em_starts = 20;
    std::size_t k = 4;
};

struct RiskSummary {
    double risk = 0.0;
    double se = 0.0;
};

struct RiskResult {
    RiskConfig config;
    RiskSummary hbeta;
    RiskSummary npmle;
    RiskSummary mle;
    RiskSummary oracle;
    std::vector<double> hbeta_losses;
    std::vector<double> npmle_losses;
    std::vector<double> mle_losses;
    std::vector<double> oracle_losses;
};

RiskResult simar_risk_study(const RiskConfig& cfg);

// ---------------------------------------------------------------- logistic

struct LogisticConfig {
    int example = 1;
    std::uint64_t seed = 1;
    std::size_t n = 4000;
    std::size_t m = 800;
    int levels = 6;
    double lo = -24.0;
    double hi = 24.0;
    std::size_t iterations = 1000;
    std::size_t burn_in = 100;
    std::size_t chains = 1;
    std::size_t k_per_interval = 20;
};

/// Default chain layout: one 1000-iteration chain for Examples 1 and 2,
/// ten 150-iteration chains for Example 3.
LogisticConfig logistic_config(int example, std::uint64_t seed);
/// Same proportions at half the size and half the iterations.
LogisticConfig logistic_half_config(int example, std::uint64_t seed);

struct LogisticResult {
    LogisticConfig config;
    std::vector<double> beta_true{};
    std::vector<double> mle{};
    bool mle_fallback = false;
    std::vector<double> beta_mean{};
    std::vector<double> beta_lo{};
    std::vector<double> beta_hi{};
    logistic::QSummary q{};
    std::vector<double> q_true{};
    std::vector<double> q_mle{};
    double rel_mse_beta = 0.0;
    double rel_mse_mu = 0.0;
    double rel_mse_q = 0.0;
    double coverage = 0.0;
    double max_cache_error = 0.0;
    double seconds = 0.0;
    PosteriorDraws draws;
};

LogisticResult logistic_study(const LogisticConfig& cfg);

// ---------------------------------------------------------------- writers

/// Each returns the file names written under dir.
std::vector<std::string> write_normal(const fs::path& dir, const NormalFdrResult& r);
std::vector<std::string> write_exa00(const fs::path& dir, const std::vector<Exa00Row>& rows);
std::vector<std::string> write_exa01(const fs::path& dir, const Exa01Result& r);
std::vector<std::string> write_accident(const fs::path& dir, const AccidentResult& r);
std::vector<std::string> write_risk(const fs::path& dir, const RiskResult& r);
std::vector<std::string> write_logistic(const fs::path& dir, const LogisticResult& r);

/// Accident summary table as CSV text.
std::string accident_table_csv(const AccidentResult& r);

}  // namespace hbeta::experiments
