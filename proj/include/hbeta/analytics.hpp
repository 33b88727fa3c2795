#pragma once

// Summaries of posterior draws: deconvolution density and CDF band,
// per-observation posteriors, local and tail false discovery rates,
// highest-density credible sets.

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "hbeta/gibbs_seq.hpp"
#include "hbeta/likelihood.hpp"
#include "hbeta/mixture.hpp"
#include "hbeta/random.hpp"
#include "hbeta/tree.hpp"

namespace hbeta {

/// Coarsened grid: every 2^(L - target_levels)-th endpoint.
Grid coarsen(const Grid& grid, int target_levels);

struct DensityEstimate {
    Grid grid;
    /// Posterior mean leaf probabilities at the coarse level.
    std::vector<double> mass;
    /// mass_j / width_j.
    std::vector<double> density;
};

DensityEstimate deconv_density(const PosteriorDraws& draws, int levels);

struct CdfBand {
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> lo;
    std::vector<double> hi;
};

inline constexpr std::size_t kMinBandDraws = 40;

/// Pointwise mean and 2.5 / 97.5 % quantiles of the cumulative sums at the
/// coarse endpoints. Needs at least kMinBandDraws draws.
CdfBand deconv_cdf_band(const PosteriorDraws& draws, int levels);

struct ThetaPosterior {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    /// One theta per reweighted draw.
    std::vector<double> samples;
};

/// Reweights every pi draw by the likelihood of y and summarizes theta | y.
/// MidpointGrid weighs interval j by p(y; midpoint_j) and treats theta as
/// uniform inside it; ExactInterval integrates the likelihood over it.
ThetaPosterior posterior_theta_given_y(const PosteriorDraws& draws, double y, const SequenceLikelihood& lik,
                                       ThetaSampling mode, Rng& rng);

/// Interval probabilities of theta | y averaged over the reweighted draws.
std::vector<double> posterior_weights_given_y(const PosteriorDraws& draws, double y, const SequenceLikelihood& lik,
                                              ThetaSampling mode);

/// Posterior mean of theta | y under one fixed step density.
double step_posterior_mean(const Grid& grid, const ProbVector& pi, double y, const SequenceLikelihood& lik,
                           ThetaSampling mode);

struct FdrCurve {
    std::vector<double> y;
    std::vector<double> fdr;
    std::vector<double> Fdr;
};

enum class FdrAveraging {
    /// Average the per-draw ratios.
    MeanOfRatios,
    /// Ratio of the draw-averaged numerator and denominator.
    RatioOfMeans,
};

/// Local and tail false discovery rates under Normal(theta, sd) noise with the
/// mass of each interval placed at its midpoint; theta <= 0 is null.
FdrCurve fdr_curves(const PosteriorDraws& draws, double sd, std::span<const double> points,
                    FdrAveraging averaging = FdrAveraging::MeanOfRatios);

/// Same for a fixed discrete mixing distribution.
FdrCurve fdr_curves(const DiscreteMixture& mixture, double sd, std::span<const double> points);

inline constexpr double kNoRejection = std::numeric_limits<double>::infinity();

/// Smallest evaluation point with Fdr <= alpha, or kNoRejection.
double fdr_threshold(const FdrCurve& curve, double alpha);

/// Sorted distinct observations merged with a regular grid of the given step
/// over [min(y), max(y)].
std::vector<double> threshold_points(std::span<const double> y, double step);

/// Highest-density set of grid intervals holding at least `level` of the mass,
/// as a sorted union of disjoint [lo, hi] pieces.
std::vector<std::pair<double, double>> hpd_interval(const Grid& grid, std::span<const double> weights, double level);

struct SelectedEstimate {
    std::size_t index;
    double mean;
};

/// Posterior means of theta_i | y_i for every i with y_i >= cutoff.
std::vector<SelectedEstimate> selective_point_estimates(const PosteriorDraws& draws, std::span<const double> y,
                                                        double cutoff, const SequenceLikelihood& lik,
                                                        ThetaSampling mode);

}  // namespace hbeta
