#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "hbeta/random.hpp"

namespace hbeta {

/// Observation model p(y; theta) for the sequence case.
class SequenceLikelihood {
public:
    virtual ~SequenceLikelihood() = default;

    virtual double loglik(double y, double theta) const = 0;
    /// Integral of p(y; theta) d theta over [lo, hi].
    virtual double interval_mass(double y, double lo, double hi) const = 0;
    /// Integral of theta p(y; theta) d theta over [lo, hi] divided by the mass.
    /// Falls back to the midpoint when the mass underflows.
    virtual double interval_mean(double y, double lo, double hi) const = 0;
    /// Draw theta on [lo, hi] with density proportional to p(y; theta).
    virtual double sample_within(double y, double lo, double hi, Rng& rng) const = 0;
    /// Round-trippable descriptor, e.g. "normal:0.1" or "poisson".
    virtual std::string describe() const = 0;
};

/// Y ~ N(theta, sd^2).
class NormalKnownSd final : public SequenceLikelihood {
public:
    explicit NormalKnownSd(double sd);

    double sd() const { return sd_; }
    double loglik(double y, double theta) const override;
    double interval_mass(double y, double lo, double hi) const override;
    double interval_mean(double y, double lo, double hi) const override;
    double sample_within(double y, double lo, double hi, Rng& rng) const override;
    std::string describe() const override;

private:
    double sd_;
};

/// Y ~ Poisson(theta). Interval integrals use midpoint quadrature.
class PoissonLik final : public SequenceLikelihood {
public:
    explicit PoissonLik(int sub_points = 16);

    int sub_points() const { return sub_points_; }
    double loglik(double y, double theta) const override;
    double interval_mass(double y, double lo, double hi) const override;
    double interval_mean(double y, double lo, double hi) const override;
    double sample_within(double y, double lo, double hi, Rng& rng) const override;
    std::string describe() const override;

private:
    int sub_points_;
};

/// Parses "normal:SD" or "poisson" (optionally "poisson:SUBPOINTS").
std::unique_ptr<SequenceLikelihood> parse_likelihood(std::string_view spec);

// Standard normal helpers.
double normal_pdf(double z);
double normal_cdf(double z);
/// Upper tail 1 - Phi(z), accurate in the far tail.
double normal_sf(double z);
/// log(1 - Phi(z)) without underflow for large z.
double log_normal_sf(double z);
/// Phi(b) - Phi(a) for a <= b, computed in the tail that keeps precision.
double normal_prob_between(double a, double b);
double normal_quantile(double p);

}  // namespace hbeta
