#pragma once

#include <span>
#include <vector>

namespace hbeta {

/// Linear-interpolation sample quantile (R type 7). Copies and partially sorts.
double quantile(std::span<const double> values, double prob);
/// Several quantiles of one sample, sorting once.
std::vector<double> quantiles(std::span<const double> values, std::span<const double> probs);
double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> values);
/// log(sum(exp(values))); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);
/// exp(values - max) normalized to sum 1. Throws DegenerateConditional when all are -inf.
std::vector<double> softmax(std::span<const double> log_weights);
/// Index drawn proportionally to nonnegative weights summing to total.
template <class Rng>
std::size_t draw_categorical(std::span<const double> weights, double total, Rng& rng) {
    double u = rng.uniform() * total;
    std::size_t last = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] > 0.0) {
            last = k;
            u -= weights[k];
            if (u < 0.0) return k;
        }
    }
    return last;
}

}  // namespace hbeta
