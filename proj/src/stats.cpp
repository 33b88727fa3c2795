#include "hbeta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hbeta/errors.hpp"

namespace hbeta {

std::vector<double> quantiles(std::span<const double> values, std::span<const double> probs) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(probs.size());
    const double last = static_cast<double>(sorted.size() - 1);
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile probability outside [0, 1]");
        const double h = last * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        out.push_back(sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]));
    }
    return out;
}

double quantile(std::span<const double> values, double prob) {
    const double p[1] = {prob};
    return quantiles(values, p).front();
}

double mean(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("mean of an empty sample");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) throw InvalidArgument("sd needs at least two values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double log_sum_exp(std::span<const double> values) {
    double top = -std::numeric_limits<double>::infinity();
    for (double v : values) top = std::max(top, v);
    if (!std::isfinite(top)) return top;
    double s = 0.0;
    for (double v : values) s += std::exp(v - top);
    return top + std::log(s);
}

std::vector<double> softmax(std::span<const double> log_weights) {
    double top = -std::numeric_limits<double>::infinity();
    for (double v : log_weights) {
        if (std::isnan(v)) throw DegenerateConditional("NaN log weight");
        top = std::max(top, v);
    }
    if (!std::isfinite(top)) throw DegenerateConditional("every candidate has zero weight");
    std::vector<double> w(log_weights.size());
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = std::exp(log_weights[k] - top);
        s += w[k];
    }
    for (double& v : w) v /= s;
    return w;
}

}  // namespace hbeta
