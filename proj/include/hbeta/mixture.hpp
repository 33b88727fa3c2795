#pragma once

#include <cstddef>
#include <vector>

namespace hbeta {

/// k-point mixing distribution: support sorted ascending, weights summing to 1.
class DiscreteMixture {
public:
    DiscreteMixture() = default;
    /// Sorts by support and validates weights (nonnegative, sum 1 within 1e-10).
    DiscreteMixture(std::vector<double> support, std::vector<double> weights);

    std::size_t size() const { return support_.size(); }
    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& weights() const { return weights_; }
    double mean() const;

    bool operator==(const DiscreteMixture&) const = default;

private:
    std::vector<double> support_;
    std::vector<double> weights_;
};

}  // namespace hbeta
