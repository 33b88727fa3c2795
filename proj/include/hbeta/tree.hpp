#pragma once

// The hierarchical Beta tree: grids, split variates, leaf probabilities,
// node counts and the conjugate no-noise posterior.
//
// Indexing: levels are 1-based (1..L) as in the model; node and interval
// indices inside a level are 0-based. Interval j of a grid is
// [a_j, a_{j+1}) for j < I-1 and the last interval is closed on the right.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hbeta/random.hpp"

namespace hbeta {

inline constexpr int kMaxLevels = 30;

/// Ordered endpoints a_0 < a_1 < ... < a_I with I = 2^L.
class Grid {
public:
    /// Validates strictly increasing endpoints and a dyadic interval count.
    explicit Grid(std::vector<double> endpoints);

    /// a_i = lo + i (hi - lo) / 2^L.
    static Grid regular(double lo, double hi, int levels);

    int levels() const { return levels_; }
    std::size_t intervals() const { return endpoints_.size() - 1; }
    double lo() const { return endpoints_.front(); }
    double hi() const { return endpoints_.back(); }
    double endpoint(std::size_t i) const { return endpoints_[i]; }
    double width(std::size_t j) const { return endpoints_[j + 1] - endpoints_[j]; }
    double midpoint(std::size_t j) const { return 0.5 * (endpoints_[j] + endpoints_[j + 1]); }
    std::span<const double> endpoints() const { return endpoints_; }
    std::vector<double> midpoints() const;
    bool contains(double theta) const { return theta >= lo() && theta <= hi(); }

    /// Leaf index of theta under the half-open convention. Requires contains(theta).
    std::size_t locate(double theta) const;

    bool operator==(const Grid&) const = default;

private:
    std::vector<double> endpoints_;
    int levels_ = 0;
};

/// Split variates phi[l][j], l = 1..L, j = 0..2^{l-1}-1, stored level by level.
class PhiTree {
public:
    /// All entries set to 1/2.
    explicit PhiTree(int levels);
    /// Level-major flat layout of length 2^L - 1; entries must lie in (0, 1).
    PhiTree(int levels, std::vector<double> flat);

    int levels() const { return levels_; }
    std::size_t size() const { return phi_.size(); }
    double at(int level, std::size_t j) const { return phi_[offset(level) + j]; }
    void set(int level, std::size_t j, double value);
    std::span<const double> flat() const { return phi_; }

    static std::size_t offset(int level) { return (std::size_t{1} << (level - 1)) - 1; }

private:
    int levels_;
    std::vector<double> phi_;
};

/// Leaf probabilities pi_L (length 2^L). Coarser levels are derived on demand.
class ProbVector {
public:
    ProbVector() = default;
    /// Validates length 2^L, nonnegativity and unit sum within 1e-12.
    explicit ProbVector(std::vector<double> leaves);

    static ProbVector uniform(int levels);
    /// Divides nonnegative weights (length 2^L, positive sum) by their sum.
    static ProbVector normalized(std::vector<double> weights);

    int levels() const { return levels_; }
    std::size_t size() const { return pi_.size(); }
    double operator[](std::size_t j) const { return pi_[j]; }
    std::span<const double> values() const { return pi_; }

    /// Level-l probabilities pi_{l,.} (1 <= l <= L) by block partial sums.
    std::vector<double> level(int l) const;
    /// Cumulative sums Sigma_0 = 0, ..., Sigma_I.
    std::vector<double> cumulative() const;

    bool operator==(const ProbVector&) const = default;

private:
    ProbVector(int levels, std::vector<double> leaves, bool) : pi_(std::move(leaves)), levels_(levels) {}
    std::vector<double> pi_;
    int levels_ = 0;
};

/// N[l][k] for l = 1..L, k = 0..2^l-1.
class NodeCounts {
public:
    /// Builds every level from the leaf counts N[L][.] (length 2^L).
    NodeCounts(int levels, std::vector<std::uint64_t> leaf_counts);

    int levels() const { return levels_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t at(int level, std::size_t k) const { return counts_[offset(level) + k]; }
    std::span<const std::uint64_t> level(int l) const {
        return {counts_.data() + offset(l), std::size_t{1} << l};
    }

    static std::size_t offset(int level) { return (std::size_t{1} << level) - 2; }

private:
    int levels_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> counts_;
};

/// Non-owning view pairing a grid with leaf probabilities of the same depth.
class StepDensity {
public:
    StepDensity(const Grid& grid, const ProbVector& pi);

    const Grid& grid() const { return *grid_; }
    const ProbVector& pi() const { return *pi_; }

private:
    const Grid* grid_;
    const ProbVector* pi_;
};

/// 2^L - 1 independent Beta(1,1) variates.
PhiTree sample_phi_prior(int levels, Rng& rng);

/// pi_{l,2j} = (1 - phi_{l,j}) pi_{l-1,j}, pi_{l,2j+1} = phi_{l,j} pi_{l-1,j}.
ProbVector build_prob_vector(const PhiTree& phi);

/// Block partial sums down to target_levels.
ProbVector marginalize(const ProbVector& pi, int target_levels);

double step_pdf(const StepDensity& dens, double theta);
double step_cdf(const StepDensity& dens, double theta);
/// Leaf by its probability, then uniform inside the leaf.
double sample_theta(const StepDensity& dens, Rng& rng);
/// Leaf index drawn with probability pi_j.
std::size_t sample_leaf(const ProbVector& pi, Rng& rng);

NodeCounts node_counts(std::span<const double> thetas, const Grid& grid);
NodeCounts node_counts_from_leaves(int levels, std::span<const std::size_t> leaves);

/// phi_{l,k} ~ Beta(1 + N_{l,2k+1}, 1 + N_{l,2k}): phi is the right-child share.
PhiTree posterior_phi_no_noise(const NodeCounts& counts, Rng& rng);

/// Exact E(pi_L | Theta): product of (1 + N_child) / (2 + N_parent) along the root path.
ProbVector posterior_mean_pi_no_noise(const NodeCounts& counts);

/// Symmetric Dirichlet(1, ..., 1) over the leaves via normalized exponentials.
ProbVector sample_dirichlet_uniform(int levels, Rng& rng);

}  // namespace hbeta
