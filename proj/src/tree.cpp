#include "hbeta/tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "hbeta/errors.hpp"

namespace hbeta {

namespace {

int dyadic_levels(std::size_t count, const char* what) {
    if (count < 2 || (count & (count - 1)) != 0) {
        throw InvalidArgument(std::string(what) + ": size " + std::to_string(count) +
                              " is not a power of two >= 2");
    }
    const int levels = std::countr_zero(count);
    if (levels > kMaxLevels) {
        throw InvalidArgument(std::string(what) + ": more than 2^30 leaves");
    }
    return levels;
}

void check_levels(int levels) {
    if (levels < 1 || levels > kMaxLevels) {
        throw InvalidArgument("levels must be in [1, " + std::to_string(kMaxLevels) + "], got " +
                              std::to_string(levels));
    }
}

}  // namespace

// ---------------------------------------------------------------- Grid

Grid::Grid(std::vector<double> endpoints) : endpoints_(std::move(endpoints)) {
    if (endpoints_.size() < 3) {
        throw InvalidArgument("grid needs at least 3 endpoints");
    }
    levels_ = dyadic_levels(endpoints_.size() - 1, "grid interval count");
    for (std::size_t i = 0; i < endpoints_.size(); ++i) {
        if (!std::isfinite(endpoints_[i])) {
            throw InvalidArgument("grid endpoint " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(endpoints_[i] > endpoints_[i - 1])) {
            throw InvalidArgument("grid endpoints must be strictly increasing (index " +
                                  std::to_string(i) + ")");
        }
    }
}

Grid Grid::regular(double lo, double hi, int levels) {
    check_levels(levels);
    if (!(hi > lo)) throw InvalidArgument("grid range must satisfy lo < hi");
    const std::size_t n = std::size_t{1} << levels;
    std::vector<double> a(n + 1);
    const double h = (hi - lo) / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) a[i] = lo + static_cast<double>(i) * h;
    a[n] = hi;
    return Grid(std::move(a));
}

std::vector<double> Grid::midpoints() const {
    std::vector<double> mid(intervals());
    for (std::size_t j = 0; j < mid.size(); ++j) mid[j] = midpoint(j);
    return mid;
}

std::size_t Grid::locate(double theta) const {
    if (!contains(theta)) {
        std::ostringstream msg;
        msg << "value " << theta << " outside grid support [" << lo() << ", " << hi() << "]";
        throw OutOfSupport(msg.str());
    }
    const auto it = std::upper_bound(endpoints_.begin(), endpoints_.end(), theta);
    const auto idx = static_cast<std::size_t>(it - endpoints_.begin());
    return std::min(idx - 1, intervals() - 1);
}

// ---------------------------------------------------------------- PhiTree

PhiTree::PhiTree(int levels) : levels_(levels) {
    check_levels(levels);
    phi_.assign((std::size_t{1} << levels) - 1, 0.5);
}

PhiTree::PhiTree(int levels, std::vector<double> flat) : levels_(levels), phi_(std::move(flat)) {
    check_levels(levels);
    if (phi_.size() != (std::size_t{1} << levels) - 1) {
        throw InvalidArgument("PhiTree needs 2^L - 1 entries");
    }
    for (std::size_t i = 0; i < phi_.size(); ++i) {
        if (!(phi_[i] > 0.0 && phi_[i] < 1.0)) {
            throw InvalidArgument("phi entry " + std::to_string(i) + " not in (0, 1)");
        }
    }
}

void PhiTree::set(int level, std::size_t j, double value) {
    if (!(value > 0.0 && value < 1.0)) throw InvalidArgument("phi value not in (0, 1)");
    phi_.at(offset(level) + j) = value;
}

// ---------------------------------------------------------------- ProbVector

ProbVector::ProbVector(std::vector<double> leaves) : pi_(std::move(leaves)) {
    levels_ = dyadic_levels(pi_.size(), "probability vector length");
    double sum = 0.0;
    for (std::size_t j = 0; j < pi_.size(); ++j) {
        if (!(pi_[j] >= 0.0) || !std::isfinite(pi_[j])) {
            throw InvalidArgument("probability " + std::to_string(j) + " is negative or not finite");
        }
        sum += pi_[j];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvalidArgument("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
}

ProbVector ProbVector::uniform(int levels) {
    check_levels(levels);
    const std::size_t n = std::size_t{1} << levels;
    return ProbVector(levels, std::vector<double>(n, 1.0 / static_cast<double>(n)), true);
}

ProbVector ProbVector::normalized(std::vector<double> weights) {
    const int levels = dyadic_levels(weights.size(), "probability vector length");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("negative or NaN weight");
        sum += w;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) throw InvalidArgument("weights have no finite positive mass");
    for (double& w : weights) w /= sum;
    return ProbVector(levels, std::move(weights), true);
}

std::vector<double> ProbVector::level(int l) const {
    if (l < 1 || l > levels_) throw InvalidArgument("level out of range");
    const std::size_t n = std::size_t{1} << l;
    const std::size_t block = pi_.size() / n;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t b = 0; b < block; ++b) s += pi_[i * block + b];
        out[i] = s;
    }
    return out;
}

std::vector<double> ProbVector::cumulative() const {
    std::vector<double> c(pi_.size() + 1, 0.0);
    for (std::size_t j = 0; j < pi_.size(); ++j) c[j + 1] = c[j] + pi_[j];
    return c;
}

// ---------------------------------------------------------------- NodeCounts

NodeCounts::NodeCounts(int levels, std::vector<std::uint64_t> leaf_counts) : levels_(levels) {
    check_levels(levels);
    if (leaf_counts.size() != (std::size_t{1} << levels)) {
        throw InvalidArgument("leaf counts need 2^L entries");
    }
    counts_.assign((std::size_t{1} << (levels + 1)) - 2, 0);
    std::copy(leaf_counts.begin(), leaf_counts.end(), counts_.begin() + static_cast<std::ptrdiff_t>(offset(levels)));
    for (int l = levels - 1; l >= 1; --l) {
        const std::size_t n = std::size_t{1} << l;
        for (std::size_t k = 0; k < n; ++k) {
            counts_[offset(l) + k] = counts_[offset(l + 1) + 2 * k] + counts_[offset(l + 1) + 2 * k + 1];
        }
    }
    total_ = counts_[0] + counts_[1];
}

// ---------------------------------------------------------------- StepDensity

StepDensity::StepDensity(const Grid& grid, const ProbVector& pi) : grid_(&grid), pi_(&pi) {
    if (grid.intervals() != pi.size()) {
        throw InvalidArgument("grid and probability vector have different depths");
    }
}

// ---------------------------------------------------------------- operations

PhiTree sample_phi_prior(int levels, Rng& rng) {
    check_levels(levels);
    std::vector<double> flat((std::size_t{1} << levels) - 1);
    for (double& v : flat) v = rng.uniform_open();
    return PhiTree(levels, std::move(flat));
}

ProbVector build_prob_vector(const PhiTree& phi) {
    const int levels = phi.levels();
    std::vector<double> cur{1.0};
    std::vector<double> next;
    for (int l = 1; l <= levels; ++l) {
        next.resize(cur.size() * 2);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            const double p = phi.at(l, j);
            next[2 * j] = (1.0 - p) * cur[j];
            next[2 * j + 1] = p * cur[j];
        }
        cur.swap(next);
    }
    return ProbVector::normalized(std::move(cur));
}

ProbVector marginalize(const ProbVector& pi, int target_levels) {
    if (target_levels < 1 || target_levels > pi.levels()) {
        throw InvalidArgument("target level " + std::to_string(target_levels) + " not in [1, " +
                              std::to_string(pi.levels()) + "]");
    }
    if (target_levels == pi.levels()) return pi;
    return ProbVector::normalized(pi.level(target_levels));
}

double step_pdf(const StepDensity& dens, double theta) {
    const Grid& g = dens.grid();
    if (!g.contains(theta)) return 0.0;
    const std::size_t j = g.locate(theta);
    return dens.pi()[j] / g.width(j);
}

double step_cdf(const StepDensity& dens, double theta) {
    const Grid& g = dens.grid();
    if (theta <= g.lo()) return 0.0;
    if (theta >= g.hi()) return 1.0;
    const std::size_t j = g.locate(theta);
    double below = 0.0;
    for (std::size_t i = 0; i < j; ++i) below += dens.pi()[i];
    const double frac = (theta - g.endpoint(j)) / g.width(j);
    return std::clamp(below + frac * dens.pi()[j], 0.0, 1.0);
}

std::size_t sample_leaf(const ProbVector& pi, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < pi.size(); ++j) {
        if (pi[j] > 0.0) last_positive = j;
        acc += pi[j];
        if (u < acc) return j;
    }
    return last_positive;
}

double sample_theta(const StepDensity& dens, Rng& rng) {
    const std::size_t j = sample_leaf(dens.pi(), rng);
    const Grid& g = dens.grid();
    return g.endpoint(j) + rng.uniform() * g.width(j);
}

NodeCounts node_counts(std::span<const double> thetas, const Grid& grid) {
    std::vector<std::uint64_t> leaves(grid.intervals(), 0);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!grid.contains(thetas[i])) {
            std::ostringstream msg;
            msg << "observation " << i << " (value " << thetas[i] << ") outside grid support ["
                << grid.lo() << ", " << grid.hi() << "]";
            throw OutOfSupport(msg.str());
        }
        ++leaves[grid.locate(thetas[i])];
    }
    return NodeCounts(grid.levels(), std::move(leaves));
}

NodeCounts node_counts_from_leaves(int levels, std::span<const std::size_t> leaves) {
    check_levels(levels);
    std::vector<std::uint64_t> counts(std::size_t{1} << levels, 0);
    for (std::size_t j : leaves) ++counts.at(j);
    return NodeCounts(levels, std::move(counts));
}

PhiTree posterior_phi_no_noise(const NodeCounts& counts, Rng& rng) {
    const int levels = counts.levels();
    std::vector<double> flat((std::size_t{1} << levels) - 1);
    for (int l = 1; l <= levels; ++l) {
        const auto child = counts.level(l);
        const std::size_t nodes = std::size_t{1} << (l - 1);
        for (std::size_t k = 0; k < nodes; ++k) {
            const double left = static_cast<double>(child[2 * k]);
            const double right = static_cast<double>(child[2 * k + 1]);
            flat[PhiTree::offset(l) + k] = rng.beta(1.0 + right, 1.0 + left);
        }
    }
    return PhiTree(levels, std::move(flat));
}

ProbVector posterior_mean_pi_no_noise(const NodeCounts& counts) {
    const int levels = counts.levels();
    std::vector<double> cur{1.0};
    std::vector<double> next;
    for (int l = 1; l <= levels; ++l) {
        const auto child = counts.level(l);
        next.resize(cur.size() * 2);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            const double left = static_cast<double>(child[2 * j]);
            const double right = static_cast<double>(child[2 * j + 1]);
            const double parent = left + right;
            next[2 * j] = cur[j] * (1.0 + left) / (2.0 + parent);
            next[2 * j + 1] = cur[j] * (1.0 + right) / (2.0 + parent);
        }
        cur.swap(next);
    }
    return ProbVector::normalized(std::move(cur));
}

ProbVector sample_dirichlet_uniform(int levels, Rng& rng) {
    check_levels(levels);
    std::vector<double> w(std::size_t{1} << levels);
    for (double& v : w) v = rng.exponential();
    return ProbVector::normalized(std::move(w));
}

}  // namespace hbeta
