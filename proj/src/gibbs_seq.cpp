#include "hbeta/gibbs_seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hbeta/errors.hpp"
#include "hbeta/parallel.hpp"

namespace hbeta {

std::string to_string(ThetaSampling mode) {
    return mode == ThetaSampling::MidpointGrid ? "midpoint" : "exact";
}

ThetaSampling parse_theta_sampling(const std::string& text) {
    if (text == "midpoint" || text == "midpoint-grid") return ThetaSampling::MidpointGrid;
    if (text == "exact" || text == "exact-interval") return ThetaSampling::ExactInterval;
    throw InvalidArgument("unknown theta sampling mode '" + text + "' (midpoint | exact)");
}

void ChainConfig::validate() const {
    if (iterations < 1) throw InvalidArgument("iterations must be positive");
    if (burn_in >= iterations) throw InvalidArgument("burn-in must be smaller than iterations");
    if (chains < 1) throw InvalidArgument("need at least one chain");
}

ChainConfig make_chain_config(std::size_t iterations, std::size_t chains, std::uint64_t seed) {
    ChainConfig cfg;
    cfg.iterations = iterations;
    cfg.burn_in = iterations / 3;
    cfg.chains = chains;
    cfg.seed = seed;
    return cfg;
}

std::span<const ProbVector> PosteriorDraws::chain(std::size_t c) const {
    const std::size_t per = config.recorded_per_chain();
    if (c >= config.chains || (c + 1) * per > pi_draws.size()) {
        throw InvalidArgument("chain index out of range");
    }
    return std::span<const ProbVector>(pi_draws).subspan(c * per, per);
}

ProbVector PosteriorDraws::mean_pi() const {
    if (pi_draws.empty()) throw InvalidArgument("no posterior draws");
    std::vector<double> acc(pi_draws.front().size(), 0.0);
    for (const auto& pi : pi_draws) {
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += pi[j];
    }
    return ProbVector::normalized(std::move(acc));
}

namespace {

// Per-interval likelihood factors for one observation, scaled so the
// largest is 1. Returns false when every factor vanishes.
bool likelihood_row(double y, const Grid& grid, const SequenceLikelihood& lik, ThetaSampling mode,
                    std::span<double> row) {
    const std::size_t n = grid.intervals();
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double lw;
        if (mode == ThetaSampling::MidpointGrid) {
            lw = lik.loglik(y, grid.midpoint(j));
        } else {
            const double mass = lik.interval_mass(y, grid.endpoint(j), grid.endpoint(j + 1));
            lw = mass > 0.0 ? std::log(mass / grid.width(j)) : -std::numeric_limits<double>::infinity();
        }
        row[j] = lw;
        top = std::max(top, lw);
    }
    if (!std::isfinite(top)) return false;
    for (std::size_t j = 0; j < n; ++j) row[j] = std::exp(row[j] - top);
    return true;
}

[[noreturn]] void throw_degenerate(double y, std::size_t index) {
    std::ostringstream msg;
    msg << "observation " << index << " (value " << y
        << ") has zero conditional weight on every grid interval";
    throw DegenerateConditional(msg.str());
}

double draw_within(double y, std::size_t j, const Grid& grid, const SequenceLikelihood& lik,
                   ThetaSampling mode, Rng& rng) {
    if (mode == ThetaSampling::MidpointGrid) return grid.endpoint(j) + rng.uniform() * grid.width(j);
    return lik.sample_within(y, grid.endpoint(j), grid.endpoint(j + 1), rng);
}

// Observations grouped by distinct value so each group's cumulative
// weights are built once per sweep.
struct Groups {
    std::vector<double> values;
    std::vector<std::size_t> group_of;
    std::vector<std::size_t> first_index;
};

Groups group_observations(std::span<const double> y) {
    Groups g;
    g.values.assign(y.begin(), y.end());
    std::sort(g.values.begin(), g.values.end());
    g.values.erase(std::unique(g.values.begin(), g.values.end()), g.values.end());
    g.group_of.resize(y.size());
    g.first_index.assign(g.values.size(), y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto it = std::lower_bound(g.values.begin(), g.values.end(), y[i]);
        const auto k = static_cast<std::size_t>(it - g.values.begin());
        g.group_of[i] = k;
        g.first_index[k] = std::min(g.first_index[k], i);
    }
    return g;
}

constexpr std::size_t kMaxCachedKernel = std::size_t{1} << 26;

}  // namespace

double sample_theta_conditional(double y, const ProbVector& pi, const Grid& grid,
                                const SequenceLikelihood& lik, ThetaSampling mode, Rng& rng) {
    if (pi.size() != grid.intervals()) throw InvalidArgument("grid and pi depths differ");
    std::vector<double> row(grid.intervals());
    if (!likelihood_row(y, grid, lik, mode, row)) throw_degenerate(y, 0);
    double total = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] *= pi[j];
        total += row[j];
    }
    if (!(total > 0.0) || !std::isfinite(total)) throw_degenerate(y, 0);
    double u = rng.uniform() * total;
    std::size_t pick = row.size() - 1;
    for (std::size_t j = 0; j < row.size(); ++j) {
        u -= row[j];
        if (u < 0.0 && row[j] > 0.0) {
            pick = j;
            break;
        }
    }
    while (row[pick] == 0.0 && pick > 0) --pick;
    return draw_within(y, pick, grid, lik, mode, rng);
}

PosteriorDraws run_chain_seq(std::span<const double> y, const Grid& grid, const SequenceLikelihood& lik,
                             const ChainConfig& cfg) {
    cfg.validate();
    if (y.empty()) throw InvalidArgument("run_chain_seq: no observations");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) {
            throw InvalidArgument("observation " + std::to_string(i) + " is not finite");
        }
    }

    const std::size_t intervals = grid.intervals();
    const int levels = grid.levels();
    const Groups groups = group_observations(y);
    const std::size_t n_groups = groups.values.size();

    const bool cache = n_groups * intervals <= kMaxCachedKernel;
    std::vector<double> kernel;
    if (cache) {
        kernel.resize(n_groups * intervals);
        for (std::size_t g = 0; g < n_groups; ++g) {
            std::span<double> row(kernel.data() + g * intervals, intervals);
            if (!likelihood_row(groups.values[g], grid, lik, cfg.mode, row)) {
                throw_degenerate(groups.values[g], groups.first_index[g]);
            }
        }
    }

    const std::size_t per_chain = cfg.recorded_per_chain();
    std::vector<std::vector<ProbVector>> chain_pi(cfg.chains);
    std::vector<std::vector<std::vector<double>>> chain_theta(cfg.chains);

    parallel_for(cfg.chains, [&](std::size_t c) {
        Rng rng(cfg.seed, c);
        ProbVector pi = sample_dirichlet_uniform(levels, rng);
        std::vector<double> row_buf(cache ? 0 : intervals);
        std::vector<double> cum(n_groups * intervals);
        std::vector<double> totals(n_groups);
        std::vector<std::uint64_t> leaf_counts(intervals);
        std::vector<double> theta(y.size());
        auto& out_pi = chain_pi[c];
        out_pi.reserve(per_chain);

        for (std::size_t it = 0; it < cfg.iterations; ++it) {
            for (std::size_t g = 0; g < n_groups; ++g) {
                const double* row;
                if (cache) {
                    row = kernel.data() + g * intervals;
                } else {
                    likelihood_row(groups.values[g], grid, lik, cfg.mode, row_buf);
                    row = row_buf.data();
                }
                double* cg = cum.data() + g * intervals;
                double acc = 0.0;
                for (std::size_t j = 0; j < intervals; ++j) {
                    acc += pi[j] * row[j];
                    cg[j] = acc;
                }
                if (!(acc > 0.0) || !std::isfinite(acc)) {
                    throw_degenerate(groups.values[g], groups.first_index[g]);
                }
                totals[g] = acc;
            }

            std::fill(leaf_counts.begin(), leaf_counts.end(), 0);
            for (std::size_t i = 0; i < y.size(); ++i) {
                const std::size_t g = groups.group_of[i];
                const double* cg = cum.data() + g * intervals;
                const double u = rng.uniform() * totals[g];
                auto j = static_cast<std::size_t>(std::upper_bound(cg, cg + intervals, u) - cg);
                if (j >= intervals) j = intervals - 1;
                // Rounding can put u at the total; back off zero-weight tail intervals.
                while (j > 0 && cg[j] == cg[j - 1]) --j;
                theta[i] = draw_within(y[i], j, grid, lik, cfg.mode, rng);
                ++leaf_counts[j];
            }

            const NodeCounts counts(levels, leaf_counts);
            pi = build_prob_vector(posterior_phi_no_noise(counts, rng));

            if (it >= cfg.burn_in) {
                out_pi.push_back(pi);
                if (cfg.record_theta) chain_theta[c].push_back(theta);
            }
        }
    });

    PosteriorDraws draws{grid, cfg, lik.describe(), {}, {}};
    draws.pi_draws.reserve(per_chain * cfg.chains);
    for (std::size_t c = 0; c < cfg.chains; ++c) {
        for (auto& p : chain_pi[c]) draws.pi_draws.push_back(std::move(p));
        for (auto& t : chain_theta[c]) draws.theta_draws.push_back(std::move(t));
    }
    return draws;
}

}  // namespace hbeta
