#include "hbeta/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hbeta/errors.hpp"
#include "hbeta/stats.hpp"

namespace hbeta {

namespace {

void require_draws(const PosteriorDraws& draws) {
    if (draws.empty()) throw InvalidArgument("no posterior draws");
}

std::size_t block_size(const Grid& grid, int levels) {
    if (levels < 1 || levels > grid.levels()) {
        throw InvalidArgument("level " + std::to_string(levels) + " not in [1, " + std::to_string(grid.levels()) + "]");
    }
    return std::size_t{1} << (grid.levels() - levels);
}

// Likelihood factor of each interval for one observation, scaled to a
// maximum of 1, plus the within-interval mean of theta.
struct ReweightRow {
    std::vector<double> factor;
    std::vector<double> centre;
};

ReweightRow reweight_row(const Grid& grid, double y, const SequenceLikelihood& lik, ThetaSampling mode) {
    const std::size_t n = grid.intervals();
    ReweightRow row{std::vector<double>(n), std::vector<double>(n)};
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = grid.endpoint(j);
        const double hi = grid.endpoint(j + 1);
        double lw;
        if (mode == ThetaSampling::MidpointGrid) {
            lw = lik.loglik(y, grid.midpoint(j));
            row.centre[j] = grid.midpoint(j);
        } else {
            const double mass = lik.interval_mass(y, lo, hi);
            lw = mass > 0.0 ? std::log(mass / grid.width(j)) : -std::numeric_limits<double>::infinity();
            row.centre[j] = lik.interval_mean(y, lo, hi);
        }
        row.factor[j] = lw;
        top = std::max(top, lw);
    }
    if (!std::isfinite(top)) throw DegenerateConditional("observation has zero likelihood on every interval");
    for (double& f : row.factor) f = std::exp(f - top);
    return row;
}

double reweighted_mean(const ReweightRow& row, const ProbVector& pi) {
    double total = 0.0;
    double first = 0.0;
    for (std::size_t j = 0; j < pi.size(); ++j) {
        const double w = pi[j] * row.factor[j];
        total += w;
        first += w * row.centre[j];
    }
    if (!(total > 0.0)) throw DegenerateConditional("reweighted draw has no mass");
    return first / total;
}

double mean_over_draws(const PosteriorDraws& draws, const ReweightRow& row) {
    double s = 0.0;
    for (const auto& pi : draws.pi_draws) s += reweighted_mean(row, pi);
    return s / static_cast<double>(draws.size());
}

}  // namespace

Grid coarsen(const Grid& grid, int target_levels) {
    const std::size_t block = block_size(grid, target_levels);
    std::vector<double> ends;
    ends.reserve(grid.intervals() / block + 1);
    for (std::size_t i = 0; i <= grid.intervals(); i += block) ends.push_back(grid.endpoint(i));
    return Grid(std::move(ends));
}

DensityEstimate deconv_density(const PosteriorDraws& draws, int levels) {
    require_draws(draws);
    Grid coarse = coarsen(draws.grid, levels);
    const ProbVector mean = marginalize(draws.mean_pi(), levels);
    std::vector<double> mass(mean.values().begin(), mean.values().end());
    std::vector<double> density(mass.size());
    for (std::size_t j = 0; j < mass.size(); ++j) density[j] = mass[j] / coarse.width(j);
    return {std::move(coarse), std::move(mass), std::move(density)};
}

CdfBand deconv_cdf_band(const PosteriorDraws& draws, int levels) {
    if (draws.size() < kMinBandDraws) {
        throw InvalidArgument("a CDF band needs at least " + std::to_string(kMinBandDraws) + " draws, got " +
                              std::to_string(draws.size()));
    }
    const std::size_t block = block_size(draws.grid, levels);
    const std::size_t points = draws.grid.intervals() / block + 1;
    const std::size_t g = draws.size();

    // Column-major [point][draw] of the fine cumulative sums at shared endpoints.
    std::vector<double> sums(points * g);
    for (std::size_t d = 0; d < g; ++d) {
        const auto c = draws.pi_draws[d].cumulative();
        for (std::size_t p = 0; p < points; ++p) sums[p * g + d] = c[p * block];
    }

    CdfBand band;
    const double probs[] = {0.025, 0.975};
    for (std::size_t p = 0; p < points; ++p) {
        const std::span<const double> col(sums.data() + p * g, g);
        const auto q = quantiles(col, probs);
        band.x.push_back(draws.grid.endpoint(p * block));
        band.lo.push_back(q[0]);
        band.hi.push_back(q[1]);
        band.mean.push_back(std::clamp(mean(col), q[0], q[1]));
    }
    return band;
}

ThetaPosterior posterior_theta_given_y(const PosteriorDraws& draws, double y, const SequenceLikelihood& lik,
                                       ThetaSampling mode, Rng& rng) {
    require_draws(draws);
    const Grid& grid = draws.grid;
    const ReweightRow row = reweight_row(grid, y, lik, mode);
    ThetaPosterior out;
    out.samples.reserve(draws.size());
    std::vector<double> w(grid.intervals());
    double mean_acc = 0.0;
    for (const auto& pi : draws.pi_draws) {
        double total = 0.0;
        double first = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            w[j] = pi[j] * row.factor[j];
            total += w[j];
            first += w[j] * row.centre[j];
        }
        if (!(total > 0.0)) throw DegenerateConditional("reweighted draw has no mass");
        mean_acc += first / total;
        const std::size_t j = draw_categorical(std::span<const double>(w), total, rng);
        out.samples.push_back(mode == ThetaSampling::MidpointGrid
                                  ? grid.endpoint(j) + rng.uniform() * grid.width(j)
                                  : lik.sample_within(y, grid.endpoint(j), grid.endpoint(j + 1), rng));
    }
    out.mean = mean_acc / static_cast<double>(draws.size());
    const double probs[] = {0.025, 0.975};
    const auto q = quantiles(out.samples, probs);
    out.lo = q[0];
    out.hi = q[1];
    return out;
}

std::vector<double> posterior_weights_given_y(const PosteriorDraws& draws, double y, const SequenceLikelihood& lik,
                                              ThetaSampling mode) {
    require_draws(draws);
    const ReweightRow row = reweight_row(draws.grid, y, lik, mode);
    std::vector<double> acc(draws.grid.intervals(), 0.0);
    std::vector<double> w(acc.size());
    for (const auto& pi : draws.pi_draws) {
        double total = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            w[j] = pi[j] * row.factor[j];
            total += w[j];
        }
        if (!(total > 0.0)) throw DegenerateConditional("reweighted draw has no mass");
        for (std::size_t j = 0; j < w.size(); ++j) acc[j] += w[j] / total;
    }
    for (double& a : acc) a /= static_cast<double>(draws.size());
    return acc;
}

double step_posterior_mean(const Grid& grid, const ProbVector& pi, double y, const SequenceLikelihood& lik,
                           ThetaSampling mode) {
    return reweighted_mean(reweight_row(grid, y, lik, mode), pi);
}

// ---------------------------------------------------------------- fdr

namespace {

// Null atoms are those at or below zero. For each evaluation point the
// kernel values exp(log k_j - max_j log k_j) are shared by every weight
// vector; a vector whose scaled denominator underflows is redone in logs.
struct KernelRow {
    std::vector<double> local;
    std::vector<double> tail;
    std::vector<double> log_local;
    std::vector<double> log_tail;
};

KernelRow kernel_row(std::span<const double> atoms, double y, double sd) {
    const std::size_t n = atoms.size();
    KernelRow k{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    double top_l = -std::numeric_limits<double>::infinity();
    double top_t = top_l;
    for (std::size_t j = 0; j < n; ++j) {
        const double z = (y - atoms[j]) / sd;
        k.log_local[j] = -0.5 * z * z;
        k.log_tail[j] = log_normal_sf(z);
        top_l = std::max(top_l, k.log_local[j]);
        top_t = std::max(top_t, k.log_tail[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        k.local[j] = std::exp(k.log_local[j] - top_l);
        k.tail[j] = std::exp(k.log_tail[j] - top_t);
    }
    return k;
}

struct Ratio {
    double num;
    double den;
};

Ratio scaled_ratio(std::span<const double> w, std::span<const double> kern, std::span<const double> atoms) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double v = w[j] * kern[j];
        den += v;
        if (atoms[j] <= 0.0) num += v;
    }
    return {num, den};
}

// Ratio computed in logs for weights whose scaled denominator underflowed.
double log_ratio(std::span<const double> w, std::span<const double> log_kern, std::span<const double> atoms) {
    std::vector<double> all;
    std::vector<double> null;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (!(w[j] > 0.0)) continue;
        const double v = std::log(w[j]) + log_kern[j];
        all.push_back(v);
        if (atoms[j] <= 0.0) null.push_back(v);
    }
    const double den = log_sum_exp(all);
    if (!std::isfinite(den)) return 1.0;
    return std::clamp(std::exp(log_sum_exp(null) - den), 0.0, 1.0);
}

double ratio_of(const Ratio& r) { return r.den > 0.0 ? std::clamp(r.num / r.den, 0.0, 1.0) : 1.0; }

FdrCurve fdr_core(std::span<const double> atoms, const std::vector<std::span<const double>>& weights, double sd,
                  std::span<const double> points, FdrAveraging averaging) {
    if (!(sd > 0.0)) throw InvalidArgument("noise sd must be positive");
    FdrCurve curve;
    curve.y.assign(points.begin(), points.end());
    curve.fdr.resize(points.size());
    curve.Fdr.resize(points.size());
    const double g = static_cast<double>(weights.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (!std::isfinite(points[p])) throw InvalidArgument("fdr evaluation points must be finite");
        const KernelRow k = kernel_row(atoms, points[p], sd);
        double acc_l = 0.0, acc_t = 0.0;
        double num_l = 0.0, den_l = 0.0, num_t = 0.0, den_t = 0.0;
        bool underflow_l = false, underflow_t = false;
        for (const auto& w : weights) {
            const Ratio rl = scaled_ratio(w, k.local, atoms);
            const Ratio rt = scaled_ratio(w, k.tail, atoms);
            if (averaging == FdrAveraging::MeanOfRatios) {
                acc_l += rl.den > 1e-280 ? ratio_of(rl) : log_ratio(w, k.log_local, atoms);
                acc_t += rt.den > 1e-280 ? ratio_of(rt) : log_ratio(w, k.log_tail, atoms);
            } else {
                num_l += rl.num;
                den_l += rl.den;
                num_t += rt.num;
                den_t += rt.den;
                underflow_l = underflow_l || !(rl.den > 1e-280);
                underflow_t = underflow_t || !(rt.den > 1e-280);
            }
        }
        if (averaging == FdrAveraging::MeanOfRatios) {
            curve.fdr[p] = std::clamp(acc_l / g, 0.0, 1.0);
            curve.Fdr[p] = std::clamp(acc_t / g, 0.0, 1.0);
        } else {
            curve.fdr[p] = ratio_of({num_l, den_l});
            curve.Fdr[p] = ratio_of({num_t, den_t});
            if (underflow_l && !(den_l > 1e-280)) curve.fdr[p] = 1.0;
            if (underflow_t && !(den_t > 1e-280)) curve.Fdr[p] = 1.0;
        }
    }
    return curve;
}

}  // namespace

FdrCurve fdr_curves(const PosteriorDraws& draws, double sd, std::span<const double> points, FdrAveraging averaging) {
    require_draws(draws);
    const std::vector<double> atoms = draws.grid.midpoints();
    std::vector<std::span<const double>> w;
    w.reserve(draws.size());
    for (const auto& pi : draws.pi_draws) w.push_back(pi.values());
    return fdr_core(atoms, w, sd, points, averaging);
}

FdrCurve fdr_curves(const DiscreteMixture& mixture, double sd, std::span<const double> points) {
    if (mixture.size() == 0) throw InvalidArgument("empty mixture");
    const std::vector<std::span<const double>> w{std::span<const double>(mixture.weights())};
    return fdr_core(mixture.support(), w, sd, points, FdrAveraging::MeanOfRatios);
}

double fdr_threshold(const FdrCurve& curve, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (curve.y.empty()) throw InvalidArgument("empty fdr curve");
    double best = kNoRejection;
    for (std::size_t p = 0; p < curve.y.size(); ++p) {
        if (curve.Fdr[p] <= alpha) best = std::min(best, curve.y[p]);
    }
    return best;
}

std::vector<double> threshold_points(std::span<const double> y, double step) {
    if (y.empty()) return {};
    if (!(step > 0.0)) throw InvalidArgument("threshold grid step must be positive");
    std::vector<double> pts(y.begin(), y.end());
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const auto n = static_cast<std::size_t>(std::floor((*hi - *lo) / step));
    for (std::size_t k = 0; k <= n; ++k) pts.push_back(*lo + static_cast<double>(k) * step);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<std::pair<double, double>> hpd_interval(const Grid& grid, std::span<const double> weights, double level) {
    if (weights.size() != grid.intervals()) throw InvalidArgument("one weight per grid interval required");
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("credible level must lie in (0, 1)");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("weights have no mass");

    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return weights[a] / grid.width(a) > weights[b] / grid.width(b);
    });
    std::vector<bool> chosen(weights.size(), false);
    double acc = 0.0;
    for (std::size_t j : order) {
        chosen[j] = true;
        acc += weights[j] / total;
        if (acc >= level - 1e-12) break;
    }

    std::vector<std::pair<double, double>> pieces;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
        if (!chosen[j]) continue;
        if (!pieces.empty() && pieces.back().second == grid.endpoint(j)) {
            pieces.back().second = grid.endpoint(j + 1);
        } else {
            pieces.emplace_back(grid.endpoint(j), grid.endpoint(j + 1));
        }
    }
    return pieces;
}

std::vector<SelectedEstimate> selective_point_estimates(const PosteriorDraws& draws, std::span<const double> y,
                                                        double cutoff, const SequenceLikelihood& lik,
                                                        ThetaSampling mode) {
    std::vector<SelectedEstimate> out;
    std::map<double, double> cache;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] >= cutoff)) continue;
        require_draws(draws);
        auto it = cache.find(y[i]);
        if (it == cache.end()) {
            it = cache.emplace(y[i], mean_over_draws(draws, reweight_row(draws.grid, y[i], lik, mode))).first;
        }
        out.push_back({i, it->second});
    }
    return out;
}

}  // namespace hbeta
