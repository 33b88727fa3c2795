#include "hbeta/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "hbeta/errors.hpp"
#include "hbeta/likelihood.hpp"
#include "hbeta/parallel.hpp"
#include "hbeta/random.hpp"
#include "hbeta/stats.hpp"

namespace hbeta {

DiscreteMixture::DiscreteMixture(std::vector<double> support, std::vector<double> weights) {
    if (support.size() != weights.size() || support.empty()) {
        throw InvalidArgument("mixture needs matching, nonempty support and weights");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < support.size(); ++j) {
        if (!std::isfinite(support[j])) throw InvalidArgument("mixture support must be finite");
        if (!(weights[j] >= 0.0)) throw InvalidArgument("mixture weights must be nonnegative");
        total += weights[j];
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("mixture weights must sum to 1");
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    for (std::size_t j : order) {
        support_.push_back(support[j]);
        weights_.push_back(weights[j]);
    }
}

double DiscreteMixture::mean() const {
    double s = 0.0;
    for (std::size_t j = 0; j < support_.size(); ++j) s += support_[j] * weights_[j];
    return s;
}

// ---------------------------------------------------------------- testing

std::vector<std::size_t> bh_procedure(std::span<const double> pvalues, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    for (double p : pvalues) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p-values must lie in [0, 1]");
    }
    const std::size_t m = pvalues.size();
    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    std::sort(sorted.begin(), sorted.end());
    double cut = -1.0;
    for (std::size_t k = m; k >= 1; --k) {
        if (sorted[k - 1] <= static_cast<double>(k) * alpha / static_cast<double>(m)) {
            cut = sorted[k - 1];
            break;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m; ++i) {
        if (pvalues[i] <= cut) out.push_back(i);
    }
    return out;
}

std::vector<double> one_sided_pvalues(std::span<const double> y, double sd) {
    std::vector<double> p(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) p[i] = normal_sf(y[i] / sd);
    return p;
}

namespace {

enum class Kernel { Density, Tail };

double oracle_ratio(std::span<const double> theta, double y, double sd, Kernel kind) {
    if (theta.empty()) throw InvalidArgument("empty parameter vector");
    if (!(sd > 0.0)) throw InvalidArgument("noise sd must be positive");
    std::vector<double> all(theta.size());
    std::vector<double> null;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double z = (y - theta[i]) / sd;
        all[i] = kind == Kernel::Density ? -0.5 * z * z : log_normal_sf(z);
        if (theta[i] <= 0.0) null.push_back(all[i]);
    }
    if (null.empty()) return 0.0;
    if (null.size() == theta.size()) return 1.0;
    return std::clamp(std::exp(log_sum_exp(null) - log_sum_exp(all)), 0.0, 1.0);
}

}  // namespace

double oracle_fdr(std::span<const double> theta, double y, double sd) {
    return oracle_ratio(theta, y, sd, Kernel::Density);
}

double oracle_Fdr(std::span<const double> theta, double y, double sd) {
    return oracle_ratio(theta, y, sd, Kernel::Tail);
}

double oracle_threshold(std::span<const double> theta, double alpha, double sd) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (theta.empty()) throw InvalidArgument("empty parameter vector");
    const auto [mn, mx] = std::minmax_element(theta.begin(), theta.end());
    if (*mx <= 0.0) return std::numeric_limits<double>::infinity();
    double lo = *mn - 40.0 * sd;
    if (oracle_Fdr(theta, lo, sd) <= alpha) return -std::numeric_limits<double>::infinity();
    double hi = *mx + 10.0 * sd;
    while (oracle_Fdr(theta, hi, sd) > alpha) {
        hi += 10.0 * sd;
        if (hi > *mx + 1e4 * sd) return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (oracle_Fdr(theta, mid, sd) > alpha ? lo : hi) = mid;
    }
    return hi;
}

double oracle_posterior_mean(std::span<const double> theta, double y, double sd) {
    if (theta.empty()) throw InvalidArgument("empty parameter vector");
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double z = (y - theta[i]) / sd;
        lw[i] = -0.5 * z * z;
        top = std::max(top, lw[i]);
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double w = std::exp(lw[i] - top);
        num += w * theta[i];
        den += w;
    }
    return num / den;
}

// ---------------------------------------------------------------- Poisson EB

Histogram make_histogram(std::span<const std::uint64_t> values) {
    Histogram h;
    for (std::uint64_t v : values) {
        if (v >= h.size()) h.resize(v + 1, 0);
        ++h[v];
    }
    return h;
}

std::uint64_t histogram_total(const Histogram& h) {
    return std::accumulate(h.begin(), h.end(), std::uint64_t{0});
}

const Histogram& accident_histogram() {
    static const Histogram h{7840, 1317, 239, 42, 14, 4, 4, 1};
    return h;
}

DiscreteMixture simar_mixture() {
    return DiscreteMixture({0.089, 0.580, 3.176, 3.669}, {0.7600, 0.2362, 0.0037, 0.0001});
}

std::vector<std::optional<double>> robbins_poisson(const Histogram& h) {
    std::vector<std::optional<double>> out(h.size());
    for (std::size_t y = 0; y < h.size(); ++y) {
        if (h[y] == 0) continue;
        const double next = y + 1 < h.size() ? static_cast<double>(h[y + 1]) : 0.0;
        out[y] = static_cast<double>(y + 1) * next / static_cast<double>(h[y]);
    }
    return out;
}

namespace {

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double var = 0.0;
};

Moments histogram_moments(const Histogram& h) {
    Moments m;
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t y = 0; y < h.size(); ++y) {
        const double c = static_cast<double>(h[y]);
        m.n += c;
        s += c * static_cast<double>(y);
        s2 += c * static_cast<double>(y) * static_cast<double>(y);
    }
    if (!(m.n > 1.0)) throw InvalidArgument("histogram needs at least two observations");
    m.mean = s / m.n;
    m.var = (s2 - m.n * m.mean * m.mean) / (m.n - 1.0);
    return m;
}

}  // namespace

double negbin_loglik(const Histogram& h, double theta, double r) {
    if (!(theta > 0.0 && r > 0.0)) throw InvalidArgument("negative binomial parameters must be positive");
    double ll = 0.0;
    const double l1 = std::log1p(theta);
    const double lt = std::log(theta);
    for (std::size_t y = 0; y < h.size(); ++y) {
        if (h[y] == 0) continue;
        const double yy = static_cast<double>(y);
        ll += static_cast<double>(h[y]) *
              (std::lgamma(yy + r) - std::lgamma(r) - std::lgamma(yy + 1.0) - r * l1 + yy * (lt - l1));
    }
    return ll;
}

GammaPoissonFit gamma_poisson_moments(const Histogram& h) {
    const Moments m = histogram_moments(h);
    if (!(m.var > m.mean) || !(m.mean > 0.0)) {
        throw InvalidArgument("moment fit needs overdispersed data (variance above the mean)");
    }
    GammaPoissonFit fit;
    fit.theta = m.var / m.mean - 1.0;
    fit.r = m.mean / fit.theta;
    fit.loglik = negbin_loglik(h, fit.theta, fit.r);
    return fit;
}

GammaPoissonFit gamma_poisson_eb(const Histogram& h) {
    const Moments mo = histogram_moments(h);
    if (!(mo.mean > 0.0)) throw InvalidArgument("gamma-Poisson fit needs a positive mean");
    double theta = mo.var > mo.mean ? mo.var / mo.mean - 1.0 : 1.0;
    double r = mo.mean / theta;
    double ll = negbin_loglik(h, theta, r);
    double sy = 0.0;
    for (std::size_t y = 0; y < h.size(); ++y) sy += static_cast<double>(h[y]) * static_cast<double>(y);
    const double n = mo.n;

    constexpr int kMaxIterations = 500;
    for (int it = 1; it <= kMaxIterations; ++it) {
        double dr = -n * std::log1p(theta);
        double drr = 0.0;
        for (std::size_t y = 0; y < h.size(); ++y) {
            if (h[y] == 0) continue;
            const double c = static_cast<double>(h[y]);
            dr += c * (boost::math::digamma(y + r) - boost::math::digamma(r));
            drr += c * (boost::math::trigamma(y + r) - boost::math::trigamma(r));
        }
        const double dt = sy / theta - (sy + n * r) / (1.0 + theta);
        const double dtt = -sy / (theta * theta) + (sy + n * r) / ((1.0 + theta) * (1.0 + theta));
        const double dtr = -n / (1.0 + theta);

        // Derivatives in (log theta, log r).
        const double ga = theta * dt;
        const double gb = r * dr;
        if (std::hypot(ga, gb) <= 1e-8) return {theta, r, ll, it - 1};
        const double haa = theta * theta * dtt + ga;
        const double hbb = r * r * drr + gb;
        const double hab = theta * r * dtr;
        double sa, sb;
        const double det = haa * hbb - hab * hab;
        if (haa < 0.0 && det > 0.0) {
            sa = -(hbb * ga - hab * gb) / det;
            sb = -(haa * gb - hab * ga) / det;
        } else {
            sa = ga / (std::abs(haa) + 1.0);
            sb = gb / (std::abs(hbb) + 1.0);
        }

        double scale = 1.0;
        bool moved = false;
        for (int half = 0; half < 60; ++half, scale *= 0.5) {
            const double t2 = theta * std::exp(scale * sa);
            const double r2 = r * std::exp(scale * sb);
            const double ll2 = negbin_loglik(h, t2, r2);
            if (ll2 >= ll) {
                moved = t2 != theta || r2 != r;
                theta = t2;
                r = r2;
                ll = ll2;
                break;
            }
        }
        if (!moved) return {theta, r, ll, it};
    }
    throw ConvergenceError("gamma-Poisson maximum likelihood did not converge in 500 iterations");
}

double poisson_log_pmf(double y, double rate) {
    if (rate == 0.0) return y == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return y * std::log(rate) - rate - std::lgamma(y + 1.0);
}

double mixture_loglik_poisson(const DiscreteMixture& g, const Histogram& h) {
    double ll = 0.0;
    std::vector<double> terms(g.size());
    for (std::size_t y = 0; y < h.size(); ++y) {
        if (h[y] == 0) continue;
        for (std::size_t j = 0; j < g.size(); ++j) {
            terms[j] = g.weights()[j] > 0.0 ? std::log(g.weights()[j]) + poisson_log_pmf(double(y), g.support()[j])
                                            : -std::numeric_limits<double>::infinity();
        }
        ll += static_cast<double>(h[y]) * log_sum_exp(terms);
    }
    return ll;
}

double mixture_posterior_mean_poisson(const DiscreteMixture& g, double y) {
    for (double s : g.support()) {
        if (s < 0.0) throw InvalidArgument("Poisson mixture support must be nonnegative");
    }
    std::vector<double> lw(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        lw[j] = g.weights()[j] > 0.0 ? std::log(g.weights()[j]) + poisson_log_pmf(y, g.support()[j])
                                     : -std::numeric_limits<double>::infinity();
    }
    const std::vector<double> p = softmax(lw);
    double m = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) m += p[j] * g.support()[j];
    return m;
}

EmResult npmle_em(const Histogram& h, const DiscreteMixture& init, const EmOptions& opts) {
    const std::size_t k = init.size();
    if (k == 0) throw InvalidArgument("EM needs at least one component");
    const double n = static_cast<double>(histogram_total(h));
    if (!(n > 0.0)) throw InvalidArgument("empty histogram");
    std::vector<double> s = init.support();
    std::vector<double> w = init.weights();
    for (double v : s) {
        if (v < 0.0) throw InvalidArgument("Poisson mixture support must be nonnegative");
    }

    std::vector<double> resp(k), mass(k), first(k);
    auto e_step = [&](bool accumulate) {
        double ll = 0.0;
        std::fill(mass.begin(), mass.end(), 0.0);
        std::fill(first.begin(), first.end(), 0.0);
        for (std::size_t y = 0; y < h.size(); ++y) {
            if (h[y] == 0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                resp[j] = w[j] > 0.0 ? std::log(w[j]) + poisson_log_pmf(double(y), s[j])
                                     : -std::numeric_limits<double>::infinity();
            }
            const double lse = log_sum_exp(resp);
            if (!std::isfinite(lse)) throw DegenerateConditional("mixture gives zero probability to y = " + std::to_string(y));
            ll += static_cast<double>(h[y]) * lse;
            if (!accumulate) continue;
            for (std::size_t j = 0; j < k; ++j) {
                const double r = static_cast<double>(h[y]) * std::exp(resp[j] - lse);
                mass[j] += r;
                first[j] += r * static_cast<double>(y);
            }
        }
        return ll;
    };

    EmResult res;
    double ll = e_step(true);
    res.trace.push_back(ll);
    for (int it = 1; it <= opts.max_iterations; ++it) {
        for (std::size_t j = 0; j < k; ++j) {
            w[j] = mass[j] / n;
            if (mass[j] > 0.0) s[j] = first[j] / mass[j];
        }
        const double next = e_step(true);
        res.trace.push_back(next);
        res.iterations = it;
        const double gain = next - ll;
        ll = next;
        if (gain < opts.tolerance) {
            res.converged = true;
            break;
        }
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= total;
    res.mixture = DiscreteMixture(std::move(s), std::move(w));
    res.loglik = ll;
    return res;
}

EmResult npmle_multistart(const Histogram& h, std::size_t k, std::size_t starts, std::uint64_t seed,
                          const EmOptions& opts) {
    if (k == 0 || starts == 0) throw InvalidArgument("need at least one component and one start");
    const std::size_t distinct =
        static_cast<std::size_t>(std::count_if(h.begin(), h.end(), [](std::uint64_t c) { return c > 0; }));
    if (k > distinct) {
        std::cerr << "warning: " << k << " components for " << distinct
                  << " distinct values; support points are expected to collapse\n";
    }
    const double n = static_cast<double>(histogram_total(h));
    auto data_quantile = [&](double p) {
        const double target = p * n;
        double acc = 0.0;
        for (std::size_t y = 0; y < h.size(); ++y) {
            acc += static_cast<double>(h[y]);
            if (acc > target) return static_cast<double>(y);
        }
        return static_cast<double>(h.size() - 1);
    };
    const double top = static_cast<double>(h.size() - 1);

    std::vector<EmResult> results(starts);
    parallel_for(starts, [&](std::size_t st) {
        Rng rng(seed, st);
        std::vector<double> support(k), weights(k);
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double q = data_quantile((static_cast<double>(j) + 0.5) / static_cast<double>(k));
            support[j] = std::clamp(q + rng.uniform() * top * (static_cast<double>(j) + 1.0) / static_cast<double>(k),
                                    0.0, top);
            weights[j] = rng.exponential();
            total += weights[j];
        }
        for (double& v : weights) v /= total;
        results[st] = npmle_em(h, DiscreteMixture(support, weights), opts);
    });

    std::size_t best = 0;
    for (std::size_t st = 1; st < starts; ++st) {
        const auto& a = results[st];
        const auto& b = results[best];
        if (a.loglik > b.loglik || (a.loglik == b.loglik && a.mixture.support() < b.mixture.support())) best = st;
    }
    return results[best];
}

}  // namespace hbeta
