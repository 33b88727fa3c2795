#include "hbeta/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hbeta/errors.hpp"
#include "hbeta/io.hpp"
#include "hbeta/parallel.hpp"
#include "hbeta/stats.hpp"

namespace hbeta::experiments {

namespace {

MethodRates average_rates(const std::vector<sim::SelectionTally>& tallies) {
    MethodRates r;
    for (const auto& t : tallies) {
        r.fdr += t.fdp;
        r.mdr += t.mdr;
        r.rejections += static_cast<double>(t.rejections);
    }
    const auto k = static_cast<double>(tallies.size());
    r.fdr /= k;
    r.mdr /= k;
    r.rejections /= k;
    return r;
}

RiskSummary summarize_losses(const std::vector<double>& losses) {
    RiskSummary s;
    s.risk = mean(losses);
    s.se = losses.size() > 1 ? sample_sd(losses) / std::sqrt(static_cast<double>(losses.size())) : 0.0;
    return s;
}

std::vector<double> histogram_values(const Histogram& h) {
    std::vector<double> y;
    y.reserve(histogram_total(h));
    for (std::size_t v = 0; v < h.size(); ++v) y.insert(y.end(), h[v], static_cast<double>(v));
    return y;
}

}  // namespace

// ---------------------------------------------------------------- normal means

NormalFdrResult normal_fdr_study(const NormalFdrConfig& cfg) {
    if (cfg.rounds == 0) throw InvalidArgument("need at least one round");
    const std::vector<double> theta = sim::gen_normal_means_theta(cfg.seed, cfg.m);
    const Grid grid = Grid::regular(cfg.lo, cfg.hi, cfg.levels);
    const NormalKnownSd lik(1.0);
    const double oracle_cut = oracle_threshold(theta, cfg.alpha);

    struct Round {
        sim::SelectionTally oracle, bh, hbeta;
        double threshold = kNoRejection;
        double mse_hbeta = 0.0, mse_oracle = 0.0, mse_naive = 0.0;
        bool selected = false;
        FdrCurve curve;
    };
    std::vector<Round> rounds(cfg.rounds);

    parallel_for(cfg.rounds, [&](std::size_t k) {
        Round& out = rounds[k];
        const std::vector<double> y = sim::gen_normal_means_round(theta, cfg.seed, k);

        out.oracle = sim::selection_tally(theta, sim::select_above(y, oracle_cut));
        out.bh = sim::selection_tally(theta, bh_procedure(one_sided_pvalues(y), cfg.alpha));

        ChainConfig chain;
        chain.iterations = cfg.iterations;
        chain.burn_in = cfg.burn_in;
        chain.chains = cfg.chains;
        chain.seed = cfg.seed * 1000003ULL + k;
        chain.mode = ThetaSampling::MidpointGrid;
        const PosteriorDraws draws = run_chain_seq(y, grid, lik, chain);

        const std::vector<double> points = threshold_points(y, cfg.threshold_step);
        FdrCurve curve = fdr_curves(draws, 1.0, points);
        out.threshold = fdr_threshold(curve, cfg.alpha);
        const auto selected = sim::select_above(y, out.threshold);
        out.hbeta = sim::selection_tally(theta, selected);

        if (!selected.empty()) {
            const auto est = selective_point_estimates(draws, y, out.threshold, lik, ThetaSampling::MidpointGrid);
            double sh = 0.0, so = 0.0, sn = 0.0;
            for (const auto& e : est) {
                const double t = theta[e.index];
                const double yi = y[e.index];
                sh += (e.mean - t) * (e.mean - t);
                const double o = oracle_posterior_mean(theta, yi);
                so += (o - t) * (o - t);
                sn += (yi - t) * (yi - t);
            }
            const auto n = static_cast<double>(est.size());
            out.mse_hbeta = sh / n;
            out.mse_oracle = so / n;
            out.mse_naive = sn / n;
            out.selected = true;
        }
        if (k == 0) out.curve = std::move(curve);
    });

    NormalFdrResult r;
    r.config = cfg;
    r.oracle_threshold = oracle_cut;
    std::vector<sim::SelectionTally> o, b, h;
    double mh = 0.0, mo = 0.0, mn = 0.0;
    for (const auto& round : rounds) {
        o.push_back(round.oracle);
        b.push_back(round.bh);
        h.push_back(round.hbeta);
        r.hbeta_thresholds.push_back(round.threshold);
        if (round.selected) {
            mh += round.mse_hbeta;
            mo += round.mse_oracle;
            mn += round.mse_naive;
        }
    }
    r.oracle = average_rates(o);
    r.bh = average_rates(b);
    r.hbeta = average_rates(h);
    r.selected_mse_ratio_hbeta = mo > 0.0 ? mh / mo : std::nan("");
    r.selected_mse_ratio_naive = mo > 0.0 ? mn / mo : std::nan("");
    r.first_curve = std::move(rounds.front().curve);

    // Oracle curves on the first-round evaluation points, thinned to the regular grid.
    std::vector<double> grid_points;
    for (double y = cfg.lo; y <= cfg.hi + 1e-9; y += 0.05) grid_points.push_back(y);
    r.oracle_curve.y = grid_points;
    for (double y : grid_points) {
        r.oracle_curve.fdr.push_back(oracle_fdr(theta, y));
        r.oracle_curve.Fdr.push_back(oracle_Fdr(theta, y));
    }
    return r;
}

// ---------------------------------------------------------------- no-noise chain

std::vector<Exa00Row> exa00_table(int max_levels, std::size_t runs, std::uint64_t seed) {
    if (max_levels < 1 || max_levels > kMaxLevels) throw InvalidArgument("levels out of range");
    std::vector<Exa00Row> rows(static_cast<std::size_t>(max_levels));
    parallel_for(rows.size(), [&](std::size_t i) {
        const int levels = static_cast<int>(i) + 1;
        const double p = std::ldexp(1.0, -levels);
        rows[i] = {levels, sim::exa00_study(levels, runs, seed + i), std::sqrt(p * (1.0 - p) / 1000.0) / p};
    });
    return rows;
}

// ---------------------------------------------------------------- exa01

Exa01Result exa01_study(const Exa01Config& cfg) {
    sim::SequenceData data = sim::gen_tn_uniform(cfg.seed, cfg.m);
    const Grid grid = Grid::regular(cfg.lo, cfg.hi, cfg.levels);
    const NormalKnownSd lik(sim::kTnNoiseSd);

    ChainConfig chain;
    chain.iterations = cfg.iterations;
    chain.burn_in = cfg.burn_in;
    chain.chains = cfg.chains;
    chain.seed = cfg.seed;
    chain.mode = cfg.mode;
    PosteriorDraws draws = run_chain_seq(data.y, grid, lik, chain);

    CdfBand band = deconv_cdf_band(draws, cfg.levels);
    CdfBand coarse = deconv_cdf_band(draws, cfg.coarse_levels);
    DensityEstimate density = deconv_density(draws, cfg.levels);
    DensityEstimate coarse_density = deconv_density(draws, cfg.coarse_levels);

    Rng rng(cfg.seed, 1u << 20);
    ThetaPosterior post = posterior_theta_given_y(draws, cfg.query, lik, cfg.mode, rng);

    std::size_t covered = 0;
    for (std::size_t i = 0; i < band.x.size(); ++i) {
        const double truth = sim::tn_uniform_cdf(band.x[i]);
        if (band.lo[i] <= truth + 1e-12 && truth <= band.hi[i] + 1e-12) ++covered;
    }
    const double coverage = static_cast<double>(covered) / static_cast<double>(band.x.size());

    return Exa01Result{cfg,
                       std::move(data),
                       std::move(draws),
                       std::move(band),
                       std::move(coarse),
                       std::move(density),
                       std::move(coarse_density),
                       std::move(post),
                       sim::tn_uniform_true_posterior(cfg.query),
                       coverage};
}

// ---------------------------------------------------------------- Poisson

double step_mixture_loglik_poisson(const Grid& grid, const ProbVector& pi, const Histogram& h) {
    if (pi.size() != grid.intervals()) throw InvalidArgument("grid and pi depths differ");
    const PoissonLik lik(64);
    double ll = 0.0;
    for (std::size_t y = 0; y < h.size(); ++y) {
        if (h[y] == 0) continue;
        double p = 0.0;
        for (std::size_t j = 0; j < grid.intervals(); ++j) {
            if (pi[j] == 0.0) continue;
            const double yd = static_cast<double>(y);
            p += pi[j] * lik.interval_mass(yd, grid.endpoint(j), grid.endpoint(j + 1)) / grid.width(j);
        }
        ll += static_cast<double>(h[y]) * std::log(p);
    }
    return ll;
}

HbetaPoissonFit hbeta_poisson(const Histogram& h, const HbetaPoissonConfig& cfg, bool intervals) {
    const std::vector<double> y = histogram_values(h);
    const Grid grid = Grid::regular(cfg.lo, cfg.hi, cfg.levels);
    const PoissonLik lik;

    ChainConfig chain;
    chain.iterations = cfg.iterations;
    chain.burn_in = cfg.burn_in;
    chain.chains = cfg.chains;
    chain.seed = cfg.seed;
    chain.mode = cfg.mode;

    HbetaPoissonFit fit{run_chain_seq(y, grid, lik, chain), {}, {}, {}, 0.0};
    Rng rng(cfg.seed, 1u << 20);
    for (std::size_t v = 0; v < h.size(); ++v) {
        const double yv = static_cast<double>(v);
        if (intervals) {
            const ThetaPosterior post = posterior_theta_given_y(fit.draws, yv, lik, cfg.mode, rng);
            fit.means.push_back(post.mean);
            fit.lo.push_back(post.lo);
            fit.hi.push_back(post.hi);
        } else {
            const auto est = selective_point_estimates(fit.draws, std::span<const double>(&yv, 1), yv, lik, cfg.mode);
            fit.means.push_back(est.front().mean);
        }
    }
    fit.loglik = step_mixture_loglik_poisson(grid, fit.draws.mean_pi(), h);
    return fit;
}

AccidentResult accident_study(const HbetaPoissonConfig& cfg, std::size_t em_starts) {
    const Histogram& h = accident_histogram();
    const DiscreteMixture simar = simar_mixture();
    return AccidentResult{h,
                          robbins_poisson(h),
                          gamma_poisson_eb(h),
                          gamma_poisson_moments(h),
                          simar,
                          mixture_loglik_poisson(simar, h),
                          npmle_multistart(h, 3, em_starts, cfg.seed),
                          npmle_multistart(h, 4, em_starts, cfg.seed),
                          hbeta_poisson(h, cfg)};
}

RiskResult simar_risk_study(const RiskConfig& cfg) {
    if (cfg.reps == 0) throw InvalidArgument("need at least one replication");
    RiskResult r;
    r.config = cfg;
    r.hbeta_losses.assign(cfg.reps, 0.0);
    r.npmle_losses.assign(cfg.reps, 0.0);
    r.mle_losses.assign(cfg.reps, 0.0);
    r.oracle_losses.assign(cfg.reps, 0.0);
    const DiscreteMixture truth = simar_mixture();

    parallel_for(cfg.reps, [&](std::size_t k) {
        const std::uint64_t seed = cfg.seed * 1000003ULL + k;
        const sim::PoissonData data = sim::gen_poisson_mixture(truth, cfg.m, seed);
        const Histogram h = make_histogram(data.y);

        HbetaPoissonConfig hc = cfg.hbeta;
        hc.seed = seed;
        const HbetaPoissonFit fit = hbeta_poisson(h, hc, false);
        const EmResult em = npmle_multistart(h, cfg.k, cfg.em_starts, seed);

        std::vector<double> npmle_mean(h.size()), oracle_mean(h.size());
        for (std::size_t v = 0; v < h.size(); ++v) {
            npmle_mean[v] = mixture_posterior_mean_poisson(em.mixture, static_cast<double>(v));
            oracle_mean[v] = mixture_posterior_mean_poisson(truth, static_cast<double>(v));
        }
        double lh = 0.0, ln = 0.0, lm = 0.0, lo = 0.0;
        for (std::size_t i = 0; i < cfg.m; ++i) {
            const std::size_t v = data.y[i];
            const double lam = data.lambda[i];
            lh += (fit.means[v] - lam) * (fit.means[v] - lam);
            ln += (npmle_mean[v] - lam) * (npmle_mean[v] - lam);
            lm += (static_cast<double>(v) - lam) * (static_cast<double>(v) - lam);
            lo += (oracle_mean[v] - lam) * (oracle_mean[v] - lam);
        }
        const auto m = static_cast<double>(cfg.m);
        r.hbeta_losses[k] = lh / m;
        r.npmle_losses[k] = ln / m;
        r.mle_losses[k] = lm / m;
        r.oracle_losses[k] = lo / m;
    });

    r.hbeta = summarize_losses(r.hbeta_losses);
    r.npmle = summarize_losses(r.npmle_losses);
    r.mle = summarize_losses(r.mle_losses);
    r.oracle = summarize_losses(r.oracle_losses);
    return r;
}

// ---------------------------------------------------------------- logistic

LogisticConfig logistic_config(int example, std::uint64_t seed) {
    if (example < 1 || example > 3) throw InvalidArgument("logistic example must be 1, 2 or 3");
    LogisticConfig cfg;
    cfg.example = example;
    cfg.seed = seed;
    if (example == 3) {
        cfg.chains = 10;
        cfg.iterations = 150;
        cfg.burn_in = 50;
    }
    return cfg;
}

LogisticConfig logistic_half_config(int example, std::uint64_t seed) {
    LogisticConfig cfg = logistic_config(example, seed);
    cfg.n /= 2;
    cfg.m /= 2;
    cfg.iterations /= 2;
    cfg.burn_in /= 2;
    return cfg;
}

LogisticResult logistic_study(const LogisticConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const sim::LogisticData data = sim::gen_logistic(cfg.example, cfg.seed, cfg.n, cfg.m);
    const Grid grid = Grid::regular(cfg.lo, cfg.hi, cfg.levels);

    ChainConfig chain;
    chain.iterations = cfg.iterations;
    chain.burn_in = cfg.burn_in;
    chain.chains = cfg.chains;
    chain.seed = cfg.seed;
    chain.record_theta = true;
    logistic::LogisticRun run = logistic::run_chain_logistic(data.y, data.x, grid, chain, cfg.k_per_interval);

    LogisticResult r{.config = cfg, .draws = std::move(run.draws)};
    r.beta_true = data.beta;
    r.mle = run.mle;
    r.mle_fallback = run.mle_fallback;
    r.max_cache_error = run.max_cache_error;

    const std::size_t m = cfg.m;
    const std::size_t g = r.draws.theta_draws.size();
    r.beta_mean.assign(m, 0.0);
    r.beta_lo.resize(m);
    r.beta_hi.resize(m);
    std::vector<double> column(g);
    const double probs[] = {0.025, 0.975};
    std::size_t covered = 0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t d = 0; d < g; ++d) column[d] = r.draws.theta_draws[d][j];
        r.beta_mean[j] = mean(column);
        const auto q = quantiles(column, probs);
        r.beta_lo[j] = q[0];
        r.beta_hi[j] = q[1];
        if (q[0] <= data.beta[j] && data.beta[j] <= q[1]) ++covered;
    }
    r.coverage = static_cast<double>(covered) / static_cast<double>(m);

    const std::vector<double> mu_true = data.x.multiply(data.beta);
    const std::vector<double> mu_hat = data.x.multiply(r.beta_mean);
    const std::vector<double> mu_mle = data.x.multiply(r.mle);
    r.q = logistic::posterior_q(r.draws, data.x);
    r.q_true.resize(cfg.n);
    r.q_mle.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        r.q_true[i] = logistic::logistic_fn(mu_true[i]);
        r.q_mle[i] = logistic::logistic_fn(mu_mle[i]);
    }
    r.rel_mse_beta = sim::relative_mse(data.beta, r.beta_mean, r.mle);
    r.rel_mse_mu = sim::relative_mse(mu_true, mu_hat, mu_mle);
    r.rel_mse_q = sim::relative_mse(r.q_true, r.q.mean, r.q_mle);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------- writers

namespace {

io::Table curve_table(const FdrCurve& c) {
    io::Table t;
    t.add("y", c.y);
    t.add("fdr", c.fdr);
    t.add("Fdr", c.Fdr);
    return t;
}

io::Table band_table(const CdfBand& b) {
    io::Table t;
    t.add("x", b.x);
    t.add("mean", b.mean);
    t.add("lo", b.lo);
    t.add("hi", b.hi);
    return t;
}

io::Table density_table(const DensityEstimate& d) {
    io::Table t;
    std::vector<double> lo, hi;
    for (std::size_t j = 0; j < d.grid.intervals(); ++j) {
        lo.push_back(d.grid.endpoint(j));
        hi.push_back(d.grid.endpoint(j + 1));
    }
    t.add("lo", std::move(lo));
    t.add("hi", std::move(hi));
    t.add("mass", d.mass);
    t.add("density", d.density);
    return t;
}

void put(const fs::path& dir, const std::string& name, const io::Table& t, std::vector<std::string>& written) {
    io::write_csv(dir / name, t);
    written.push_back(name);
}

double or_nan(const std::optional<double>& v) { return v ? *v : std::nan(""); }

}  // namespace

std::vector<std::string> write_normal(const fs::path& dir, const NormalFdrResult& r) {
    std::vector<std::string> out;
    io::Table t1;
    const double mdr_star = r.oracle.mdr;
    auto ratio = [&](double v) { return mdr_star > 0.0 ? v / mdr_star : std::nan(""); };
    t1.add("fdr_hbeta", {r.hbeta.fdr});
    t1.add("fdr_bh", {r.bh.fdr});
    t1.add("fdr_oracle", {r.oracle.fdr});
    t1.add("mdr_ratio_hbeta", {ratio(r.hbeta.mdr)});
    t1.add("mdr_ratio_bh", {ratio(r.bh.mdr)});
    t1.add("mdr_ratio_oracle", {ratio(r.oracle.mdr)});
    t1.add("rejections_hbeta", {r.hbeta.rejections});
    t1.add("rejections_bh", {r.bh.rejections});
    t1.add("rejections_oracle", {r.oracle.rejections});
    t1.add("selected_mse_ratio_hbeta", {r.selected_mse_ratio_hbeta});
    t1.add("selected_mse_ratio_naive", {r.selected_mse_ratio_naive});
    t1.add("oracle_threshold", {r.oracle_threshold});
    put(dir, "table1.csv", t1, out);

    io::Table th;
    std::vector<double> idx(r.hbeta_thresholds.size());
    std::iota(idx.begin(), idx.end(), 0.0);
    th.add("round", std::move(idx));
    th.add("threshold", r.hbeta_thresholds);
    put(dir, "thresholds.csv", th, out);
    put(dir, "fdr_curve_hbeta.csv", curve_table(r.first_curve), out);
    put(dir, "fdr_curve_oracle.csv", curve_table(r.oracle_curve), out);
    return out;
}

std::vector<std::string> write_exa00(const fs::path& dir, const std::vector<Exa00Row>& rows) {
    std::vector<std::string> out;
    io::Table t;
    std::vector<double> l, hm, hs, pm, ps, pe;
    for (const auto& r : rows) {
        l.push_back(r.levels);
        hm.push_back(r.summary.hbeta_mean);
        hs.push_back(r.summary.hbeta_sd);
        pm.push_back(r.summary.pmf_mean);
        ps.push_back(r.summary.pmf_sd);
        pe.push_back(r.pmf_sd_exact);
    }
    t.add("levels", std::move(l));
    t.add("hbeta_mean", std::move(hm));
    t.add("hbeta_sd", std::move(hs));
    t.add("pmf_mean", std::move(pm));
    t.add("pmf_sd", std::move(ps));
    t.add("pmf_sd_exact", std::move(pe));
    put(dir, "exa00_sd.csv", t, out);
    return out;
}

std::vector<std::string> write_exa01(const fs::path& dir, const Exa01Result& r) {
    std::vector<std::string> out;
    io::Table post;
    post.add("y", {r.config.query});
    post.add("mean", {r.posterior.mean});
    post.add("lo", {r.posterior.lo});
    post.add("hi", {r.posterior.hi});
    post.add("true_mean", {r.truth.mean});
    post.add("true_lo", {r.truth.lo});
    post.add("true_hi", {r.truth.hi});
    post.add("band_coverage", {r.band_coverage});
    put(dir, "posterior.csv", post, out);

    io::Table band = band_table(r.band);
    std::vector<double> truth;
    for (double x : r.band.x) truth.push_back(sim::tn_uniform_cdf(x));
    band.add("true_cdf", std::move(truth));
    put(dir, "cdf_band.csv", band, out);
    put(dir, "cdf_band_coarse.csv", band_table(r.coarse_band), out);
    put(dir, "density.csv", density_table(r.density), out);
    put(dir, "density_coarse.csv", density_table(r.coarse_density), out);

    // Trace of the two central intervals.
    io::Table trace;
    const std::size_t mid = r.draws.grid.intervals() / 2;
    std::vector<double> g, left, right;
    for (std::size_t d = 0; d < r.draws.size(); ++d) {
        g.push_back(static_cast<double>(d));
        left.push_back(r.draws.pi_draws[d][mid - 1]);
        right.push_back(r.draws.pi_draws[d][mid]);
    }
    trace.add("draw", std::move(g));
    trace.add("pi_left", std::move(left));
    trace.add("pi_right", std::move(right));
    put(dir, "trace.csv", trace, out);

    io::save_draws(dir / "draws.hbd", r.draws);
    out.emplace_back("draws.hbd");
    return out;
}

std::string accident_table_csv(const AccidentResult& r) {
    io::Table t;
    std::vector<double> y, count, robbins, gamma, moments, npmle, hm, hl, hh;
    for (std::size_t v = 0; v < r.histogram.size(); ++v) {
        const double yd = static_cast<double>(v);
        y.push_back(yd);
        count.push_back(static_cast<double>(r.histogram[v]));
        robbins.push_back(or_nan(r.robbins[v]));
        gamma.push_back(r.gamma_mle.posterior_mean(yd));
        moments.push_back(r.gamma_moments.posterior_mean(yd));
        npmle.push_back(mixture_posterior_mean_poisson(r.simar, yd));
        hm.push_back(r.hbeta.means.at(v));
        hl.push_back(r.hbeta.lo.at(v));
        hh.push_back(r.hbeta.hi.at(v));
    }
    t.add("y", std::move(y));
    t.add("count", std::move(count));
    t.add("robbins", std::move(robbins));
    t.add("gamma_mle", std::move(gamma));
    t.add("gamma_moments", std::move(moments));
    t.add("npmle_simar", std::move(npmle));
    t.add("hbeta_mean", std::move(hm));
    t.add("hbeta_lo", std::move(hl));
    t.add("hbeta_hi", std::move(hh));
    return io::to_csv(t);
}

std::vector<std::string> write_accident(const fs::path& dir, const AccidentResult& r) {
    std::vector<std::string> out;
    io::write_file_atomic(dir / "table2.csv", accident_table_csv(r));
    out.emplace_back("table2.csv");

    io::Table fits;
    fits.add("gamma_mle_theta", {r.gamma_mle.theta});
    fits.add("gamma_mle_r", {r.gamma_mle.r});
    fits.add("gamma_mle_loglik", {r.gamma_mle.loglik});
    fits.add("gamma_moments_theta", {r.gamma_moments.theta});
    fits.add("gamma_moments_r", {r.gamma_moments.r});
    fits.add("simar_loglik", {r.simar_loglik});
    fits.add("em3_loglik", {r.em3.loglik});
    fits.add("em4_loglik", {r.em4.loglik});
    fits.add("hbeta_loglik", {r.hbeta.loglik});
    put(dir, "fits.csv", fits, out);

    io::Table em;
    std::vector<double> k, s, w;
    for (const auto* res : {&r.em3, &r.em4}) {
        for (std::size_t j = 0; j < res->mixture.size(); ++j) {
            k.push_back(static_cast<double>(res->mixture.size()));
            s.push_back(res->mixture.support()[j]);
            w.push_back(res->mixture.weights()[j]);
        }
    }
    em.add("k", std::move(k));
    em.add("support", std::move(s));
    em.add("weight", std::move(w));
    put(dir, "npmle.csv", em, out);

    const DensityEstimate dens = deconv_density(r.hbeta.draws, r.hbeta.draws.grid.levels());
    put(dir, "density.csv", density_table(dens), out);
    put(dir, "cdf_band.csv", band_table(deconv_cdf_band(r.hbeta.draws, r.hbeta.draws.grid.levels())), out);
    return out;
}

std::vector<std::string> write_risk(const fs::path& dir, const RiskResult& r) {
    std::vector<std::string> out;
    io::Table t;
    t.add("hbeta", {r.hbeta.risk});
    t.add("hbeta_se", {r.hbeta.se});
    t.add("npmle", {r.npmle.risk});
    t.add("npmle_se", {r.npmle.se});
    t.add("mle", {r.mle.risk});
    t.add("mle_se", {r.mle.se});
    t.add("oracle", {r.oracle.risk});
    t.add("oracle_se", {r.oracle.se});
    put(dir, "risk.csv", t, out);

    io::Table losses;
    std::vector<double> rep(r.hbeta_losses.size());
    std::iota(rep.begin(), rep.end(), 0.0);
    losses.add("rep", std::move(rep));
    losses.add("hbeta", r.hbeta_losses);
    losses.add("npmle", r.npmle_losses);
    losses.add("mle", r.mle_losses);
    losses.add("oracle", r.oracle_losses);
    put(dir, "losses.csv", losses, out);
    return out;
}

std::vector<std::string> write_logistic(const fs::path& dir, const LogisticResult& r) {
    std::vector<std::string> out;
    io::Table t3;
    t3.add("example", {static_cast<double>(r.config.example)});
    t3.add("rel_mse_beta", {r.rel_mse_beta});
    t3.add("rel_mse_mu", {r.rel_mse_mu});
    t3.add("rel_mse_q", {r.rel_mse_q});
    t3.add("coverage", {r.coverage});
    t3.add("mle_fallback", {r.mle_fallback ? 1.0 : 0.0});
    put(dir, "table3.csv", t3, out);

    io::Table beta;
    beta.add("truth", r.beta_true);
    beta.add("mle", r.mle);
    beta.add("mean", r.beta_mean);
    beta.add("lo", r.beta_lo);
    beta.add("hi", r.beta_hi);
    put(dir, "beta.csv", beta, out);

    io::Table q;
    q.add("truth", r.q_true);
    q.add("mle", r.q_mle);
    q.add("mean", r.q.mean);
    q.add("lo", r.q.lo);
    q.add("hi", r.q.hi);
    put(dir, "q.csv", q, out);

    const int levels = r.draws.grid.levels();
    put(dir, "cdf_band.csv", band_table(deconv_cdf_band(r.draws, levels)), out);
    put(dir, "density.csv", density_table(deconv_density(r.draws, levels)), out);
    return out;
}

}  // namespace hbeta::experiments
