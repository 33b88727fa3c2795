#include "hbeta/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbeta/analytics.hpp"
#include "hbeta/baselines.hpp"
#include "hbeta/errors.hpp"
#include "hbeta/experiments.hpp"
#include "hbeta/io.hpp"
#include "hbeta/logistic.hpp"
#include "hbeta/manifest.hpp"
#include "hbeta/stats.hpp"

namespace hbeta::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ChainOptions {
    std::size_t iterations = 150;
    std::size_t burn_in = 50;
    std::size_t chains = 4;
    std::uint64_t seed = 1;
    std::string mode = "midpoint";

    ChainConfig config() const {
        ChainConfig c;
        c.iterations = iterations;
        c.burn_in = burn_in;
        c.chains = chains;
        c.seed = seed;
        c.mode = parse_theta_sampling(mode);
        return c;
    }
    json to_json() const {
        return {{"iterations", iterations}, {"burn_in", burn_in}, {"chains", chains}, {"seed", seed}, {"mode", mode}};
    }
};

void add_chain_options(CLI::App* app, ChainOptions& o, bool with_mode = true) {
    app->add_option("--iterations,--iters", o.iterations, "Gibbs iterations per chain")->capture_default_str();
    app->add_option("--burn-in,--burn", o.burn_in, "Discarded iterations per chain")->capture_default_str();
    app->add_option("--chains", o.chains, "Independent chains")->capture_default_str();
    app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    if (with_mode) app->add_option("--mode", o.mode, "Theta sampling: midpoint | exact")->capture_default_str();
}

struct Range {
    std::vector<double> bounds;
    double lo() const { return bounds.at(0); }
    double hi() const { return bounds.at(1); }
};

void add_range(CLI::App* app, Range& r, const std::string& help) {
    app->add_option("--range", r.bounds, help)->expected(2)->capture_default_str();
}

// Shared bookkeeping for commands that write an output directory.
class Recorder {
public:
    Recorder(std::string command, const std::vector<std::string>& args)
        : manifest_{std::move(command), args, json::object(), 0, library_version(), {}, {}, utc_now(), ""} {}

    json& config() { return manifest_.config; }
    void seed(std::uint64_t s) { manifest_.seed = s; }
    void input(const fs::path& p) { manifest_.inputs.push_back({p.string(), sha256_file(p)}); }
    void output(std::string name) { outputs_.push_back(std::move(name)); }
    void outputs(const std::vector<std::string>& names) {
        outputs_.insert(outputs_.end(), names.begin(), names.end());
    }

    void finish(const fs::path& dir) {
        manifest_.finished = utc_now();
        write_manifest(dir, manifest_, outputs_);
    }

private:
    RunManifest manifest_;
    std::vector<std::string> outputs_;
};

void prepare_out(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory " + dir.string());
}

// ---------------------------------------------------------------- deconvolve

struct DeconvolveOptions {
    std::string y;
    std::string likelihood = "normal:1";
    int levels = 7;
    Range range{{-5.0, 5.0}};
    int band_levels = 0;
    std::vector<double> queries;
    bool record_theta = false;
    std::string out;
    ChainOptions chain;
};

void run_deconvolve(const DeconvolveOptions& o, Recorder& rec) {
    const fs::path out(o.out);
    const std::vector<double> y = io::read_column_csv(o.y);
    rec.input(o.y);
    const auto lik = parse_likelihood(o.likelihood);
    const Grid grid = Grid::regular(o.range.lo(), o.range.hi(), o.levels);
    ChainConfig cfg = o.chain.config();
    cfg.record_theta = o.record_theta;
    rec.config() = {{"y", o.y},          {"likelihood", lik->describe()}, {"levels", o.levels},
                    {"range", o.range.bounds}, {"band_levels", o.band_levels}, {"queries", o.queries},
                    {"record_theta", o.record_theta}, {"chain", o.chain.to_json()}};
    rec.seed(o.chain.seed);

    const PosteriorDraws draws = run_chain_seq(y, grid, *lik, cfg);
    prepare_out(out);
    io::save_draws(out / "draws.hbd", draws);
    rec.output("draws.hbd");

    const int band = o.band_levels > 0 ? o.band_levels : o.levels;
    const CdfBand b = deconv_cdf_band(draws, band);
    io::Table tb;
    tb.add("x", b.x);
    tb.add("mean", b.mean);
    tb.add("lo", b.lo);
    tb.add("hi", b.hi);
    io::write_csv(out / "cdf_band.csv", tb);
    rec.output("cdf_band.csv");

    const DensityEstimate d = deconv_density(draws, band);
    io::Table td;
    std::vector<double> lo, hi;
    for (std::size_t j = 0; j < d.grid.intervals(); ++j) {
        lo.push_back(d.grid.endpoint(j));
        hi.push_back(d.grid.endpoint(j + 1));
    }
    td.add("lo", std::move(lo));
    td.add("hi", std::move(hi));
    td.add("mass", d.mass);
    td.add("density", d.density);
    io::write_csv(out / "density.csv", td);
    rec.output("density.csv");

    if (!o.queries.empty()) {
        Rng rng(o.chain.seed, 1u << 20);
        io::Table tq;
        std::vector<double> qy, qm, ql, qh;
        for (double q : o.queries) {
            const ThetaPosterior p = posterior_theta_given_y(draws, q, *lik, cfg.mode, rng);
            qy.push_back(q);
            qm.push_back(p.mean);
            ql.push_back(p.lo);
            qh.push_back(p.hi);
        }
        tq.add("y", std::move(qy));
        tq.add("mean", std::move(qm));
        tq.add("lo", std::move(ql));
        tq.add("hi", std::move(qh));
        io::write_csv(out / "posterior.csv", tq);
        rec.output("posterior.csv");
    }
    rec.finish(out);
}

// ---------------------------------------------------------------- logistic

struct LogisticOptions {
    std::string x;
    std::string y;
    int levels = 6;
    Range range{{-24.0, 24.0}};
    std::size_t per_interval = 20;
    std::string out;
    ChainOptions chain{1000, 100, 1, 1, "midpoint"};
};

void run_logistic(const LogisticOptions& o, Recorder& rec) {
    const fs::path out(o.out);
    const logistic::DesignMatrix x = io::read_design(o.x);
    const std::vector<double> y = io::read_column_csv(o.y);
    rec.input(o.x);
    rec.input(o.y);
    if (y.size() != x.rows()) {
        throw DataError("design has " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
                        " labels were read");
    }
    const Grid grid = Grid::regular(o.range.lo(), o.range.hi(), o.levels);
    ChainConfig cfg = o.chain.config();
    cfg.record_theta = true;
    rec.config() = {{"x", o.x},           {"y", o.y}, {"levels", o.levels}, {"range", o.range.bounds},
                    {"per_interval", o.per_interval}, {"chain", o.chain.to_json()}};
    rec.seed(o.chain.seed);

    const logistic::LogisticRun run = logistic::run_chain_logistic(y, x, grid, cfg, o.per_interval);
    prepare_out(out);
    io::save_draws(out / "draws.hbd", run.draws);
    rec.output("draws.hbd");

    const std::size_t m = x.cols();
    const std::size_t g = run.draws.theta_draws.size();
    std::vector<double> mean(m), lo(m), hi(m), column(g);
    const double probs[] = {0.025, 0.975};
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t d = 0; d < g; ++d) {
            column[d] = run.draws.theta_draws[d][j];
            s += column[d];
        }
        mean[j] = s / static_cast<double>(g);
        const auto q = quantiles(column, probs);
        lo[j] = q[0];
        hi[j] = q[1];
    }
    io::Table tb;
    tb.add("mle", run.mle);
    tb.add("mean", std::move(mean));
    tb.add("lo", std::move(lo));
    tb.add("hi", std::move(hi));
    io::write_csv(out / "beta.csv", tb);
    rec.output("beta.csv");

    const logistic::QSummary q = logistic::posterior_q(run.draws, x);
    io::Table tq;
    tq.add("mean", q.mean);
    tq.add("lo", q.lo);
    tq.add("hi", q.hi);
    io::write_csv(out / "q.csv", tq);
    rec.output("q.csv");
    rec.config()["mle_fallback"] = run.mle_fallback;
    rec.finish(out);
}

// ---------------------------------------------------------------- test-fdr

struct TestFdrOptions {
    std::string y;
    double alpha = 0.1;
    double sd = 1.0;
    int levels = 7;
    Range range{{-5.0, 5.0}};
    double step = 0.01;
    double level = 0.95;
    std::string draws;
    std::string out;
    ChainOptions chain;
};

void run_test_fdr(const TestFdrOptions& o, Recorder& rec) {
    const fs::path out(o.out);
    const std::vector<double> y = io::read_column_csv(o.y);
    rec.input(o.y);
    const NormalKnownSd lik(o.sd);
    rec.config() = {{"y", o.y},         {"alpha", o.alpha}, {"sd", o.sd},       {"levels", o.levels},
                    {"range", o.range.bounds}, {"step", o.step},   {"level", o.level}, {"draws", o.draws},
                    {"chain", o.chain.to_json()}};
    rec.seed(o.chain.seed);

    std::optional<PosteriorDraws> loaded;
    if (!o.draws.empty()) {
        loaded = io::load_draws(o.draws);
        rec.input(o.draws);
    } else {
        const Grid grid = Grid::regular(o.range.lo(), o.range.hi(), o.levels);
        loaded = run_chain_seq(y, grid, lik, o.chain.config());
    }
    const PosteriorDraws& draws = *loaded;
    const ThetaSampling mode = draws.config.mode;

    const std::vector<double> points = threshold_points(y, o.step);
    const FdrCurve curve = fdr_curves(draws, o.sd, points);
    const double cutoff = fdr_threshold(curve, o.alpha);
    const auto bh = bh_procedure(one_sided_pvalues(y, o.sd), o.alpha);

    prepare_out(out);
    if (o.draws.empty()) {
        io::save_draws(out / "draws.hbd", draws);
        rec.output("draws.hbd");
    }
    io::Table tc;
    tc.add("y", curve.y);
    tc.add("fdr", curve.fdr);
    tc.add("Fdr", curve.Fdr);
    io::write_csv(out / "fdr_curve.csv", tc);
    rec.output("fdr_curve.csv");

    io::Table ts;
    std::vector<double> idx, ys, means, hlo, hhi, pieces;
    for (const auto& e : selective_point_estimates(draws, y, cutoff, lik, mode)) {
        const auto set = hpd_interval(draws.grid, posterior_weights_given_y(draws, y[e.index], lik, mode), o.level);
        idx.push_back(static_cast<double>(e.index));
        ys.push_back(y[e.index]);
        means.push_back(e.mean);
        hlo.push_back(set.front().first);
        hhi.push_back(set.back().second);
        pieces.push_back(static_cast<double>(set.size()));
    }
    ts.add("index", std::move(idx));
    ts.add("y", std::move(ys));
    ts.add("posterior_mean", std::move(means));
    ts.add("hpd_lo", std::move(hlo));
    ts.add("hpd_hi", std::move(hhi));
    ts.add("hpd_pieces", std::move(pieces));
    io::write_csv(out / "selected.csv", ts);
    rec.output("selected.csv");

    const json summary = {{"threshold", std::isfinite(cutoff) ? json(cutoff) : json(nullptr)},
                          {"rejections", ts.rows()},
                          {"bh_rejections", bh.size()},
                          {"alpha", o.alpha}};
    io::write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
    rec.output("summary.json");
    rec.finish(out);
    std::cout << "threshold " << io::format_number(cutoff) << ", " << ts.rows() << " rejections (BH: " << bh.size()
              << ")\n";
}

// ---------------------------------------------------------------- accident

struct AccidentOptions {
    std::string out;
    std::size_t em_starts = 20;
    experiments::HbetaPoissonConfig hbeta{};
    std::string mode = "exact";
};

void run_accident(const AccidentOptions& o, Recorder& rec) {
    experiments::HbetaPoissonConfig cfg = o.hbeta;
    cfg.mode = parse_theta_sampling(o.mode);
    const experiments::AccidentResult r = experiments::accident_study(cfg, o.em_starts);
    if (o.out.empty()) {
        std::cout << experiments::accident_table_csv(r);
        return;
    }
    const fs::path out(o.out);
    prepare_out(out);
    rec.config() = {{"em_starts", o.em_starts}, {"levels", cfg.levels}, {"range", {cfg.lo, cfg.hi}},
                    {"iterations", cfg.iterations}, {"burn_in", cfg.burn_in}, {"chains", cfg.chains},
                    {"mode", o.mode}};
    rec.seed(cfg.seed);
    rec.outputs(experiments::write_accident(out, r));
    rec.finish(out);
}

// ---------------------------------------------------------------- npmle

struct NpmleOptions {
    std::string counts;
    bool histogram = false;
    std::size_t k = 4;
    std::size_t starts = 20;
    std::uint64_t seed = 1;
    std::string out;
};

void run_npmle(const NpmleOptions& o, Recorder& rec) {
    const std::vector<std::uint64_t> raw = io::read_counts_csv(o.counts);
    const Histogram h = o.histogram ? Histogram(raw.begin(), raw.end()) : make_histogram(raw);
    const EmResult em = npmle_multistart(h, o.k, o.starts, o.seed);
    io::Table t;
    t.add("support", em.mixture.support());
    t.add("weight", em.mixture.weights());
    if (o.out.empty()) {
        std::cout << io::to_csv(t);
        std::cerr << "loglik " << io::format_number(em.loglik) << " after " << em.iterations << " iterations"
                  << (em.converged ? "" : " (iteration cap)") << "\n";
        return;
    }
    const fs::path out(o.out);
    prepare_out(out);
    rec.input(o.counts);
    rec.config() = {{"counts", o.counts}, {"histogram", o.histogram}, {"k", o.k}, {"starts", o.starts},
                    {"loglik", em.loglik}, {"converged", em.converged}};
    rec.seed(o.seed);
    io::write_csv(out / "npmle.csv", t);
    rec.output("npmle.csv");
    rec.finish(out);
}

// ---------------------------------------------------------------- reproduce

struct ReproduceOptions {
    std::string target;
    std::uint64_t seed = 1;
    std::size_t rounds = 0;
    std::string scale = "full";
    std::string out;
};

void run_reproduce(const ReproduceOptions& o, Recorder& rec) {
    const fs::path out(o.out);
    const bool smoke = o.scale == "smoke";
    rec.config() = {{"target", o.target}, {"rounds", o.rounds}, {"scale", o.scale}};
    rec.seed(o.seed);
    std::vector<std::string> written;

    if (o.target == "normal") {
        experiments::NormalFdrConfig cfg;
        cfg.seed = o.seed;
        cfg.rounds = o.rounds > 0 ? o.rounds : 20;
        if (smoke) cfg.m = 2000;
        const auto r = experiments::normal_fdr_study(cfg);
        prepare_out(out);
        written = experiments::write_normal(out, r);
    } else if (o.target == "exa00") {
        const auto rows = experiments::exa00_table(20, smoke ? 1000 : 10000, o.seed);
        prepare_out(out);
        written = experiments::write_exa00(out, rows);
    } else if (o.target == "exa01") {
        experiments::Exa01Config cfg;
        cfg.seed = o.seed;
        if (smoke) cfg.chains = 4;
        const auto r = experiments::exa01_study(cfg);
        prepare_out(out);
        written = experiments::write_exa01(out, r);
    } else if (o.target == "accident") {
        experiments::HbetaPoissonConfig cfg;
        cfg.seed = o.seed;
        if (smoke) cfg.chains = 4;
        const auto r = experiments::accident_study(cfg);
        prepare_out(out);
        written = experiments::write_accident(out, r);
    } else if (o.target == "simar-sim") {
        experiments::RiskConfig cfg;
        cfg.seed = o.seed;
        cfg.reps = o.rounds > 0 ? o.rounds : 40;
        if (smoke) {
            cfg.m = 2000;
            if (o.rounds == 0) cfg.reps = 10;
        }
        const auto r = experiments::simar_risk_study(cfg);
        prepare_out(out);
        written = experiments::write_risk(out, r);
    } else if (o.target.rfind("logistic", 0) == 0 && o.target.size() == 9) {
        const int example = o.target.back() - '0';
        experiments::LogisticConfig cfg = o.scale == "half" ? experiments::logistic_half_config(example, o.seed)
                                                            : experiments::logistic_config(example, o.seed);
        if (smoke) {
            cfg.n = 400;
            cfg.m = 80;
            cfg.iterations = cfg.chains > 1 ? 30 : 120;
            cfg.burn_in = cfg.iterations / 5;
        }
        const auto r = experiments::logistic_study(cfg);
        prepare_out(out);
        written = experiments::write_logistic(out, r);
    } else {
        throw CLI::ValidationError("target", "unknown target '" + o.target + "'");
    }
    rec.outputs(written);
    rec.finish(out);
}

// ---------------------------------------------------------------- replay

struct ReplayOptions {
    std::string manifest;
    std::string out;
};

int run_replay(const ReplayOptions& o) {
    fs::path path(o.manifest);
    if (fs::is_directory(path)) path /= kManifestName;
    const RunManifest original = read_manifest(path);

    std::vector<std::string> args = original.argv;
    bool replaced = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out" && i + 1 < args.size()) {
            args[i + 1] = o.out;
            replaced = true;
        } else if (args[i].rfind("--out=", 0) == 0) {
            args[i] = "--out=" + o.out;
            replaced = true;
        }
    }
    if (!replaced) throw DataError("manifest argv has no --out to redirect");
    if (!args.empty() && args.front() == "replay") throw DataError("refusing to replay a replay");

    const int code = run(args);
    if (code != kOk) return code;
    const RunManifest again = read_manifest(fs::path(o.out) / kManifestName);

    std::size_t mismatches = 0;
    for (const auto& f : original.outputs) {
        const auto it = std::find_if(again.outputs.begin(), again.outputs.end(),
                                     [&](const FileDigest& d) { return d.path == f.path; });
        if (it == again.outputs.end()) {
            std::cerr << "missing output " << f.path << "\n";
            ++mismatches;
        } else if (it->sha256 != f.sha256) {
            std::cerr << "digest differs: " << f.path << "\n";
            ++mismatches;
        }
    }
    if (mismatches > 0) {
        std::cerr << mismatches << " of " << original.outputs.size() << " outputs differ\n";
        return kRuntime;
    }
    std::cout << "replay identical: " << original.outputs.size() << " outputs\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Hierarchical Beta models for large-scale inference", "hbeta"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    DeconvolveOptions dec;
    auto* cmd_dec = app.add_subcommand("deconvolve", "Sequence-model Gibbs sampler with deconvolution summaries");
    cmd_dec->add_option("--y", dec.y, "Observations, one per line")->required()->check(CLI::ExistingFile);
    cmd_dec->add_option("--likelihood", dec.likelihood, "normal:SD | poisson")->capture_default_str();
    cmd_dec->add_option("--levels", dec.levels, "Tree depth")->capture_default_str();
    add_range(cmd_dec, dec.range, "Grid support LO HI");
    cmd_dec->add_option("--band-levels", dec.band_levels, "Depth of the CDF band and density (default: --levels)");
    cmd_dec->add_option("--query", dec.queries, "Observation values for theta | y summaries");
    cmd_dec->add_flag("--record-theta", dec.record_theta, "Store latent draws in the draws file");
    cmd_dec->add_option("--out", dec.out, "Output directory")->required();
    add_chain_options(cmd_dec, dec.chain);

    LogisticOptions lg;
    auto* cmd_lg = app.add_subcommand("logistic", "Logistic regression under the hierarchical Beta prior");
    cmd_lg->add_option("--x", lg.x, "Design matrix (CSV or HBX1 binary)")->required()->check(CLI::ExistingFile);
    cmd_lg->add_option("--y", lg.y, "Labels 0/1, one per line")->required()->check(CLI::ExistingFile);
    cmd_lg->add_option("--levels", lg.levels, "Tree depth")->capture_default_str();
    add_range(cmd_lg, lg.range, "Coefficient support LO HI");
    cmd_lg->add_option("--per-interval", lg.per_interval, "Candidate values per grid interval")
        ->capture_default_str();
    cmd_lg->add_option("--out", lg.out, "Output directory")->required();
    add_chain_options(cmd_lg, lg.chain, false);

    TestFdrOptions tf;
    auto* cmd_tf = app.add_subcommand("test-fdr", "One-sided testing by the estimated tail-area Fdr");
    cmd_tf->add_option("--y", tf.y, "Observations, one per line")->required()->check(CLI::ExistingFile);
    cmd_tf->add_option("--alpha", tf.alpha, "Target Fdr level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    cmd_tf->add_option("--sd", tf.sd, "Noise standard deviation")->capture_default_str();
    cmd_tf->add_option("--levels", tf.levels, "Tree depth")->capture_default_str();
    add_range(cmd_tf, tf.range, "Grid support LO HI");
    cmd_tf->add_option("--step", tf.step, "Spacing of the threshold search grid")->capture_default_str();
    cmd_tf->add_option("--level", tf.level, "HPD credible level")->capture_default_str();
    cmd_tf->add_option("--draws", tf.draws, "Reuse a saved draws file")->check(CLI::ExistingFile);
    cmd_tf->add_option("--out", tf.out, "Output directory")->required();
    add_chain_options(cmd_tf, tf.chain);

    AccidentOptions ac;
    auto* cmd_ac = app.add_subcommand("accident", "Empirical Bayes estimates for the accident data");
    cmd_ac->add_option("--out", ac.out, "Output directory (table to stdout when absent)");
    cmd_ac->add_option("--em-starts", ac.em_starts, "EM random starts")->capture_default_str();
    cmd_ac->add_option("--seed", ac.hbeta.seed, "Random seed")->capture_default_str();
    cmd_ac->add_option("--chains", ac.hbeta.chains, "Gibbs chains")->capture_default_str();
    cmd_ac->add_option("--iterations,--iters", ac.hbeta.iterations, "Iterations per chain")->capture_default_str();
    cmd_ac->add_option("--burn-in,--burn", ac.hbeta.burn_in, "Burn-in per chain")->capture_default_str();
    cmd_ac->add_option("--mode", ac.mode, "Theta sampling: midpoint | exact")->capture_default_str();

    NpmleOptions np;
    auto* cmd_np = app.add_subcommand("npmle", "k-point Poisson NPMLE by multi-start EM");
    cmd_np->add_option("--counts", np.counts, "Counts, one per line")->required()->check(CLI::ExistingFile);
    cmd_np->add_flag("--histogram", np.histogram, "Line y holds the number of observations equal to y");
    cmd_np->add_option("--k", np.k, "Support points")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_np->add_option("--starts", np.starts, "Random starts")->capture_default_str();
    cmd_np->add_option("--seed", np.seed, "Random seed")->capture_default_str();
    cmd_np->add_option("--out", np.out, "Output directory (table to stdout when absent)");

    ReproduceOptions rp;
    auto* cmd_rp = app.add_subcommand("reproduce", "Re-run one of the built-in studies");
    cmd_rp->add_option("target", rp.target, "normal | exa00 | exa01 | accident | simar-sim | logistic1..3")
        ->required()
        ->check(CLI::IsMember({"normal", "exa00", "exa01", "accident", "simar-sim", "logistic1", "logistic2",
                               "logistic3"}));
    cmd_rp->add_option("--seed", rp.seed, "Random seed")->capture_default_str();
    cmd_rp->add_option("--rounds", rp.rounds, "Rounds or replications (target default when 0)");
    cmd_rp->add_option("--scale", rp.scale, "full | half | smoke")
        ->capture_default_str()
        ->check(CLI::IsMember({"full", "half", "smoke"}));
    cmd_rp->add_option("--out", rp.out, "Output directory")->required();

    ReplayOptions rl;
    auto* cmd_rl = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
    cmd_rl->add_option("manifest", rl.manifest, "manifest.json or its directory")->required()->check(CLI::ExistingPath);
    cmd_rl->add_option("--out", rl.out, "Directory for the replayed outputs")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        auto* sub = app.get_subcommands().front();
        Recorder rec(sub->get_name(), args);
        if (sub == cmd_dec) run_deconvolve(dec, rec);
        else if (sub == cmd_lg) run_logistic(lg, rec);
        else if (sub == cmd_tf) run_test_fdr(tf, rec);
        else if (sub == cmd_ac) run_accident(ac, rec);
        else if (sub == cmd_np) run_npmle(np, rec);
        else if (sub == cmd_rp) run_reproduce(rp, rec);
        else if (sub == cmd_rl) return run_replay(rl);
        return kOk;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace hbeta::cli
