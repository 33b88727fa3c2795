#include "hbeta/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "hbeta/errors.hpp"
#include "hbeta/parallel.hpp"
#include "hbeta/stats.hpp"

namespace hbeta::logistic {

DesignMatrix::DesignMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (rows == 0 || cols == 0) throw InvalidArgument("design matrix needs at least one row and one column");
    if (data_.size() != rows * cols) throw InvalidArgument("design matrix data does not match its shape");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        if (!std::isfinite(data_[k])) {
            std::ostringstream msg;
            msg << "design matrix entry (" << k % rows << ", " << k / rows << ") is not finite";
            throw InvalidArgument(msg.str());
        }
    }
}

DesignMatrix DesignMatrix::from_eigen(const Eigen::MatrixXd& x) {
    std::vector<double> data(x.data(), x.data() + x.size());
    return {static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols()), std::move(data)};
}

std::vector<double> DesignMatrix::multiply(std::span<const double> beta) const {
    if (beta.size() != cols_) throw InvalidArgument("coefficient vector length differs from column count");
    std::vector<double> mu(rows_, 0.0);
    for (std::size_t c = 0; c < cols_; ++c) {
        const double b = beta[c];
        if (b == 0.0) continue;
        const double* col = data_.data() + c * rows_;
        for (std::size_t r = 0; r < rows_; ++r) mu[r] += col[r] * b;
    }
    return mu;
}

void check_labels(std::span<const double> y) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) {
            throw InvalidArgument("label " + std::to_string(i) + " is not 0 or 1");
        }
    }
}

double bernoulli_loglik(std::span<const double> y, std::span<const double> mu) {
    if (y.size() != mu.size()) throw InvalidArgument("bernoulli_loglik: length mismatch");
    check_labels(y);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * mu[i] - softplus(mu[i]);
    return s;
}

LogisticState make_state(const DesignMatrix& x, std::vector<double> beta, ProbVector pi) {
    LogisticState s{std::move(beta), {}, std::move(pi)};
    s.mu = x.multiply(s.beta);
    return s;
}

double cache_error(const LogisticState& state, const DesignMatrix& x) {
    const std::vector<double> fresh = x.multiply(state.beta);
    double worst = 0.0;
    for (std::size_t r = 0; r < fresh.size(); ++r) worst = std::max(worst, std::abs(fresh[r] - state.mu[r]));
    return worst;
}

CandidateSet::CandidateSet(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("empty candidate set");
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("candidate values must be finite");
    }
}

CandidateSet CandidateSet::regular(const Grid& grid, std::size_t per_interval) {
    if (per_interval == 0) throw InvalidArgument("need at least one candidate per interval");
    const std::size_t k = grid.intervals() * per_interval;
    const double step = (grid.hi() - grid.lo()) / static_cast<double>(k);
    std::vector<double> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = grid.lo() + (static_cast<double>(i) + 0.5) * step;
    CandidateSet set(std::move(v));
    set.equally_spaced_ = true;
    set.step_ = step;
    return set;
}

namespace {

void check_shapes(std::span<const double> y, const DesignMatrix& x) {
    if (y.size() != x.rows()) throw InvalidArgument("label count differs from design rows");
}

}  // namespace

std::vector<double> scan_log_weights(std::size_t i, const CandidateSet& candidates, const LogisticState& state,
                                     std::span<const double> y, const DesignMatrix& x, const Grid& grid) {
    if (i >= x.cols()) throw InvalidArgument("coefficient index out of range");
    if (state.pi.size() != grid.intervals()) throw InvalidArgument("grid and pi depths differ");
    const std::size_t n = x.rows();
    const auto col = x.column(i);
    const double old = state.beta[i];

    std::vector<double> base(n);
    double y_base = 0.0;
    double y_col = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        base[r] = state.mu[r] - col[r] * old;
        y_base += y[r] * base[r];
        y_col += y[r] * col[r];
    }

    std::vector<double> out(candidates.size());
    softplus_sums(base, col, candidates, out);
    const StepDensity dens(grid, state.pi);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double b = candidates[k];
        if (!grid.contains(b)) throw InvalidArgument("candidate outside the grid range");
        const double prior = step_pdf(dens, b);
        out[k] = prior > 0.0 ? y_base + b * y_col - out[k] + std::log(prior)
                             : -std::numeric_limits<double>::infinity();
    }
    return out;
}

double conditional_beta_scan(std::size_t i, const CandidateSet& candidates, LogisticState& state,
                             std::span<const double> y, const DesignMatrix& x, const Grid& grid, Rng& rng) {
    const std::vector<double> lw = scan_log_weights(i, candidates, state, y, x, grid);
    const std::vector<double> p = softmax(lw);
    const double fresh = candidates[draw_categorical(std::span<const double>(p), 1.0, rng)];
    const double delta = fresh - state.beta[i];
    if (delta != 0.0) {
        const auto col = x.column(i);
        for (std::size_t r = 0; r < col.size(); ++r) state.mu[r] += col[r] * delta;
    }
    state.beta[i] = fresh;
    return fresh;
}

IrlsResult irls_fit(std::span<const double> y, const DesignMatrix& x, const IrlsOptions& opts) {
    check_shapes(y, x);
    check_labels(y);
    const auto X = x.matrix();
    const Eigen::Map<const Eigen::VectorXd> Y(y.data(), Eigen::Index(y.size()));
    const Eigen::Index m = X.cols();

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(X.rows());
    auto loglik_of = [&](const Eigen::VectorXd& e) {
        return bernoulli_loglik(y, std::span<const double>(e.data(), std::size_t(e.size())));
    };
    double ll = loglik_of(eta);
    auto gradient_norm_at = [&](const Eigen::VectorXd& e) {
        Eigen::VectorXd q(e.size());
        for (Eigen::Index r = 0; r < e.size(); ++r) q[r] = logistic_fn(e[r]);
        return (X.transpose() * (Y - q)).norm();
    };

    IrlsResult res;
    res.loglik_trace.push_back(ll);
    auto separation = [&](const char* why) {
        throw SeparationError(std::string("logistic MLE does not exist: ") + why);
    };

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        Eigen::VectorXd p(eta.size());
        Eigen::VectorXd w(eta.size());
        for (Eigen::Index r = 0; r < eta.size(); ++r) {
            p[r] = logistic_fn(eta[r]);
            w[r] = p[r] * (1.0 - p[r]);
        }
        const Eigen::VectorXd grad = X.transpose() * (Y - p);
        res.gradient_norm = grad.norm();
        if (res.gradient_norm <= opts.gradient_tolerance) {
            res.iterations = iter - 1;
            break;
        }
        if (-2.0 * ll < 1e-6) separation("data are fit perfectly");

        const Eigen::MatrixXd info = X.transpose() * w.asDiagonal() * X;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success) separation("information matrix is singular");
        const Eigen::VectorXd step = ldlt.solve(grad);
        if (!step.allFinite()) separation("information matrix is singular");

        double scale = 1.0;
        bool accepted = false;
        for (int half = 0; half < 40; ++half, scale *= 0.5) {
            const Eigen::VectorXd cand = beta + scale * step;
            const Eigen::VectorXd cand_eta = X * cand;
            const double cand_ll = loglik_of(cand_eta);
            const bool flat = std::abs(cand_ll - ll) <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(ll);
            if (cand_ll >= ll || (flat && gradient_norm_at(cand_eta) < res.gradient_norm)) {
                beta = cand;
                eta = cand_eta;
                ll = cand_ll;
                accepted = true;
                break;
            }
        }
        res.iterations = iter;
        if (beta.lpNorm<Eigen::Infinity>() > opts.divergence_norm) separation("coefficients diverge");
        if (!accepted) break;
        res.loglik_trace.push_back(ll);
        if (iter == opts.max_iterations) {
            res.gradient_norm = gradient_norm_at(eta);
            if (res.gradient_norm > opts.gradient_tolerance) {
                throw ConvergenceError("IRLS did not reach the gradient tolerance in " +
                                       std::to_string(opts.max_iterations) + " iterations");
            }
        }
    }
    res.beta.assign(beta.data(), beta.data() + beta.size());
    res.loglik = ll;
    return res;
}

std::vector<double> irls_mle(std::span<const double> y, const DesignMatrix& x) {
    return irls_fit(y, x).beta;
}

LogisticRun run_chain_logistic(std::span<const double> y, const DesignMatrix& x, const Grid& grid,
                               const ChainConfig& cfg, std::size_t k_per_interval) {
    cfg.validate();
    check_shapes(y, x);
    check_labels(y);
    const std::size_t m = x.cols();
    const CandidateSet candidates = CandidateSet::regular(grid, k_per_interval);

    std::vector<double> mle;
    bool fallback = false;
    try {
        mle = irls_mle(y, x);
    } catch (const SeparationError& e) {
        std::cerr << "warning: " << e.what() << "; starting chains from beta = 0\n";
        mle.assign(m, 0.0);
        fallback = true;
    }

    std::vector<double> start(m);
    for (std::size_t i = 0; i < m; ++i) start[i] = std::clamp(mle[i], candidates[0], candidates[candidates.size() - 1]);
    const ProbVector start_pi = [&] {
        if (fallback) return ProbVector::uniform(grid.levels());
        const NodeCounts counts = node_counts(start, grid);
        const auto leaves = counts.level(grid.levels());
        std::vector<double> w(leaves.begin(), leaves.end());
        return ProbVector::normalized(std::move(w));
    }();

    const std::size_t per_chain = cfg.recorded_per_chain();
    std::vector<std::vector<ProbVector>> chain_pi(cfg.chains);
    std::vector<std::vector<std::vector<double>>> chain_beta(cfg.chains);
    std::vector<double> chain_drift(cfg.chains, 0.0);

    parallel_for(cfg.chains, [&](std::size_t c) {
        Rng rng(cfg.seed, c);
        LogisticState state = make_state(x, start, start_pi);
        chain_pi[c].reserve(per_chain);
        chain_beta[c].reserve(per_chain);
        for (std::size_t it = 0; it < cfg.iterations; ++it) {
            for (std::size_t i = 0; i < m; ++i) conditional_beta_scan(i, candidates, state, y, x, grid, rng);
            state.pi = build_prob_vector(posterior_phi_no_noise(node_counts(state.beta, grid), rng));
            if ((it + 1) % 100 == 0) {
                chain_drift[c] = std::max(chain_drift[c], cache_error(state, x));
                state.mu = x.multiply(state.beta);
            }
            if (it >= cfg.burn_in) {
                chain_pi[c].push_back(state.pi);
                chain_beta[c].push_back(state.beta);
            }
        }
    });

    LogisticRun run{PosteriorDraws{grid, cfg, "bernoulli-logit", {}, {}}, std::move(mle), fallback, 0.0};
    run.draws.pi_draws.reserve(per_chain * cfg.chains);
    run.draws.theta_draws.reserve(per_chain * cfg.chains);
    for (std::size_t c = 0; c < cfg.chains; ++c) {
        for (auto& p : chain_pi[c]) run.draws.pi_draws.push_back(std::move(p));
        for (auto& b : chain_beta[c]) run.draws.theta_draws.push_back(std::move(b));
        run.max_cache_error = std::max(run.max_cache_error, chain_drift[c]);
    }
    return run;
}

QSummary posterior_q(const PosteriorDraws& draws, const DesignMatrix& x) {
    const std::size_t g = draws.theta_draws.size();
    if (g == 0) throw InvalidArgument("posterior_q needs coefficient draws");
    const std::size_t n = x.rows();
    Eigen::MatrixXd coef(Eigen::Index(x.cols()), Eigen::Index(g));
    for (std::size_t d = 0; d < g; ++d) {
        if (draws.theta_draws[d].size() != x.cols()) throw InvalidArgument("coefficient draw length differs from columns");
        coef.col(Eigen::Index(d)) = Eigen::Map<const Eigen::VectorXd>(draws.theta_draws[d].data(), Eigen::Index(x.cols()));
    }

    QSummary out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    const auto X = x.matrix();
    constexpr Eigen::Index kBlock = 256;
    const double probs[] = {0.025, 0.975};
    std::vector<double> q(g);
    for (Eigen::Index r0 = 0; r0 < Eigen::Index(n); r0 += kBlock) {
        const Eigen::Index rows = std::min<Eigen::Index>(kBlock, Eigen::Index(n) - r0);
        const Eigen::MatrixXd eta = X.middleRows(r0, rows) * coef;
        for (Eigen::Index r = 0; r < rows; ++r) {
            double s = 0.0;
            for (std::size_t d = 0; d < g; ++d) {
                q[d] = logistic_fn(eta(r, Eigen::Index(d)));
                s += q[d];
            }
            const auto qs = quantiles(q, probs);
            const auto idx = std::size_t(r0 + r);
            out.mean[idx] = s / static_cast<double>(g);
            out.lo[idx] = qs[0];
            out.hi[idx] = qs[1];
        }
    }
    return out;
}

}  // namespace hbeta::logistic
