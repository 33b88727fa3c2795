#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hbeta/analytics.hpp"
#include "hbeta/baselines.hpp"
#include "hbeta/errors.hpp"
#include "oracles.hpp"

using namespace hbeta;

namespace {

PosteriorDraws make_draws(const Grid& g, std::vector<ProbVector> pis) {
    ChainConfig cfg{.iterations = pis.size() + 1, .burn_in = 1, .chains = 1};
    return PosteriorDraws{g, cfg, "normal:1", std::move(pis), {}};
}

std::vector<ProbVector> prior_draws(int levels, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ProbVector> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(build_prob_vector(sample_phi_prior(levels, rng)));
    return out;
}

double measure(const std::vector<std::pair<double, double>>& pieces) {
    double s = 0.0;
    for (const auto& [a, b] : pieces) s += b - a;
    return s;
}

}  // namespace

TEST_CASE("deconv_density") {
    const Grid g = Grid::regular(-1.0, 3.0, 4);
    const PosteriorDraws flat = make_draws(g, {ProbVector::uniform(4), ProbVector::uniform(4)});
    for (double v : deconv_density(flat, 4).density) CHECK(v == doctest::Approx(0.25));
    for (double v : deconv_density(flat, 2).density) CHECK(v == doctest::Approx(0.25));

    const auto pis = prior_draws(4, 1, 3);
    const DensityEstimate one = deconv_density(make_draws(g, pis), 4);
    for (std::size_t j = 0; j < 16; ++j) CHECK(one.density[j] == doctest::Approx(pis[0][j] / g.width(j)));

    const DensityEstimate coarse = deconv_density(make_draws(g, pis), 2);
    CHECK(coarse.grid.intervals() == 4);
    CHECK(coarse.mass[1] == doctest::Approx(pis[0][4] + pis[0][5] + pis[0][6] + pis[0][7]));
    CHECK_THROWS_AS(deconv_density(make_draws(g, pis), 5), InvalidArgument);
}

TEST_CASE("deconv_cdf_band invariants") {
    const Grid g = Grid::regular(0.0, 1.0, 8);
    const PosteriorDraws d = make_draws(g, prior_draws(8, 200, 5));
    const CdfBand band = deconv_cdf_band(d, 8);
    REQUIRE(band.x.size() == 257);
    CHECK(band.mean.front() == 0.0);
    CHECK(band.mean.back() == doctest::Approx(1.0));
    for (std::size_t i = 0; i < band.x.size(); ++i) {
        CHECK(band.lo[i] <= band.mean[i]);
        CHECK(band.mean[i] <= band.hi[i]);
        if (i > 0) {
            CHECK(band.mean[i] >= band.mean[i - 1]);
            CHECK(band.lo[i] >= band.lo[i - 1]);
            CHECK(band.hi[i] >= band.hi[i - 1]);
        }
    }

    // Shared endpoints of a coarser band carry identical values.
    const CdfBand coarse = deconv_cdf_band(d, 5);
    for (std::size_t i = 0; i < coarse.x.size(); ++i) {
        CHECK(coarse.x[i] == band.x[i * 8]);
        CHECK(coarse.mean[i] == doctest::Approx(band.mean[i * 8]).epsilon(1e-12));
        CHECK(coarse.lo[i] == doctest::Approx(band.lo[i * 8]).epsilon(1e-12));
        CHECK(coarse.hi[i] == doctest::Approx(band.hi[i * 8]).epsilon(1e-12));
    }

    const auto same = prior_draws(8, 1, 9);
    const CdfBand zero = deconv_cdf_band(make_draws(g, std::vector<ProbVector>(50, same[0])), 8);
    for (std::size_t i = 0; i < zero.x.size(); ++i) CHECK(zero.hi[i] - zero.lo[i] == doctest::Approx(0.0));

    CHECK_THROWS_AS(deconv_cdf_band(make_draws(g, prior_draws(8, 10, 1)), 8), InvalidArgument);
}

TEST_CASE("posterior_theta_given_y with a fixed step density matches Bayes-rule quadrature") {
    const Grid g = Grid::regular(-0.2, 1.2, 5);
    const ProbVector pi = prior_draws(5, 1, 21)[0];
    const NormalKnownSd lik(0.1);
    const PosteriorDraws d = make_draws(g, std::vector<ProbVector>(60, pi));
    for (double y : {0.1, 0.7, 1.0}) {
        // Prior density times likelihood, integrated piece by piece.
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < g.intervals(); ++j) {
            const double h = pi[j] / g.width(j);
            const double a = g.endpoint(j), b = g.endpoint(j + 1);
            num += h * oracle::midpoint_rule([&](double t) { return t * oracle::phi((y - t) / 0.1); }, a, b, 2000);
            den += h * oracle::midpoint_rule([&](double t) { return oracle::phi((y - t) / 0.1); }, a, b, 2000);
        }
        Rng rng(1);
        const ThetaPosterior p = posterior_theta_given_y(d, y, lik, ThetaSampling::ExactInterval, rng);
        CHECK(std::abs(p.mean - num / den) < 1e-6);
        CHECK(step_posterior_mean(g, pi, y, lik, ThetaSampling::ExactInterval) == doctest::Approx(num / den).epsilon(1e-8));
        CHECK(p.samples.size() == 60);
        CHECK(p.lo <= p.mean);
        CHECK(p.mean <= p.hi);

        double mnum = 0.0, mden = 0.0;
        for (std::size_t j = 0; j < g.intervals(); ++j) {
            const double w = pi[j] * oracle::phi((y - g.midpoint(j)) / 0.1);
            mnum += w * g.midpoint(j);
            mden += w;
        }
        CHECK(posterior_theta_given_y(d, y, lik, ThetaSampling::MidpointGrid, rng).mean == doctest::Approx(mnum / mden).epsilon(1e-12));
    }
}

TEST_CASE("posterior_theta_given_y under a flat prior centres on y") {
    const Grid g = Grid::regular(-0.2, 1.2, 10);
    const PosteriorDraws d = make_draws(g, std::vector<ProbVector>(50, ProbVector::uniform(10)));
    Rng rng(2);
    const ThetaPosterior p = posterior_theta_given_y(d, 0.5, NormalKnownSd(0.1), ThetaSampling::MidpointGrid, rng);
    CHECK(p.mean == doctest::Approx(0.5).epsilon(1e-6));
    const auto w = posterior_weights_given_y(d, 0.5, NormalKnownSd(0.1), ThetaSampling::MidpointGrid);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("fdr curves: all-null and all-alternative mixtures") {
    const Grid g = Grid::regular(-4.0, 4.0, 3);
    const std::vector<double> pts{-2.0, 0.0, 1.5, 5.0};
    const PosteriorDraws pos = make_draws(g, {ProbVector({0, 0, 0, 0, 0.1, 0.2, 0.3, 0.4})});
    const FdrCurve c0 = fdr_curves(pos, 1.0, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(c0.fdr[i] == 0.0);
        CHECK(c0.Fdr[i] == 0.0);
    }
    const PosteriorDraws neg = make_draws(g, {ProbVector({0.1, 0.2, 0.3, 0.4, 0, 0, 0, 0})});
    const FdrCurve c1 = fdr_curves(neg, 1.0, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(c1.fdr[i] == doctest::Approx(1.0));
        CHECK(c1.Fdr[i] == doctest::Approx(1.0));
    }
}

TEST_CASE("fdr curves equal the oracle when pi is the snapped empirical parameter distribution") {
    const Grid g = Grid::regular(-5.0, 5.0, 7);
    Rng rng(31);
    std::vector<double> theta(500);
    std::vector<double> counts(g.intervals(), 0.0);
    for (double& t : theta) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform() * g.intervals());
        t = g.midpoint(j);
        counts[j] += 1.0;
    }
    const PosteriorDraws d = make_draws(g, {ProbVector::normalized(counts)});
    std::vector<double> pts;
    for (double y = -3.0; y <= 6.0; y += 0.25) pts.push_back(y);
    const FdrCurve c = fdr_curves(d, 1.0, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(std::abs(c.fdr[i] - oracle_fdr(theta, pts[i])) <= 1e-10);
        CHECK(std::abs(c.Fdr[i] - oracle_Fdr(theta, pts[i])) <= 1e-10);
        // Independent evaluation of the same ratio.
        double n0 = 0.0, n = 0.0;
        for (double t : theta) {
            n += oracle::Phi_bar(pts[i] - t);
            if (t <= 0.0) n0 += oracle::Phi_bar(pts[i] - t);
        }
        CHECK(std::abs(c.Fdr[i] - n0 / n) <= 1e-10);
    }
}

TEST_CASE("fdr values stay in [0, 1] and averaging modes agree for one draw") {
    const Grid g = Grid::regular(-3.0, 3.0, 5);
    const PosteriorDraws d = make_draws(g, prior_draws(5, 30, 4));
    std::vector<double> pts;
    for (double y = -10.0; y <= 10.0; y += 0.1) pts.push_back(y);
    for (FdrAveraging a : {FdrAveraging::MeanOfRatios, FdrAveraging::RatioOfMeans}) {
        const FdrCurve c = fdr_curves(d, 1.0, pts, a);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(c.fdr[i] >= 0.0);
            CHECK(c.fdr[i] <= 1.0);
            CHECK(c.Fdr[i] >= 0.0);
            CHECK(c.Fdr[i] <= 1.0);
        }
    }
    const PosteriorDraws single = make_draws(g, prior_draws(5, 1, 4));
    const FdrCurve a = fdr_curves(single, 1.0, pts, FdrAveraging::MeanOfRatios);
    const FdrCurve b = fdr_curves(single, 1.0, pts, FdrAveraging::RatioOfMeans);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(a.Fdr[i] == doctest::Approx(b.Fdr[i]).epsilon(1e-12));

    // A fixed pi gives a continuous tail curve: no jumps on a fine grid.
    std::vector<double> fine;
    for (double y = -4.0; y <= 4.0; y += 0.001) fine.push_back(y);
    const FdrCurve cf = fdr_curves(single, 1.0, fine);
    for (std::size_t i = 1; i < fine.size(); ++i) CHECK(std::abs(cf.Fdr[i] - cf.Fdr[i - 1]) < 0.01);
}

TEST_CASE("fdr_threshold") {
    FdrCurve zero{{1.0, 2.0, 3.0}, {0, 0, 0}, {0, 0, 0}};
    CHECK(fdr_threshold(zero, 0.1) == 1.0);
    FdrCurve one{{1.0, 2.0, 3.0}, {1, 1, 1}, {1, 1, 1}};
    CHECK(fdr_threshold(one, 0.1) == kNoRejection);
    FdrCurve mixed{{1.0, 2.0, 3.0, 4.0}, {}, {0.5, 0.09, 0.2, 0.01}};
    mixed.fdr = mixed.Fdr;
    CHECK(fdr_threshold(mixed, 0.1) == 2.0);
    CHECK_THROWS_AS(fdr_threshold(FdrCurve{}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(fdr_threshold(zero, 1.0), InvalidArgument);

    const std::vector<double> y{0.5, 0.2, 0.2, 0.9};
    const auto pts = threshold_points(y, 0.25);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
    CHECK(pts.front() == 0.2);
    CHECK(pts.back() == 0.9);
    CHECK(std::find(pts.begin(), pts.end(), 0.5) != pts.end());
}

TEST_CASE("hpd_interval simple shapes") {
    const Grid g = Grid::regular(0.0, 8.0, 3);
    const std::vector<double> uni{0.01, 0.04, 0.1, 0.3, 0.35, 0.12, 0.05, 0.03};
    const auto a = hpd_interval(g, uni, 0.7);
    REQUIRE(a.size() == 1);
    CHECK(a[0].first <= 4.0);
    CHECK(a[0].second >= 5.0);

    const std::vector<double> bi{0.05, 0.3, 0.1, 0.05, 0.05, 0.1, 0.3, 0.05};
    const auto b = hpd_interval(g, bi, 0.5);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == std::pair{1.0, 2.0});
    CHECK(b[1] == std::pair{6.0, 7.0});
    CHECK_THROWS_AS(hpd_interval(g, bi, 1.0), InvalidArgument);
}

TEST_CASE("hpd_interval has minimal measure among all subsets") {
    const Grid g = Grid::regular(-1.0, 1.0, 3);
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> w(8);
        double total = 0.0;
        for (double& v : w) total += (v = rng.exponential());
        for (double& v : w) v /= total;
        const double level = 0.3 + 0.65 * rng.uniform();
        const auto pieces = hpd_interval(g, w, level);

        double mass = 0.0;
        for (std::size_t j = 0; j < 8; ++j) {
            const double mid = g.midpoint(j);
            for (const auto& [a, b] : pieces)
                if (mid > a && mid < b) mass += w[j];
        }
        CHECK(mass >= level - 1e-12);
        for (std::size_t k = 1; k < pieces.size(); ++k) CHECK(pieces[k - 1].second < pieces[k].first);

        double best = std::numeric_limits<double>::infinity();
        for (unsigned s = 1; s < 256; ++s) {
            double m = 0.0, len = 0.0;
            for (std::size_t j = 0; j < 8; ++j)
                if (s & (1u << j)) {
                    m += w[j];
                    len += g.width(j);
                }
            if (m >= level) best = std::min(best, len);
        }
        CHECK(measure(pieces) == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("selective_point_estimates cutoffs") {
    const Grid g = Grid::regular(-3.0, 3.0, 4);
    const PosteriorDraws d = make_draws(g, prior_draws(4, 5, 2));
    const std::vector<double> y{-1.0, 0.5, 2.0};
    const NormalKnownSd lik(1.0);
    const auto all = selective_point_estimates(d, y, -std::numeric_limits<double>::infinity(), lik, ThetaSampling::MidpointGrid);
    REQUIRE(all.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(all[i].index == i);
    CHECK(selective_point_estimates(d, y, kNoRejection, lik, ThetaSampling::MidpointGrid).empty());
    const auto some = selective_point_estimates(d, y, 0.5, lik, ThetaSampling::MidpointGrid);
    REQUIRE(some.size() == 2);
    CHECK(some[0].index == 1);
    Rng rng(1);
    CHECK(some[1].mean == doctest::Approx(posterior_theta_given_y(d, 2.0, lik, ThetaSampling::MidpointGrid, rng).mean));
}
