#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hbeta/analytics.hpp"
#include "hbeta/baselines.hpp"
#include "hbeta/errors.hpp"
#include "hbeta/gibbs_seq.hpp"
#include "hbeta/io.hpp"
#include "hbeta/likelihood.hpp"
#include "hbeta/logistic.hpp"
#include "hbeta/manifest.hpp"

namespace py = pybind11;
using namespace hbeta;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw InvalidArgument("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Array rows_to_matrix(const std::vector<std::vector<double>>& rows, std::size_t cols) {
    Array out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(cols)});
    double* dst = out.mutable_data();
    for (const auto& r : rows) dst = std::copy(r.begin(), r.end(), dst);
    return out;
}

Array pi_matrix(const PosteriorDraws& d) {
    Array out({static_cast<py::ssize_t>(d.size()), static_cast<py::ssize_t>(d.grid.intervals())});
    double* dst = out.mutable_data();
    for (const auto& pi : d.pi_draws) dst = std::copy(pi.values().begin(), pi.values().end(), dst);
    return out;
}

ChainConfig chain_config(std::size_t iterations, std::size_t burn_in, std::size_t chains, std::uint64_t seed,
                         const std::string& mode) {
    ChainConfig c;
    c.iterations = iterations;
    c.burn_in = burn_in;
    c.chains = chains;
    c.seed = seed;
    c.mode = parse_theta_sampling(mode);
    return c;
}

Histogram to_histogram(const std::vector<std::uint64_t>& counts) { return {counts.begin(), counts.end()}; }

py::dict mixture_dict(const DiscreteMixture& g) {
    py::dict d;
    d["support"] = to_array(g.support());
    d["weights"] = to_array(g.weights());
    return d;
}

py::dict em_dict(const EmResult& r) {
    py::dict d = mixture_dict(r.mixture);
    d["loglik"] = r.loglik;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["trace"] = to_array(r.trace);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hierarchical Beta models: Gibbs samplers, posterior summaries and empirical Bayes baselines";
    m.attr("__version__") = library_version();

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> base;
    base.call_once_and_store_result([&] { return py::exception<Error>(m, "HbetaError", PyExc_RuntimeError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidArgument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const Error& e) {
            py::set_error(base.get_stored(), e.what());
        }
    });

    py::class_<PosteriorDraws>(m, "Draws", "Pooled post burn-in draws of the leaf probabilities")
        .def_property_readonly("endpoints", [](const PosteriorDraws& d) {
            return to_array({d.grid.endpoints().begin(), d.grid.endpoints().end()});
        })
        .def_property_readonly("levels", [](const PosteriorDraws& d) { return d.grid.levels(); })
        .def_property_readonly("likelihood", [](const PosteriorDraws& d) { return d.likelihood; })
        .def_property_readonly("chains", [](const PosteriorDraws& d) { return d.config.chains; })
        .def_property_readonly("seed", [](const PosteriorDraws& d) { return d.config.seed; })
        .def_property_readonly("pi", &pi_matrix, "Draws x intervals matrix")
        .def_property_readonly("theta", [](const PosteriorDraws& d) {
            const std::size_t cols = d.theta_draws.empty() ? 0 : d.theta_draws.front().size();
            return rows_to_matrix(d.theta_draws, cols);
        }, "Latent draws (or coefficient draws for the logistic model); empty unless recorded")
        .def("mean_pi", [](const PosteriorDraws& d) {
            const ProbVector p = d.mean_pi();
            return to_array({p.values().begin(), p.values().end()});
        })
        .def("__len__", &PosteriorDraws::size)
        .def("__eq__", [](const PosteriorDraws& a, const PosteriorDraws& b) { return a == b; });

    m.def("run_chain_seq",
          [](const Array& y, int levels, double lo, double hi, const std::string& likelihood, std::size_t iterations,
             std::size_t burn_in, std::size_t chains, std::uint64_t seed, const std::string& mode,
             bool record_theta) {
              const std::vector<double> obs = to_vector(y);
              const auto lik = parse_likelihood(likelihood);
              ChainConfig cfg = chain_config(iterations, burn_in, chains, seed, mode);
              cfg.record_theta = record_theta;
              py::gil_scoped_release release;
              return run_chain_seq(obs, Grid::regular(lo, hi, levels), *lik, cfg);
          },
          py::arg("y"), py::arg("levels"), py::arg("lo"), py::arg("hi"), py::arg("likelihood") = "normal:1",
          py::arg("iterations") = 150, py::arg("burn_in") = 50, py::arg("chains") = 4, py::arg("seed") = 1,
          py::arg("mode") = "midpoint", py::arg("record_theta") = false,
          "Sequence-model Gibbs sampler on a regular grid.");

    m.def("deconv_cdf_band", [](const PosteriorDraws& d, int levels) {
        const CdfBand b = deconv_cdf_band(d, levels);
        py::dict out;
        out["x"] = to_array(b.x);
        out["mean"] = to_array(b.mean);
        out["lo"] = to_array(b.lo);
        out["hi"] = to_array(b.hi);
        return out;
    }, py::arg("draws"), py::arg("levels"));

    m.def("deconv_density", [](const PosteriorDraws& d, int levels) {
        const DensityEstimate e = deconv_density(d, levels);
        py::dict out;
        out["endpoints"] = to_array({e.grid.endpoints().begin(), e.grid.endpoints().end()});
        out["mass"] = to_array(e.mass);
        out["density"] = to_array(e.density);
        return out;
    }, py::arg("draws"), py::arg("levels"));

    m.def("posterior_theta_given_y",
          [](const PosteriorDraws& d, double y, const std::string& likelihood, std::uint64_t seed,
             const std::string& mode) {
              const auto lik = parse_likelihood(likelihood);
              Rng rng(seed, 1u << 20);
              const ThetaPosterior p = posterior_theta_given_y(d, y, *lik, parse_theta_sampling(mode), rng);
              py::dict out;
              out["mean"] = p.mean;
              out["lo"] = p.lo;
              out["hi"] = p.hi;
              out["samples"] = to_array(p.samples);
              return out;
          },
          py::arg("draws"), py::arg("y"), py::arg("likelihood"), py::arg("seed") = 1, py::arg("mode") = "midpoint");

    m.def("fdr_curves", [](const PosteriorDraws& d, double sd, const Array& points) {
        const FdrCurve c = fdr_curves(d, sd, to_vector(points));
        py::dict out;
        out["y"] = to_array(c.y);
        out["fdr"] = to_array(c.fdr);
        out["Fdr"] = to_array(c.Fdr);
        return out;
    }, py::arg("draws"), py::arg("sd"), py::arg("points"), "Local and tail-area false discovery rates.");

    m.def("fdr_threshold", [](const Array& y, const Array& Fdr, double alpha) {
        FdrCurve c;
        c.y = to_vector(y);
        c.Fdr = to_vector(Fdr);
        c.fdr.assign(c.y.size(), 0.0);
        if (c.Fdr.size() != c.y.size()) throw InvalidArgument("y and Fdr differ in length");
        return fdr_threshold(c, alpha);
    }, py::arg("y"), py::arg("Fdr"), py::arg("alpha"), "Smallest y with Fdr <= alpha, or inf.");

    m.def("hpd_interval", [](const Array& endpoints, const Array& weights, double level) {
        return hpd_interval(Grid(to_vector(endpoints)), to_vector(weights), level);
    }, py::arg("endpoints"), py::arg("weights"), py::arg("level"));

    m.def("bh_procedure", [](const Array& p, double alpha) { return bh_procedure(to_vector(p), alpha); },
          py::arg("pvalues"), py::arg("alpha"), "Indices rejected by the Benjamini-Hochberg step-up rule.");
    m.def("oracle_fdr", [](const Array& t, double y, double sd) { return oracle_fdr(to_vector(t), y, sd); },
          py::arg("theta"), py::arg("y"), py::arg("sd") = 1.0);
    m.def("oracle_Fdr", [](const Array& t, double y, double sd) { return oracle_Fdr(to_vector(t), y, sd); },
          py::arg("theta"), py::arg("y"), py::arg("sd") = 1.0);
    m.def("oracle_threshold",
          [](const Array& t, double alpha, double sd) { return oracle_threshold(to_vector(t), alpha, sd); },
          py::arg("theta"), py::arg("alpha"), py::arg("sd") = 1.0);

    m.def("accident_histogram", [] { return std::vector<std::uint64_t>(accident_histogram()); });
    m.def("simar_mixture", [] { return mixture_dict(simar_mixture()); });
    m.def("robbins_poisson", [](const std::vector<std::uint64_t>& h) {
        return robbins_poisson(to_histogram(h));
    }, py::arg("histogram"), "Robbins estimates; None where the next count is absent.");
    m.def("gamma_poisson_eb", [](const std::vector<std::uint64_t>& h) {
        const GammaPoissonFit f = gamma_poisson_eb(to_histogram(h));
        py::dict out;
        out["theta"] = f.theta;
        out["r"] = f.r;
        out["loglik"] = f.loglik;
        out["iterations"] = f.iterations;
        return out;
    }, py::arg("histogram"));
    m.def("mixture_loglik_poisson",
          [](const Array& support, const Array& weights, const std::vector<std::uint64_t>& h) {
              return mixture_loglik_poisson(DiscreteMixture(to_vector(support), to_vector(weights)),
                                            to_histogram(h));
          },
          py::arg("support"), py::arg("weights"), py::arg("histogram"));
    m.def("mixture_posterior_mean_poisson",
          [](const Array& support, const Array& weights, double y) {
              return mixture_posterior_mean_poisson(DiscreteMixture(to_vector(support), to_vector(weights)), y);
          },
          py::arg("support"), py::arg("weights"), py::arg("y"));
    m.def("npmle_em",
          [](const std::vector<std::uint64_t>& h, const Array& support, const Array& weights, int max_iterations) {
              EmOptions o;
              o.max_iterations = max_iterations;
              return em_dict(npmle_em(to_histogram(h), DiscreteMixture(to_vector(support), to_vector(weights)), o));
          },
          py::arg("histogram"), py::arg("support"), py::arg("weights"), py::arg("max_iterations") = 20000);
    m.def("npmle_multistart",
          [](const std::vector<std::uint64_t>& h, std::size_t k, std::size_t starts, std::uint64_t seed) {
              Histogram hist = to_histogram(h);
              py::gil_scoped_release release;
              EmResult r = npmle_multistart(hist, k, starts, seed);
              py::gil_scoped_acquire acquire;
              return em_dict(r);
          },
          py::arg("histogram"), py::arg("k"), py::arg("starts") = 20, py::arg("seed") = 1);

    m.def("irls_mle", [](const Array& y, const py::array_t<double, py::array::f_style | py::array::forcecast>& x) {
        if (x.ndim() != 2) throw InvalidArgument("design must be two-dimensional");
        const logistic::DesignMatrix dm(static_cast<std::size_t>(x.shape(0)), static_cast<std::size_t>(x.shape(1)),
                                        std::vector<double>(x.data(), x.data() + x.size()));
        return to_array(logistic::irls_mle(to_vector(y), dm));
    }, py::arg("y"), py::arg("x"), "Logistic maximum-likelihood coefficients by IRLS.");

    m.def("run_chain_logistic",
          [](const Array& y, const py::array_t<double, py::array::f_style | py::array::forcecast>& x, int levels,
             double lo, double hi, std::size_t iterations, std::size_t burn_in, std::size_t chains, std::uint64_t seed,
             std::size_t per_interval) {
              if (x.ndim() != 2) throw InvalidArgument("design must be two-dimensional");
              const logistic::DesignMatrix dm(static_cast<std::size_t>(x.shape(0)),
                                              static_cast<std::size_t>(x.shape(1)),
                                              std::vector<double>(x.data(), x.data() + x.size()));
              const std::vector<double> labels = to_vector(y);
              ChainConfig cfg = chain_config(iterations, burn_in, chains, seed, "midpoint");
              cfg.record_theta = true;
              std::optional<logistic::LogisticRun> run;
              {
                  py::gil_scoped_release release;
                  run = logistic::run_chain_logistic(labels, dm, Grid::regular(lo, hi, levels), cfg, per_interval);
              }
              py::dict out;
              out["mle"] = to_array(run->mle);
              out["mle_fallback"] = run->mle_fallback;
              out["max_cache_error"] = run->max_cache_error;
              out["draws"] = std::move(run->draws);
              return out;
          },
          py::arg("y"), py::arg("x"), py::arg("levels") = 6, py::arg("lo") = -24.0, py::arg("hi") = 24.0,
          py::arg("iterations") = 1000, py::arg("burn_in") = 100, py::arg("chains") = 1, py::arg("seed") = 1,
          py::arg("per_interval") = 20,
          "Grid-scan Gibbs sampler for logistic regression; draws.theta holds the coefficient draws.");

    m.def("save_draws", [](const PosteriorDraws& d, const std::string& path) { io::save_draws(path, d); },
          py::arg("draws"), py::arg("path"));
    m.def("load_draws", [](const std::string& path) { return io::load_draws(path); }, py::arg("path"));
}
