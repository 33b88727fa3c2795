"""Hierarchical Beta models for large-scale inference."""

from ._core import (
    Draws,
    HbetaError,
    __version__,
    accident_histogram,
    bh_procedure,
    deconv_cdf_band,
    deconv_density,
    fdr_curves,
    fdr_threshold,
    gamma_poisson_eb,
    hpd_interval,
    irls_mle,
    load_draws,
    mixture_loglik_poisson,
    mixture_posterior_mean_poisson,
    npmle_em,
    npmle_multistart,
    oracle_Fdr,
    oracle_fdr,
    oracle_threshold,
    posterior_theta_given_y,
    robbins_poisson,
    run_chain_logistic,
    run_chain_seq,
    save_draws,
    simar_mixture,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
