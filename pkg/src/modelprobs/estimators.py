"""The posterior-model-probability estimators under comparison.

Four Monte Carlo schemes built on within-model draws: the
likelihood-averaging estimator (Scott), its prior-weighted variant
(Congdon), the corrected joint Gibbs scheme driven by true-prior
pseudo-priors, and the Dirac plug-in limit. All row-wise ratios are
formed in log space with max subtraction.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .models import ModelSet, build_example, ExampleConfig
from .numutil import log_normalize
from .samplers import RandomStream, SampleMatrix, coupled_posterior_pair_ex2

# A run where more than this fraction of rows has an all-zero
# denominator is considered broken rather than degraded.
_MAX_DROPPED_FRACTION = 1e-3

METHODS = ("Exact", "Scott", "Congdon", "GibbsCorrected", "DiracPlugin",
           "CongdonCoupled")


@dataclass(frozen=True)
class EstimateResult:
    probs: np.ndarray
    stderrs: np.ndarray
    method: str
    T: int
    seed: int
    dropped_rows: int = 0

    def __post_init__(self):
        total = float(np.sum(self.probs))
        if not math.isclose(total, 1.0, abs_tol=1e-9):
            raise ValueError(f"probabilities sum to {total}, not 1")


def mc_stderr(per_draw_conditionals: np.ndarray, method: str = "iid") -> np.ndarray:
    """Monte Carlo standard errors of column means of a T x D matrix.

    "iid" uses the plain sample-standard-deviation formula; "batch"
    uses batch means with ceil(sqrt(T)) batches, appropriate for
    autocorrelated chain output.
    """
    cond = np.asarray(per_draw_conditionals, dtype=float)
    T = cond.shape[0]
    if T < 2:
        raise ValueError("standard errors require at least two draws")
    if method == "iid":
        return cond.std(axis=0, ddof=1) / math.sqrt(T)
    if method == "batch":
        nb = math.ceil(math.sqrt(T))
        size = T // nb
        trimmed = cond[: nb * size].reshape(nb, size, -1)
        bmeans = trimmed.mean(axis=1)
        return bmeans.std(axis=0, ddof=1) / math.sqrt(nb)
    raise ValueError(f"unknown stderr method {method!r}")


def _row_conditionals(model_set: ModelSet, samples: SampleMatrix,
                      include_prior: bool) -> tuple:
    draws = samples.draws
    T, D = draws.shape
    if D != model_set.D:
        raise ValueError("sample matrix width does not match number of models")
    logw = np.empty((T, D))
    for k, comp in enumerate(model_set.components):
        lw = model_set.log_weights[k] + comp.log_likelihood(samples.y, draws[:, k])
        if include_prior:
            lw = lw + comp.log_prior(draws[:, k])
        logw[:, k] = lw
    finite = np.isfinite(logw.max(axis=1))
    dropped = int(T - finite.sum())
    if dropped > _MAX_DROPPED_FRACTION * T:
        raise RuntimeError(
            f"{dropped}/{T} rows had an all-zero denominator; run is unusable"
        )
    cond = log_normalize(logw[finite], axis=1)
    return cond, dropped


def _sample_seed(samples: SampleMatrix) -> int:
    return int(samples.seeds[0][0]) if samples.seeds else 0


def _stderr_or_zero(cond: np.ndarray) -> np.ndarray:
    if cond.shape[0] < 2:
        return np.zeros(cond.shape[1])
    return mc_stderr(cond)


def scott_estimate(model_set: ModelSet, samples: SampleMatrix) -> EstimateResult:
    """Likelihood-averaging estimator over within-model posterior draws."""
    cond, dropped = _row_conditionals(model_set, samples, include_prior=False)
    return EstimateResult(
        probs=cond.mean(axis=0), stderrs=_stderr_or_zero(cond), method="Scott",
        T=samples.T, seed=_sample_seed(samples), dropped_rows=dropped,
    )


def congdon_estimate(model_set: ModelSet, samples: SampleMatrix) -> EstimateResult:
    """Prior-weighted variant: each row ratio also carries the priors."""
    cond, dropped = _row_conditionals(model_set, samples, include_prior=True)
    return EstimateResult(
        probs=cond.mean(axis=0), stderrs=_stderr_or_zero(cond), method="Congdon",
        T=samples.T, seed=_sample_seed(samples), dropped_rows=dropped,
    )


def congdon_coupled_ex2(y, T, rng: RandomStream) -> EstimateResult:
    """Congdon's estimator on common-random-number coupled draws (two-normal suite).

    With one shared normal sequence driving both posterior columns the
    row ratios are constant in the noise, so the result matches the
    closed-form posterior probability for any T and seed.
    """
    model_set = build_example(ExampleConfig("ex2"))
    samples = coupled_posterior_pair_ex2(y, T, rng)
    base = congdon_estimate(model_set, samples)
    return EstimateResult(probs=base.probs, stderrs=base.stderrs,
                          method="CongdonCoupled", T=base.T, seed=rng.seed,
                          dropped_rows=base.dropped_rows)


def dirac_plugin(model_set: ModelSet, theta_hat: Sequence[float], y) -> EstimateResult:
    """Point-mass limit of the prior-weighted estimator at fixed theta_hat."""
    theta_hat = np.asarray(theta_hat, dtype=float)
    if theta_hat.shape != (model_set.D,):
        raise ValueError("theta_hat must supply one value per model")
    logs = np.empty(model_set.D)
    for k, comp in enumerate(model_set.components):
        logs[k] = (model_set.log_weights[k]
                   + float(comp.log_likelihood(y, theta_hat[k]))
                   + float(comp.log_prior(theta_hat[k])))
    if not np.isfinite(logs.max()):
        raise RuntimeError("all plug-in densities are zero; result undefined")
    return EstimateResult(probs=log_normalize(logs), stderrs=np.zeros(model_set.D),
                          method="DiracPlugin", T=0, seed=0)


def gibbs_corrected(model_set: ModelSet, y, T, rng: RandomStream,
                    burn_in: int = 0, rao_blackwell: bool = True) -> EstimateResult:
    """Joint Gibbs scheme over (theta_1..theta_D, M) with true-prior pseudo-priors.

    Alternates exact draws of theta given the model index (posterior
    for the current model, prior for the rest) with a categorical draw
    of the index given theta. Returns the average of the conditional
    index probabilities over the post-burn-in sweeps (or the indicator
    frequencies when rao_blackwell=False); standard errors use batch
    means since the chain is autocorrelated through the index.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T!r}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in!r}")
    T, burn_in = int(T), int(burn_in)
    total = T + burn_in
    D = model_set.D
    logw = model_set.log_weights

    # All randomness is pre-drawn from dedicated substreams; the sweep
    # loop itself is deterministic given the pools.
    lik_post = np.empty((total, D))
    lik_prior = np.empty((total, D))
    for k, comp in enumerate(model_set.components):
        post = np.asarray(comp.posterior_sampler(y, rng.substream(2 * k), total))
        prior = np.asarray(comp.prior_sampler(rng.substream(2 * k + 1), total))
        lik_post[:, k] = logw[k] + comp.log_likelihood(y, post)
        lik_prior[:, k] = logw[k] + comp.log_likelihood(y, prior)
        if not np.all(np.isfinite(lik_post[:, k])):
            raise AssertionError(
                f"posterior draw with zero likelihood in component {k}"
            )

    # cond[t, m, :] = P(M = . | theta) when the sweep-t theta vector was
    # built conditioning on model index m.
    cond = np.empty((total, D, D))
    for m in range(D):
        lw = lik_prior.copy()
        lw[:, m] = lik_post[:, m]
        cond[:, m, :] = log_normalize(lw, axis=1)

    u_chain = rng.substream(2 * D).gen.random(total)
    u_init = float(rng.substream(2 * D + 1).gen.random())

    cum_w = np.cumsum(model_set.weights)
    m = int(np.searchsorted(cum_w, u_init, side="right"))
    m = min(m, D - 1)

    thresholds = np.cumsum(cond, axis=2)[:, :, :-1].tolist()
    u_list = u_chain.tolist()
    path = [0] * total
    for t in range(total):
        path[t] = m
        thr = thresholds[t][m]
        u = u_list[t]
        m = 0
        for c in thr:
            if u < c:
                break
            m += 1

    rows = cond[np.arange(total), path, :][burn_in:]
    if rao_blackwell:
        probs = rows.mean(axis=0)
    else:
        states = np.asarray(path[burn_in:], dtype=int)
        # indicator of the index drawn at each kept sweep: shift path by
        # one since path[t] holds the conditioning index, and the final
        # drawn index is m
        states = np.append(states[1:], m)
        probs = np.bincount(states, minlength=D) / float(T)
    stderrs = mc_stderr(rows, method="batch") if T >= 2 else np.zeros(D)
    return EstimateResult(probs=probs, stderrs=stderrs, method="GibbsCorrected",
                          T=T, seed=rng.seed)
