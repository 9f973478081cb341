"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single
``criterion N PASS/FAIL`` line directly to the terminal (bypassing
pytest capture) before asserting, so a plain ``pytest -v`` run shows a
per-criterion scoreboard.  Criteria with soft runtime targets also
print the measured wall time.
"""

import filecmp
import math
import sys
import time

import numpy as np
import pytest
from scipy import integrate, stats

from modelprobs.cli import cmd_figures
from modelprobs.estimators import (
    congdon_coupled_ex2,
    congdon_estimate,
    dirac_plugin,
    gibbs_corrected,
    scott_estimate,
)
from modelprobs.models import (
    ExampleConfig,
    ModelSet,
    build_example,
    ex3_bayes_factor_closed_form,
    exact_bayes_factor,
    exact_posterior_probs,
)
from modelprobs.samplers import (
    RandomStream,
    SampleMatrix,
    sample_beta,
    sample_ex1_m1_posterior,
    sample_gamma,
    sample_normal,
    sample_within_model_posteriors,
)
from modelprobs.specfun import exp_integral_e1


REPORT_LINES = []


def report(num, label, ok, runtime=None):
    extra = f"  [{runtime:.1f}s]" if runtime is not None else ""
    line = f"criterion {num} {'PASS' if ok else 'FAIL'}: {label}{extra}"
    REPORT_LINES.append(line)
    print(line, file=sys.__stdout__, flush=True)
    return line


def ex1_samples(y, T, seed):
    s = build_example(ExampleConfig("ex1"))
    return s, sample_within_model_posteriors(s, y, T, RandomStream(seed))


def test_criterion_1_exact_values():
    s = build_example(ExampleConfig("ex1"))
    checks = [
        abs(exact_posterior_probs(s, 0.2)[0] - 0.6378) <= 5e-4,
        abs(exact_posterior_probs(s, 0.9)[0] - 0.4843) <= 5e-4,
        abs(exact_bayes_factor(s, 0.2, 0, 1) - 1.760) <= 2e-3,
        abs(exact_bayes_factor(s, 0.9, 0, 1) - 0.939) <= 2e-3,
    ]
    line = report(1, "exact probabilities 0.6378/0.4843 and Bayes factors "
                     "1.760/0.939", all(checks))
    assert all(checks), line


def test_criterion_2_likelihood_averaging_bias():
    t0 = time.perf_counter()
    vals = {}
    for y in (0.2, 0.9):
        s, sm = ex1_samples(y, 10**6, 2002)
        p = scott_estimate(s, sm).probs[0]
        vals[y] = (p, p / (1.0 - p))
    checks = [
        abs(vals[0.2][0] - 0.6554) <= 0.01,
        abs(vals[0.9][0] - 0.6789) <= 0.01,
        abs(vals[0.2][1] / 1.898 - 1.0) <= 0.03,
        abs(vals[0.9][1] / 2.11 - 1.0) <= 0.03,
    ]
    line = report(2, "likelihood-averaging bias at T=1e6: "
                     f"{vals[0.2][0]:.4f}/{vals[0.9][0]:.4f} vs 0.6554/0.6789 "
                     "(target < 30s)", all(checks), time.perf_counter() - t0)
    assert all(checks), line


def test_criterion_3_prior_weighted_bias():
    t0 = time.perf_counter()
    vals = {}
    for y in (0.2, 0.9):
        s, sm = ex1_samples(y, 10**6, 2002)
        p = congdon_estimate(s, sm).probs[0]
        vals[y] = (p, p / (1.0 - p))
    checks = [
        abs(vals[0.2][0] - 0.7919) <= 0.01,
        abs(vals[0.9][0] - 0.5633) <= 0.01,
        abs(vals[0.2][1] / 3.805 - 1.0) <= 0.03,
        abs(vals[0.9][1] / 1.288 - 1.0) <= 0.03,
    ]
    line = report(3, "prior-weighted bias at T=1e6: "
                     f"{vals[0.2][0]:.4f}/{vals[0.9][0]:.4f} vs 0.7919/0.5633 "
                     "(target < 30s)", all(checks), time.perf_counter() - t0)
    assert all(checks), line


def test_criterion_4_joint_chain_consistency():
    t0 = time.perf_counter()
    s = build_example(ExampleConfig("ex1"))
    root = RandomStream(7)
    checks = []
    vals = []
    for i, (y, target) in enumerate([(0.2, 0.6370), (0.9, 0.4843)]):
        rng = root if i == 0 else root.substream(i)
        res = gibbs_corrected(s, y, 10**6, rng)
        exact = exact_posterior_probs(s, y)[0]
        vals.append(res.probs[0])
        checks.append(abs(res.probs[0] - target) <= 0.005)
        checks.append(abs(res.probs[0] - exact) <= 4.0 * res.stderrs[0])
    line = report(4, "joint-chain estimates at T=1e6: "
                     f"{vals[0]:.4f}/{vals[1]:.4f} vs 0.6370/0.4843, within "
                     "4*stderr of exact (target < 60s)",
                  all(checks), time.perf_counter() - t0)
    assert all(checks), line


def test_criterion_5_wrong_model_selection():
    s, sm = ex1_samples(0.9, 10**5, 2002)
    sc = scott_estimate(s, sm).probs[0]
    co = congdon_estimate(s, sm).probs[0]
    exact = exact_posterior_probs(s, 0.9)[0]
    ok = sc > 0.5 and co > 0.5 and exact < 0.5
    line = report(5, "wrong-model selection at y=0.9: estimators "
                     f"{sc:.3f}/{co:.3f} > 0.5 while exact {exact:.3f} < 0.5", ok)
    assert ok, line


def test_criterion_6_coupled_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    for y in np.linspace(-3.0, 8.0, 50):
        closed = 1.0 / (1.0 + math.exp(5.0 * (2.0 * y - 5.0) / 4.0))
        for T in (1, 4):
            res = congdon_coupled_ex2(float(y), T, RandomStream(606))
            worst = max(worst, abs(res.probs[0] - closed))
    ok = worst <= 1e-12
    line = report(6, f"coupled estimator exact on 50-point grid, T down to 1 "
                     f"(max dev {worst:.2e}, target < 1s)",
                  ok, time.perf_counter() - t0)
    assert ok, line


def test_criterion_7_variance_example_divergence():
    # NOTE: expected to fail as stated.  The estimator's long-run value at
    # this configuration is 0.05141 +/- 4e-5 (verified by two independent
    # 4e6-draw evaluations of the per-draw ratio), which sits just above
    # the 0.05 threshold; the threshold is only reached for y >~ 22.  The
    # qualitative divergence (0.05 vs > 0.99) is real and is asserted by
    # the regression test in test_estimators.py.
    t0 = time.perf_counter()
    s = build_example(ExampleConfig("ex4", {"a": 1.0, "b": 1.0}))
    exact = exact_posterior_probs(s, 20.0)[0]
    sm = sample_within_model_posteriors(s, 20.0, 10**4, RandomStream(2002))
    est = congdon_estimate(s, sm).probs[0]
    ok = est < 0.05 and exact > 0.99
    line = report(7, f"variance-example divergence at y=20: estimate {est:.4f} "
                     f"< 0.05 while exact {exact:.4f} > 0.99 (target < 5s)",
                  ok, time.perf_counter() - t0)
    assert ok, line


def test_criterion_8_property_suite():
    t0 = time.perf_counter()
    checks = []
    KS_T = 100_000
    ks_threshold = 1.63 / math.sqrt(KS_T)

    for seed in (101, 102, 103):
        # normalization and support across all suites
        for cfg, y in ((ExampleConfig("ex1"), 0.7),
                       (ExampleConfig("ex2"), 1.5),
                       (ExampleConfig("ex3-2model", {"n": 15, "m": 100.0}), 6),
                       (ExampleConfig("ex4", {"a": 0.56, "b": 0.7}), 2.0)):
            s = build_example(cfg)
            sm = sample_within_model_posteriors(s, y, 4_000, RandomStream(seed))
            for k, comp in enumerate(s.components):
                checks.append(bool(np.all(comp.contains(sm.draws[:, k]))))
            for res in (scott_estimate(s, sm), congdon_estimate(s, sm),
                        gibbs_corrected(s, y, 4_000,
                                        RandomStream(seed).substream(99))):
                checks.append(abs(res.probs.sum() - 1.0) < 1e-10)
                checks.append(bool(np.all((res.probs >= 0) & (res.probs <= 1))))

        # label equivariance and weight-scaling invariance
        s3 = build_example(ExampleConfig(
            "ex3-3model", {"n": 12, "a": 0.3, "b": 1.8, "c": 200.0, "d": 200.0}))
        sm3 = sample_within_model_posteriors(s3, 4, 4_000, RandomStream(seed))
        perm = [1, 2, 0]
        perm_sm = SampleMatrix(draws=sm3.draws[:, perm], y=sm3.y)
        scaled = ModelSet(components=s3.components,
                          weights=np.array([9.0, 9.0, 9.0]))
        for fn in (scott_estimate, congdon_estimate):
            base = fn(s3, sm3).probs
            checks.append(bool(np.allclose(fn(s3.permuted(perm), perm_sm).probs,
                                           base[perm], atol=1e-13)))
            checks.append(bool(np.allclose(fn(scaled, sm3).probs, base,
                                           atol=1e-12)))

        # sampler exactness (Kolmogorov-Smirnov at alpha ~ 0.01)
        rng = RandomStream(seed)
        ks_cases = [
            (sample_gamma(2.0, 1.2, rng.substream(0), KS_T),
             stats.gamma(a=2.0, scale=1 / 1.2).cdf),
            (sample_beta(8.0, 9.0, rng.substream(1), KS_T),
             stats.beta(8.0, 9.0).cdf),
            (sample_normal(0.5, 0.5, rng.substream(2), KS_T),
             stats.norm(0.5, math.sqrt(0.5)).cdf),
        ]
        for draws, cdf in ks_cases:
            checks.append(stats.kstest(draws, cdf).statistic < ks_threshold)
        ar = sample_ex1_m1_posterior(0.2, rng.substream(3), KS_T)
        e1_02 = exp_integral_e1(0.2)

        def ar_cdf(t):
            t = np.atleast_1d(np.maximum(t, 0.2 * (1 + 1e-15)))
            return (e1_02 - np.array([exp_integral_e1(v) for v in t])) / e1_02

        checks.append(stats.kstest(ar, ar_cdf).statistic < ks_threshold)

        # plug-in equality on constant columns
        s1 = build_example(ExampleConfig("ex1"))
        theta_hat = [0.5 + 0.01 * seed, 1.5]
        plug = dirac_plugin(s1, theta_hat, 0.2)
        const = SampleMatrix(draws=np.tile(theta_hat, (25, 1)), y=0.2)
        checks.append(bool(np.allclose(plug.probs,
                                       congdon_estimate(s1, const).probs,
                                       atol=1e-15)))

    # special-function and closed-form oracle agreement (deterministic)
    for x in (0.05, 0.2, 1.0, 3.0, 7.5):
        oracle, _ = integrate.quad(lambda t: math.exp(-t) / t, x, np.inf,
                                   epsabs=0.0, epsrel=1e-13)
        checks.append(abs(exp_integral_e1(x) / oracle - 1.0) < 1e-10)
    for n, m, y in ((15, 100.0, 7), (15, 510.0, 0), (9, 1.0, 4)):
        s = build_example(ExampleConfig("ex3-2model", {"n": n, "m": m}))
        oracle = math.exp(s.components[0].exact_log_marginal(y)
                          - s.components[1].exact_log_marginal(y))
        checks.append(abs(ex3_bayes_factor_closed_form(n, m, y) / oracle - 1.0)
                      < 1e-10)

    ok = all(checks)
    line = report(8, f"property suite, {len(checks)} checks over 3 seeds "
                     "(target < 2 min)", ok, time.perf_counter() - t0)
    assert ok, line


def test_criterion_9_figure_data_regeneration(tmp_path):
    t0 = time.perf_counter()
    out_a = tmp_path / "a"
    written = cmd_figures(out_a, plot=False, verbose=False)
    elapsed = time.perf_counter() - t0
    checks = [len(written) == 12, elapsed < 600.0]

    # determinism: regenerating a cheap panel and an expensive-family panel
    # byte-reproduces the CSVs
    out_b = tmp_path / "b"
    cmd_figures(out_b, plot=False, only=["fig2", "fig5_panel4"], verbose=False)
    for stem in ("fig2", "fig5_panel4"):
        checks.append(filecmp.cmp(out_a / f"{stem}.csv", out_b / f"{stem}.csv",
                                  shallow=False))

    def load(stem):
        import csv

        with open(out_a / f"{stem}.csv") as fh:
            rows = list(csv.DictReader(
                line for line in fh if not line.startswith("#")))
        return {k: np.array([float(r[k]) for r in rows]) for k in rows[0]}

    # the coupled column of fig2 matches the closed form to 1e-12
    fig2 = load("fig2")
    closed = 1.0 / (1.0 + np.exp(5.0 * (2.0 * fig2["y"] - 5.0) / 4.0))
    checks.append(bool(np.max(np.abs(fig2["coupled"] - closed)) <= 1e-12))

    # each fig5 panel: the exact curve rises to the right while the
    # estimated curve falls away below it, crossing in at least one panel
    flips = 0
    for i in (1, 2, 3, 4):
        panel = load(f"fig5_panel{i}")
        e, c = panel["exact"], panel["congdon"]
        checks.append(e[-1] > e[0] and e[-1] > 0.6)
        checks.append(c[-1] < c[0])
        checks.append(c[-1] < e[-1] - 0.2)
        d = c - e
        flips += int(d.min() < 0.0 < d.max())
    checks.append(flips >= 1)

    ok = all(checks)
    line = report(9, "figure-data regeneration: deterministic CSVs, exact "
                     "coupled column, rising-exact/falling-estimate panels "
                     "(target < 10 min)", ok, time.perf_counter() - t0)
    assert ok, line
