"""Candidate-model abstraction and the four analytically tractable suites.

Each suite bundles, per model: a log-likelihood, a log-prior, the exact
log marginal likelihood in closed form, and exact posterior and prior
samplers. All densities live in log space throughout.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .numutil import log_normalize
from .samplers import (
    RandomStream,
    sample_beta,
    sample_ex1_m1_posterior,
    sample_exponential,
    sample_gamma,
    sample_normal,
)
from .specfun import exp_integral_e1, log_beta, log_gamma

_LOG_2PI = math.log(2.0 * math.pi)

EXAMPLE_IDS = ("ex1", "ex2", "ex3-2model", "ex3-3model", "ex4")


@dataclass(frozen=True)
class ModelComponent:
    """One candidate model with all its exact ingredients.

    log_likelihood and log_prior are vectorized over theta and return
    -inf outside their supports.
    """

    name: str
    support: Tuple[float, float]
    log_likelihood: Callable[[float, np.ndarray], np.ndarray]
    log_prior: Callable[[np.ndarray], np.ndarray]
    exact_log_marginal: Callable[[float], float]
    posterior_sampler: Callable[[float, RandomStream, Optional[int]], np.ndarray]
    prior_sampler: Callable[[RandomStream, Optional[int]], np.ndarray]

    def contains(self, theta) -> np.ndarray:
        theta = np.asarray(theta)
        lo, hi = self.support
        return (theta > lo) & (theta < hi)


@dataclass(frozen=True)
class ModelSet:
    """D model components plus (normalized) prior model weights."""

    components: Tuple[ModelComponent, ...]
    weights: np.ndarray
    example_id: Optional[str] = None

    def __post_init__(self):
        comps = tuple(self.components)
        w = np.asarray(self.weights, dtype=float)
        if len(comps) < 2:
            raise ValueError("a ModelSet needs at least two components")
        if w.shape != (len(comps),):
            raise ValueError("number of weights must match number of components")
        if not np.all(w > 0):
            raise ValueError("prior model weights must be strictly positive")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", w / w.sum())

    @property
    def D(self) -> int:
        return len(self.components)

    @property
    def log_weights(self) -> np.ndarray:
        return np.log(self.weights)

    def permuted(self, order: Sequence[int]) -> "ModelSet":
        order = list(order)
        if sorted(order) != list(range(self.D)):
            raise ValueError(f"not a permutation of 0..{self.D - 1}: {order!r}")
        return ModelSet(
            components=tuple(self.components[i] for i in order),
            weights=self.weights[order],
            example_id=self.example_id,
        )


@dataclass(frozen=True)
class ExampleConfig:
    """Which example suite to build, plus its named parameters."""

    example_id: str
    parameters: dict = field(default_factory=dict)


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


# ---------------------------------------------------------------------------
# Example 1: U(0, theta) vs Exp(theta), both with Exp(1) priors
# ---------------------------------------------------------------------------

def _ex1_components():
    def m1_loglik(y, theta):
        theta = np.asarray(theta, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ll = -np.log(theta)
        return np.where(theta > y, ll, -np.inf)

    def m2_loglik(y, theta):
        theta = np.asarray(theta, dtype=float)
        with np.errstate(divide="ignore"):
            ll = np.log(theta) - theta * y
        return np.where(theta > 0, ll, -np.inf)

    def exp1_logprior(theta):
        theta = np.asarray(theta, dtype=float)
        return np.where(theta > 0, -theta, -np.inf)

    m1 = ModelComponent(
        name="uniform",
        support=(0.0, np.inf),
        log_likelihood=m1_loglik,
        log_prior=exp1_logprior,
        exact_log_marginal=lambda y: math.log(exp_integral_e1(y)),
        posterior_sampler=lambda y, rng, size=None: sample_ex1_m1_posterior(y, rng, size),
        prior_sampler=lambda rng, size=None: sample_exponential(1.0, rng, size),
    )
    m2 = ModelComponent(
        name="exponential",
        support=(0.0, np.inf),
        log_likelihood=m2_loglik,
        log_prior=exp1_logprior,
        exact_log_marginal=lambda y: -2.0 * math.log1p(y),
        posterior_sampler=lambda y, rng, size=None: sample_gamma(2.0, 1.0 + y, rng, size),
        prior_sampler=lambda rng, size=None: sample_exponential(1.0, rng, size),
    )
    return (m1, m2)


# ---------------------------------------------------------------------------
# Example 2: N(theta, 1) likelihood, priors N(0, 1) vs N(5, 1)
# ---------------------------------------------------------------------------

def _ex2_component(mu):
    def loglik(y, theta):
        theta = np.asarray(theta, dtype=float)
        return -0.5 * _LOG_2PI - 0.5 * (y - theta) ** 2

    def logprior(theta):
        theta = np.asarray(theta, dtype=float)
        return -0.5 * _LOG_2PI - 0.5 * (theta - mu) ** 2

    return ModelComponent(
        name=f"normal-prior-{mu:g}",
        support=(-np.inf, np.inf),
        log_likelihood=loglik,
        log_prior=logprior,
        exact_log_marginal=lambda y: -0.5 * math.log(4.0 * math.pi) - (y - mu) ** 2 / 4.0,
        posterior_sampler=lambda y, rng, size=None: sample_normal((y + mu) / 2.0, 0.5, rng, size),
        prior_sampler=lambda rng, size=None: sample_normal(mu, 1.0, rng, size),
    )


# ---------------------------------------------------------------------------
# Example 3: Binomial(n, p) with Beta priors (beta-binomial marginals)
# ---------------------------------------------------------------------------

def _ex3_component(n, a, b):
    log_choose = lambda y: (log_gamma(n + 1.0) - log_gamma(y + 1.0)
                            - log_gamma(n - y + 1.0))

    def loglik(y, p):
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ll = log_choose(y) + y * np.log(p) + (n - y) * np.log1p(-p)
        return np.where((p > 0) & (p < 1), ll, -np.inf)

    def logprior(p):
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lp = ((a - 1.0) * np.log(p) + (b - 1.0) * np.log1p(-p)
                  - log_beta(a, b))
        return np.where((p > 0) & (p < 1), lp, -np.inf)

    def log_marginal(y):
        _require(float(y).is_integer() and 0 <= y <= n,
                 f"y must be an integer in [0, {n}], got {y!r}")
        return log_choose(y) + log_beta(y + a, n - y + b) - log_beta(a, b)

    return ModelComponent(
        name=f"beta-binomial-Be({a:g},{b:g})",
        support=(0.0, 1.0),
        log_likelihood=loglik,
        log_prior=logprior,
        exact_log_marginal=log_marginal,
        posterior_sampler=lambda y, rng, size=None: sample_beta(y + a, n - y + b, rng, size),
        prior_sampler=lambda rng, size=None: sample_beta(a, b, rng, size),
    )


# ---------------------------------------------------------------------------
# Example 4: N(0, 1/omega) w/ omega~Exp(a)  vs  exp(y)~Exp(lambda), lambda~Exp(b)
# ---------------------------------------------------------------------------

def _ex4_components(a, b):
    def m1_loglik(y, omega):
        omega = np.asarray(omega, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ll = 0.5 * (np.log(omega) - _LOG_2PI) - omega * y * y / 2.0
        return np.where(omega > 0, ll, -np.inf)

    def m2_loglik(y, lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ll = y + np.log(lam) - lam * np.exp(y)
        return np.where(lam > 0, ll, -np.inf)

    m1 = ModelComponent(
        name="normal-precision",
        support=(0.0, np.inf),
        log_likelihood=m1_loglik,
        log_prior=lambda t: np.where(np.asarray(t) > 0, math.log(a) - a * np.asarray(t), -np.inf),
        exact_log_marginal=lambda y: (math.log(a) - 0.5 * _LOG_2PI + log_gamma(1.5)
                                      - 1.5 * math.log(a + y * y / 2.0)),
        posterior_sampler=lambda y, rng, size=None: sample_gamma(1.5, a + y * y / 2.0, rng, size),
        prior_sampler=lambda rng, size=None: sample_exponential(a, rng, size),
    )
    m2 = ModelComponent(
        name="log-exponential",
        support=(0.0, np.inf),
        log_likelihood=m2_loglik,
        log_prior=lambda t: np.where(np.asarray(t) > 0, math.log(b) - b * np.asarray(t), -np.inf),
        exact_log_marginal=lambda y: math.log(b) + y - 2.0 * math.log(b + math.exp(y)),
        posterior_sampler=lambda y, rng, size=None: sample_gamma(2.0, b + math.exp(y), rng, size),
        prior_sampler=lambda rng, size=None: sample_exponential(b, rng, size),
    )
    return (m1, m2)


def build_example(config: ExampleConfig) -> ModelSet:
    """Instantiate one of the example suites with equal model weights."""
    ex = config.example_id
    p = dict(config.parameters)
    if ex == "ex1":
        _require(not p, f"ex1 takes no parameters, got {p!r}")
        comps = _ex1_components()
    elif ex == "ex2":
        _require(not p, f"ex2 takes no parameters, got {p!r}")
        comps = (_ex2_component(0.0), _ex2_component(5.0))
    elif ex == "ex3-2model":
        n = p.pop("n", None)
        m = p.pop("m", None)
        _require(not p, f"unexpected ex3-2model parameters: {p!r}")
        _require(n is not None and m is not None, "ex3-2model needs n and m")
        _require(float(n).is_integer() and n >= 1, f"n must be a positive integer, got {n!r}")
        _require(m > 0, f"m must be positive, got {m!r}")
        n = int(n)
        comps = (_ex3_component(n, 1.0, 1.0), _ex3_component(n, float(m), float(m)))
    elif ex == "ex3-3model":
        keys = ("n", "a", "b", "c", "d")
        _require(set(p) == set(keys), f"ex3-3model needs parameters {keys}, got {sorted(p)!r}")
        n = p["n"]
        _require(float(n).is_integer() and n >= 1, f"n must be a positive integer, got {n!r}")
        for k in ("a", "b", "c", "d"):
            _require(p[k] > 0, f"{k} must be positive, got {p[k]!r}")
        n = int(n)
        comps = (
            _ex3_component(n, 1.0, 1.0),
            _ex3_component(n, float(p["a"]), float(p["b"])),
            _ex3_component(n, float(p["c"]), float(p["d"])),
        )
    elif ex == "ex4":
        a = p.pop("a", None)
        b = p.pop("b", None)
        _require(not p, f"unexpected ex4 parameters: {p!r}")
        _require(a is not None and b is not None, "ex4 needs a and b")
        _require(a > 0 and b > 0, f"a, b must be positive, got a={a!r}, b={b!r}")
        comps = _ex4_components(float(a), float(b))
    else:
        raise ValueError(f"unknown example_id {ex!r}; expected one of {EXAMPLE_IDS}")
    D = len(comps)
    return ModelSet(components=comps, weights=np.full(D, 1.0 / D), example_id=ex)


def exact_posterior_probs(model_set: ModelSet, y) -> np.ndarray:
    """Exact posterior model probabilities from the closed-form marginals."""
    logs = model_set.log_weights + np.array(
        [c.exact_log_marginal(y) for c in model_set.components]
    )
    return log_normalize(logs)


def exact_bayes_factor(model_set: ModelSet, y, k: int, j: int) -> float:
    """Evidence ratio m_k(y) / m_j(y) (0-based component indices)."""
    if k == j:
        raise ValueError("indices must differ")
    comps = model_set.components
    return math.exp(comps[k].exact_log_marginal(y) - comps[j].exact_log_marginal(y))


def ex3_bayes_factor_closed_form(n: int, m: float, y: int) -> float:
    """Closed-form Bayes factor of Be(1,1) against Be(m,m) for Binomial(n, p).

    Factorials are generalized through Gamma, so m may be any positive
    real; everything is assembled in log space.
    """
    _require(float(n).is_integer() and n >= 1, f"n must be a positive integer, got {n!r}")
    _require(float(y).is_integer() and 0 <= y <= n, f"y must be an integer in [0, {n}], got {y!r}")
    _require(m > 0, f"m must be positive, got {m!r}")
    # B12 = [y!(n-y)!/(n+1)!] * [(m-1)!^2/(2m-1)!]
    #       * [(n+2m-1)!/((y+m-1)!(n-y+m-1)!)]
    # i.e. the ratio of the two beta-binomial marginals; factorials are
    # generalized via Gamma so it collapses to 1 when m = 1.
    lf = lambda z: log_gamma(z + 1.0)
    log_bf = (
        lf(float(y)) + lf(float(n - y)) - lf(n + 1.0)
        + 2.0 * lf(m - 1.0) - lf(2.0 * m - 1.0)
        + lf(n + 2.0 * m - 1.0) - lf(y + m - 1.0) - lf(n - y + m - 1.0)
    )
    return math.exp(log_bf)
