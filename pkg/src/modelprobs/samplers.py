"""Seedable random streams and the exact samplers the model suites need.

Every sampler is a pure function of its parameters and a RandomStream,
so identical (seed, stream_id) always reproduces the same draws.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

_MASK64 = (1 << 64) - 1

# Guard against pathological accept-reject inputs (acceptance rate for
# the uniform-model posterior collapses as y -> 0).
_MAX_PROPOSALS_PER_DRAW = 10_000_000


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_stream_id(parent_id: int, key: int) -> int:
    """Strong-hash mix of a substream key into a parent stream id."""
    return _splitmix64(_splitmix64(parent_id & _MASK64) ^ _splitmix64(key & _MASK64))


class RandomStream:
    """A seeded PCG64 stream with deterministic substream derivation.

    (seed, stream_id) fully determines the draw sequence; substreams
    derived with distinct keys are statistically independent.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed)
        self.stream_id = int(stream_id) & _MASK64
        ss = np.random.SeedSequence([self.seed & _MASK64, self.stream_id])
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def substream(self, key: int) -> "RandomStream":
        return RandomStream(self.seed, derive_stream_id(self.stream_id, key))

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass
class SampleMatrix:
    """T x D matrix of per-model draws at a fixed observation y.

    Column k holds draws from model k's within-model posterior unless
    `target` declares otherwise ("prior", "coupled").
    """

    draws: np.ndarray
    y: float
    example_id: Optional[str] = None
    target: str = "posterior"
    seeds: tuple = field(default_factory=tuple)

    @property
    def T(self) -> int:
        return self.draws.shape[0]

    @property
    def D(self) -> int:
        return self.draws.shape[1]


def sample_gamma(shape, rate, rng: RandomStream, size=None):
    """Gamma(shape, rate) draws, density proportional to x^(shape-1) e^(-rate x)."""
    if not (shape > 0 and rate > 0):
        raise ValueError(f"gamma requires shape, rate > 0, got {shape!r}, {rate!r}")
    return rng.gen.gamma(shape, 1.0 / rate, size=size)


def sample_beta(a, b, rng: RandomStream, size=None):
    if not (a > 0 and b > 0):
        raise ValueError(f"beta requires a, b > 0, got {a!r}, {b!r}")
    return rng.gen.beta(a, b, size=size)


def sample_normal(mean, variance, rng: RandomStream, size=None):
    if not variance > 0:
        raise ValueError(f"normal requires variance > 0, got {variance!r}")
    return rng.gen.normal(mean, np.sqrt(variance), size=size)


def sample_exponential(rate, rng: RandomStream, size=None):
    if not rate > 0:
        raise ValueError(f"exponential requires rate > 0, got {rate!r}")
    return rng.gen.exponential(1.0 / rate, size=size)


def sample_ex1_m1_posterior(y, rng: RandomStream, size=None, return_proposals=False):
    """Draws from the density proportional to t^-1 e^-t on (y, inf), y > 0.

    Accept-reject with an Exp(1) proposal translated by y; a proposal t
    is accepted with probability y/t.
    """
    if not y > 0:
        raise ValueError(f"requires y > 0, got {y!r}")
    n = 1 if size is None else int(size)
    out = np.empty(n)
    filled = 0
    proposals = 0
    budget = _MAX_PROPOSALS_PER_DRAW * n
    while filled < n:
        batch = max(64, 2 * (n - filled))
        theta = y + rng.gen.exponential(1.0, size=batch)
        u = rng.gen.random(batch)
        accepted = theta[u < y / theta]
        proposals += batch
        take = min(accepted.size, n - filled)
        out[filled:filled + take] = accepted[:take]
        filled += take
        if proposals > budget:
            raise RuntimeError(
                f"accept-reject exceeded {budget} proposals at y={y}"
            )
    result = out[0] if size is None else out
    if return_proposals:
        return result, proposals
    return result


def coupled_posterior_pair_ex2(y, T, rng: RandomStream) -> SampleMatrix:
    """Common-random-number coupled posterior draws for the two-normal suite.

    One shared standard normal per row drives both columns:
    theta1 = y/2 + eps/sqrt(2), theta2 = (y+5)/2 + eps/sqrt(2).
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T!r}")
    eps = rng.gen.standard_normal(int(T))
    shift = eps / np.sqrt(2.0)
    draws = np.column_stack([y / 2.0 + shift, (y + 5.0) / 2.0 + shift])
    return SampleMatrix(draws=draws, y=float(y), example_id="ex2", target="coupled",
                        seeds=((rng.seed, rng.stream_id),))


def sample_within_model_posteriors(model_set, y, T, rng: RandomStream) -> SampleMatrix:
    """Independent exact posterior draws, one column per model component.

    Each column uses its own substream, so the matrix is reproducible
    and columns are mutually independent.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T!r}")
    T = int(T)
    cols = []
    seeds = []
    for k, comp in enumerate(model_set.components):
        sub = rng.substream(k)
        seeds.append((sub.seed, sub.stream_id))
        cols.append(np.asarray(comp.posterior_sampler(y, sub, T)))
    return SampleMatrix(draws=np.column_stack(cols), y=float(y),
                        example_id=model_set.example_id, seeds=tuple(seeds))
