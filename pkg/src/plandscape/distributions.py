"""Rescaled Beta and Beta-binomial sampling with seeded, splittable streams.

Both families are parameterised by a scale parameter ``beta``, a desired mean
``mu`` and bounds ``[y_min, y_max]``; the first shape parameter is derived so
that the rescaled variable has mean ``mu``.

Random streams use numpy's PCG64 bit generator keyed by a ``SeedSequence``
whose spawn key is ``(stream_id, *substream)``.  Continuous Beta draws use
``numpy.random.Generator.beta`` (Johnk's algorithm when both shapes are at
most one, otherwise the ratio of two Marsaglia-Tsang gamma variates).
Discrete draws use inverse-CDF lookup into an exact pmf table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import betaln, gammaln, logsumexp

RNG_FAMILY = f"numpy-PCG64/SeedSequence(numpy {np.__version__})"

_U64 = 2**64


class DomainError(ValueError):
    """Raised when distribution parameters fall outside their valid domain."""


def alpha_tilde(beta: float, mu: float, y_min: float, y_max: float) -> float:
    """First Beta shape parameter giving a rescaled variable with mean ``mu``.

    >>> alpha_tilde(15, 5, 1, 30)
    2.4
    """
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    if not mu > y_min:
        raise DomainError(f"mu must be > y_min={y_min}, got {mu}")
    if not mu < y_max:
        raise DomainError(f"mu must be < y_max={y_max}, got {mu}")
    return beta * (mu - y_min) / (y_max - mu)


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by ``(seed, stream_id)``.

    The underlying generator is created lazily and is stateful, so a stream
    must be consumed by a single owner.  ``child`` derives independent
    sub-streams without touching the parent's state.
    """

    seed: int
    stream_id: int = 0
    substream: tuple[int, ...] = ()

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= value < _U64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value}")

    @cached_property
    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.substream))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, index: int) -> RngStream:
        return RngStream(self.seed, self.stream_id, (*self.substream, index))


def as_generator(rng: RngStream | np.random.Generator) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    return rng


@dataclass(frozen=True)
class ScaledBetaSpec:
    """Beta distribution rescaled onto ``[y_min, y_max]`` with mean ``mu``."""

    beta: float
    mu: float
    y_min: float
    y_max: float

    def __post_init__(self):
        alpha_tilde(self.beta, self.mu, self.y_min, self.y_max)

    @property
    def alpha(self) -> float:
        return alpha_tilde(self.beta, self.mu, self.y_min, self.y_max)

    def variance(self) -> float:
        a, b = self.alpha, self.beta
        width = self.y_max - self.y_min
        return width**2 * a * b / ((a + b) ** 2 * (a + b + 1))


@dataclass(frozen=True)
class ScaledBetaBinomialSpec:
    """Beta-binomial distribution shifted onto ``{y_min, ..., y_max}``."""

    beta: float
    mu: float
    y_min: int
    y_max: int
    _pmf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.y_min) != self.y_min or int(self.y_max) != self.y_max:
            raise DomainError("discrete bounds must be integers")
        if self.n < 1:
            raise DomainError(f"support must contain at least two values, got n={self.n}")
        alpha_tilde(self.beta, self.mu, self.y_min, self.y_max)
        object.__setattr__(self, "_pmf", _betabinom_table(self.alpha, self.beta, self.n))

    @property
    def n(self) -> int:
        return int(self.y_max) - int(self.y_min)

    @property
    def alpha(self) -> float:
        return alpha_tilde(self.beta, self.mu, self.y_min, self.y_max)

    @property
    def support(self) -> np.ndarray:
        return np.arange(int(self.y_min), int(self.y_max) + 1)

    def pmf_table(self) -> np.ndarray:
        return self._pmf.copy()

    def variance(self) -> float:
        a, b, n = self.alpha, self.beta, self.n
        return n * a * b * (a + b + n) / ((a + b) ** 2 * (a + b + 1))


def _betabinom_table(alpha: float, beta: float, n: int) -> np.ndarray:
    # The constant log B(alpha, beta) is replaced by the log-sum of the
    # unnormalised terms: analytically identical, but it cancels the shared
    # rounding error of the log-gamma evaluations.
    x = np.arange(n + 1)
    log_choose = gammaln(n + 1) - gammaln(x + 1) - gammaln(n - x + 1)
    log_w = log_choose + betaln(x + alpha, n - x + beta)
    return np.exp(log_w - logsumexp(log_w))


def beta_binomial_pmf(spec: ScaledBetaBinomialSpec, y: int) -> float:
    """Probability that the shifted Beta-binomial variable equals ``y``."""
    if int(y) != y or not spec.y_min <= y <= spec.y_max:
        raise DomainError(f"y={y} outside support {{{spec.y_min}, ..., {spec.y_max}}}")
    return float(spec._pmf[int(y) - int(spec.y_min)])


def sample_scaled_beta(spec: ScaledBetaSpec, rng, size=None):
    """Draw ``(y_max - y_min) * X + y_min`` with ``X ~ Beta(alpha, beta)``."""
    x = as_generator(rng).beta(spec.alpha, spec.beta, size=size)
    y = (spec.y_max - spec.y_min) * x + spec.y_min
    # rounding in the affine map must not leave the closed support
    y = np.clip(y, spec.y_min, spec.y_max)
    return float(y) if size is None else y


def sample_scaled_beta_binomial(spec: ScaledBetaBinomialSpec, rng, size=None):
    """Draw from the shifted Beta-binomial by inverse-CDF lookup."""
    cdf = np.cumsum(spec._pmf)
    u = as_generator(rng).random(size=size)
    x = np.minimum(np.searchsorted(cdf, u, side="right"), spec.n)
    y = x + int(spec.y_min)
    return int(y) if size is None else y.astype(np.int64)
