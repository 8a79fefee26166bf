"""Policy arrays, budget feasibility, target weights and performance scores."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .distributions import ScaledBetaBinomialSpec, as_generator, sample_scaled_beta_binomial
from .network import InteractionMatrix

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True)
class BudgetSpec:
    """Alphabet size ``A`` and total budget ``B_T``.

    ``B_T`` is real-valued; any value at or above ``N * (A - 1)`` leaves the
    whole policy space feasible.
    """

    alphabet: int
    total_budget: float

    def __post_init__(self):
        if int(self.alphabet) != self.alphabet or self.alphabet < 2:
            raise ValueError(f"A must be an integer >= 2, got {self.alphabet}")
        if not self.total_budget >= 0:
            raise ValueError(f"B_T must be >= 0, got {self.total_budget}")

    def per_policy_budget(self, n_policies: int) -> float:
        return self.total_budget / n_policies

    def binds(self, n_policies: int) -> bool:
        return self.total_budget < n_policies * (self.alphabet - 1)


@dataclass(frozen=True)
class ImportanceWeights:
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.int64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-D array")
        if np.any((w < 1) | (w > 10)):
            raise ValueError("weights must lie in {1, ..., 10}")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def sigma(self) -> int:
        return int(self.weights.sum())

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class PerformanceParams:
    eta: float = 3.0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")


def as_policy_array(x, alphabet: int | None = None) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ValueError("a policy array must be one-dimensional")
    if not np.issubdtype(arr.dtype, np.integer) and not np.all(arr == np.round(arr)):
        raise ValueError("allocations must be integers")
    arr = arr.astype(np.int64)
    if np.any(arr < 0) or (alphabet is not None and np.any(arr > alphabet - 1)):
        raise ValueError(f"allocations must lie in {{0, ..., A-1}}, got {arr.tolist()}")
    return arr


def cost(x) -> int:
    return int(np.sum(x))


def is_feasible(x, budget: BudgetSpec) -> bool:
    return cost(x) <= budget.total_budget


def iter_policy_space(n: int, alphabet: int):
    """All of ``{0, ..., A-1}^n`` in lexicographic order."""
    return itertools.product(range(alphabet), repeat=n)


def _check_enumerable(n: int, alphabet: int, limit: int = ENUMERATION_LIMIT):
    if alphabet**n > limit:
        raise ValueError(f"A^N = {alphabet}^{n} exceeds the enumeration limit {limit}")


def count_feasible(n: int, budget: BudgetSpec) -> int:
    """Size of the feasible region by exhaustive enumeration (small ``n`` only)."""
    _check_enumerable(n, budget.alphabet)
    return sum(1 for x in iter_policy_space(n, budget.alphabet) if sum(x) <= budget.total_budget)


def sample_weights(m: int, mu_w: float, beta_w: float, rng) -> ImportanceWeights:
    spec = ScaledBetaBinomialSpec(beta_w, mu_w, 1, 10)
    return ImportanceWeights(sample_scaled_beta_binomial(spec, rng, size=m))


def individual_performance(x, row, k_in: int, params: PerformanceParams, alphabet: int) -> float:
    """Logistic-type score of one target, ``1/2 + tanh(.)/2``.

    A target with no incoming edges scores exactly 1/2.
    """
    if k_in == 0:
        return 0.5
    s = float(np.dot(np.asarray(row, dtype=float), np.asarray(x, dtype=float)))
    return 0.5 + 0.5 * math.tanh(params.eta * s / ((alphabet - 1) * k_in))


def tanh_scale(matrix: InteractionMatrix, params: PerformanceParams, alphabet: int) -> np.ndarray:
    """Per-target factor multiplying the dot product inside ``tanh``.

    Targets without incoming edges get a factor of 0, i.e. a score of 1/2.
    """
    k_in = matrix.indegrees()
    with np.errstate(divide="ignore"):
        scale = params.eta / ((alphabet - 1) * k_in.astype(float))
    scale[k_in == 0] = 0.0
    return scale


def performance_from_dots(dots: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Individual scores from dot products; ``dots`` is ``(M,)`` or ``(M, K)``."""
    if dots.ndim == 1:
        return 0.5 + 0.5 * np.tanh(scale * dots)
    return 0.5 + 0.5 * np.tanh(scale[:, None] * dots)


def weighted_scores(f: np.ndarray, weights: np.ndarray, sigma: int) -> np.ndarray:
    """Column-wise weighted mean of a ``(M, K)`` score matrix.

    Accumulates targets strictly in order so every column's value depends
    only on that column's entries, not on its position or on ``K``.
    ``cumsum`` is used rather than ``sum`` because it never switches to
    pairwise summation.
    """
    return np.cumsum(weights[:, None] * f, axis=0)[-1] / sigma


def dot_products(coefficients: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """``R_j . X`` for every target and every array in ``xs``.

    ``xs`` is ``(N,)`` or ``(K, N)``; the result is ``(M,)`` or ``(M, K)``.
    Policies are accumulated in index order, so a given array always gets
    bitwise the same dot products however it is batched.
    """
    xs = np.asarray(xs, dtype=float)
    single = xs.ndim == 1
    xs = np.atleast_2d(xs)
    acc = np.zeros((coefficients.shape[0], xs.shape[0]))
    for i in range(coefficients.shape[1]):
        acc += coefficients[:, i : i + 1] * xs[:, i]
    return acc[:, 0] if single else acc


def performance_array(x, matrix: InteractionMatrix, params: PerformanceParams, alphabet: int) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (matrix.n_policies,):
        raise ValueError(f"policy array of shape {x.shape} does not match N={matrix.n_policies}")
    dots = dot_products(matrix.coefficients, x)
    return performance_from_dots(dots, tanh_scale(matrix, params, alphabet))


def overall_performance(f, w: ImportanceWeights) -> float:
    f = np.asarray(f, dtype=float)
    if f.shape != w.weights.shape:
        raise ValueError(f"performance array of length {f.size} does not match {len(w)} weights")
    return float(weighted_scores(f[:, None], w.weights, w.sigma)[0])


def evaluate(x, matrix: InteractionMatrix, weights: ImportanceWeights, params: PerformanceParams, alphabet: int) -> float:
    """Overall performance of one policy array."""
    return overall_performance(performance_array(x, matrix, params, alphabet), weights)


def sample_initial_condition(n: int, budget: BudgetSpec, rng) -> np.ndarray:
    """Random feasible policy array.

    Draws each allocation uniformly, then removes single units from uniformly
    chosen non-zero entries until the cost fits the budget.
    """
    gen = as_generator(rng)
    x = gen.integers(0, budget.alphabet, size=n).astype(np.int64)
    total = int(x.sum())
    while total > budget.total_budget:
        nonzero = np.flatnonzero(x)
        i = nonzero[gen.integers(nonzero.size)]
        x[i] -= 1
        total -= 1
    return x
