"""Signed, weighted, directed policy-target networks.

A network links ``n_policies`` policies to ``n_targets`` targets.  It is
built in three steps: an outdegree per policy is drawn from a shifted
Beta-binomial on ``{1, ..., M}``, each policy is wired to that many distinct
targets chosen uniformly at random, and each edge gets a coefficient in
``[-1, 1]`` from a rescaled Beta distribution.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distributions import (
    ScaledBetaBinomialSpec,
    ScaledBetaSpec,
    as_generator,
    sample_scaled_beta,
    sample_scaled_beta_binomial,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NetworkConfig:
    n_policies: int
    n_targets: int
    mu_k: float
    beta_k: float
    mu_c: float
    beta_c: float

    def __post_init__(self):
        if int(self.n_policies) != self.n_policies or self.n_policies < 1:
            raise ValueError(f"N must be a positive integer, got {self.n_policies}")
        if int(self.n_targets) != self.n_targets or self.n_targets < 2:
            raise ValueError(f"M must be an integer >= 2, got {self.n_targets}")
        if not 1 < self.mu_k < self.n_targets:
            raise ValueError(f"mu_k must lie in (1, M) = (1, {self.n_targets}), got {self.mu_k}")
        if not -1 < self.mu_c < 1:
            raise ValueError(f"mu_c must lie in (-1, 1), got {self.mu_c}")
        if not self.beta_k > 0:
            raise ValueError(f"beta_k must be > 0, got {self.beta_k}")
        if not self.beta_c > 0:
            raise ValueError(f"beta_c must be > 0, got {self.beta_c}")

    @property
    def rho(self) -> float:
        return self.mu_k / self.n_targets

    def outdegree_spec(self) -> ScaledBetaBinomialSpec:
        return ScaledBetaBinomialSpec(self.beta_k, self.mu_k, 1, self.n_targets)

    def coefficient_spec(self) -> ScaledBetaSpec:
        return ScaledBetaSpec(self.beta_c, self.mu_c, -1.0, 1.0)


class InteractionMatrix:
    """Dense ``M x N`` matrix of link coefficients plus degree bookkeeping.

    Entry ``(j, i)`` is the impact of policy ``i`` on target ``j``; zero means
    no edge.  ``mask`` records edge presence separately so that a coefficient
    that happens to be sampled as exactly zero still counts as an edge.
    """

    def __init__(self, coefficients, mask=None):
        c = np.array(coefficients, dtype=float)
        if c.ndim != 2:
            raise ValueError("coefficients must be a 2-D array")
        if np.any(np.abs(c) > 1):
            raise ValueError("coefficients must lie in [-1, 1]")
        m = c != 0 if mask is None else np.array(mask, dtype=bool)
        if m.shape != c.shape:
            raise ValueError("mask shape must match coefficients")
        if np.any(c[~m] != 0):
            raise ValueError("non-zero coefficient on an absent edge")
        c.flags.writeable = False
        m.flags.writeable = False
        self._c = c
        self._mask = m

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def shape(self) -> tuple[int, int]:
        return self._c.shape

    @property
    def n_targets(self) -> int:
        return self._c.shape[0]

    @property
    def n_policies(self) -> int:
        return self._c.shape[1]

    def row(self, j: int) -> np.ndarray:
        return self._c[j]

    def column(self, i: int) -> np.ndarray:
        return self._c[:, i]

    def indegrees(self) -> np.ndarray:
        return self._mask.sum(axis=1)

    def outdegrees(self) -> np.ndarray:
        return self._mask.sum(axis=0)

    def edges(self) -> list[tuple[int, int, float]]:
        """``(policy, target, coefficient)`` triples, 0-based, policy-major."""
        pol, tgt = np.nonzero(self._mask.T)
        return [(int(i), int(j), float(self._c[j, i])) for i, j in zip(pol, tgt)]

    def __eq__(self, other):
        if not isinstance(other, InteractionMatrix):
            return NotImplemented
        return np.array_equal(self._c, other._c) and np.array_equal(self._mask, other._mask)

    def __repr__(self):
        return f"InteractionMatrix(M={self.n_targets}, N={self.n_policies}, edges={int(self._mask.sum())})"


def density(matrix: InteractionMatrix) -> float:
    """Fraction of the ``M * N`` possible edges that are present."""
    m, n = matrix.shape
    return float(matrix.mask.sum()) / (m * n)


def indegrees(matrix: InteractionMatrix) -> np.ndarray:
    return matrix.indegrees()


def sample_outdegrees(config: NetworkConfig, rng) -> np.ndarray:
    return sample_scaled_beta_binomial(config.outdegree_spec(), rng, size=config.n_policies)


def assign_edges(degrees, n_targets: int, rng) -> list[tuple[int, int]]:
    """Wire policy ``i`` to ``degrees[i]`` distinct uniformly chosen targets.

    Uses a partial Fisher-Yates shuffle per policy.  Returns 0-based
    ``(policy, target)`` pairs in policy order.
    """
    gen = as_generator(rng)
    edges = []
    for i, k in enumerate(np.asarray(degrees)):
        k = int(k)
        if not 0 <= k <= n_targets:
            raise ValueError(f"outdegree {k} of policy {i} outside [0, {n_targets}]")
        pool = np.arange(n_targets)
        for pos in range(k):
            swap = pos + int(gen.integers(n_targets - pos))
            pool[pos], pool[swap] = pool[swap], pool[pos]
        edges.extend((i, int(j)) for j in pool[:k])
    return edges


def sample_coefficients(edges, config: NetworkConfig, rng) -> InteractionMatrix:
    """Attach a rescaled-Beta coefficient to every edge."""
    gen = as_generator(rng)
    spec = config.coefficient_spec()
    c = np.zeros((config.n_targets, config.n_policies))
    mask = np.zeros_like(c, dtype=bool)
    for i, j in edges:
        if not (0 <= i < config.n_policies and 0 <= j < config.n_targets):
            raise ValueError(f"edge ({i}, {j}) outside a {config.n_targets}x{config.n_policies} network")
        if mask[j, i]:
            raise ValueError(f"duplicate edge ({i}, {j})")
        value = sample_scaled_beta(spec, gen)
        if value == 0.0:
            value = sample_scaled_beta(spec, gen)
            if value == 0.0:
                logger.warning("edge (%d, %d) kept with an exactly-zero coefficient", i, j)
        c[j, i] = value
        mask[j, i] = True
    return InteractionMatrix(c, mask)


def build_network(config: NetworkConfig, rng) -> InteractionMatrix:
    gen = as_generator(rng)
    degrees = sample_outdegrees(config, gen)
    edges = assign_edges(degrees, config.n_targets, gen)
    return sample_coefficients(edges, config, gen)


def write_edge_list(matrix: InteractionMatrix, path) -> Path:
    """Write ``policy_id,target_id,coefficient`` rows with 1-based ids."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["policy_id", "target_id", "coefficient"])
        for i, j, c in matrix.edges():
            writer.writerow([i + 1, j + 1, repr(c)])
    return path


def write_matrix(matrix: InteractionMatrix, path) -> Path:
    """Write the dense matrix, one row per target, one column per policy."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["target_id"] + [f"p{i + 1}" for i in range(matrix.n_policies)])
        for j in range(matrix.n_targets):
            writer.writerow([j + 1] + [repr(float(v)) for v in matrix.row(j)])
    return path
