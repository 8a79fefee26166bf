"""Budget-constrained deterministic hill climbing on the performance landscape.

Each step moves to the best array in the feasible neighbourhood (the current
array plus every array one unit away along one coordinate and within
budget).  Ties go to the current array first, then to the earliest candidate
in the canonical order: for each policy in ascending index, the decrement
before the increment.  Because the current array wins ties, the overall
performance strictly increases along every trajectory and the climb always
terminates.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .network import InteractionMatrix
from .performance import (
    BudgetSpec,
    ImportanceWeights,
    PerformanceParams,
    _check_enumerable,
    as_policy_array,
    dot_products,
    performance_from_dots,
    tanh_scale,
    weighted_scores,
)

logger = logging.getLogger(__name__)


class InfeasibleStateError(ValueError):
    pass


class Landscape:
    """A performance landscape: matrix, weights, budget and activation scale.

    Holds the precomputed per-target ``tanh`` scale so that repeated
    evaluations and climbs share it.
    """

    def __init__(self, matrix: InteractionMatrix, weights: ImportanceWeights, budget: BudgetSpec,
                 params: PerformanceParams = PerformanceParams()):
        if len(weights) != matrix.n_targets:
            raise ValueError(f"{len(weights)} weights for {matrix.n_targets} targets")
        self.matrix = matrix
        self.weights = weights
        self.budget = budget
        self.params = params
        self._c = matrix.coefficients
        self._scale = tanh_scale(matrix, params, budget.alphabet)
        self._w = weights.weights
        self._sigma = weights.sigma
        empty = int(np.sum(matrix.indegrees() == 0))
        if empty:
            logger.warning("%d target(s) have no incoming edges; they score 1/2", empty)

    @property
    def n_policies(self) -> int:
        return self.matrix.n_policies

    @property
    def alphabet(self) -> int:
        return self.budget.alphabet

    def with_budget(self, budget: BudgetSpec) -> Landscape:
        return Landscape(self.matrix, self.weights, budget, self.params)

    def scores_from_dots(self, dots: np.ndarray) -> np.ndarray:
        """Overall performance for each column of an ``(M, K)`` dot-product matrix."""
        return weighted_scores(performance_from_dots(dots, self._scale), self._w, self._sigma)

    def evaluate_many(self, xs) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs))
        return self.scores_from_dots(dot_products(self._c, xs))

    def evaluate(self, x) -> float:
        return float(self.evaluate_many(np.asarray(x)[None, :])[0])

    def check(self, x) -> np.ndarray:
        x = as_policy_array(x, self.alphabet)
        if x.size != self.n_policies:
            raise ValueError(f"policy array of length {x.size} does not match N={self.n_policies}")
        if x.sum() > self.budget.total_budget:
            raise InfeasibleStateError(
                f"cost {int(x.sum())} of {x.tolist()} exceeds B_T={self.budget.total_budget}")
        return x


@dataclass
class Trajectory:
    states: list = field(default_factory=list)
    performances: list = field(default_factory=list)
    converged: bool = False

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_performance(self) -> float:
        return self.performances[-1]


def neighbors(x, alphabet: int) -> list[np.ndarray]:
    """The adjacent neighbourhood of ``x``, itself first, in canonical order."""
    x = as_policy_array(x, alphabet)
    out = [x.copy()]
    for i in range(x.size):
        if x[i] > 0:
            y = x.copy()
            y[i] -= 1
            out.append(y)
        if x[i] < alphabet - 1:
            y = x.copy()
            y[i] += 1
            out.append(y)
    return out


def feasible_neighbors(x, budget: BudgetSpec, alphabet: int | None = None) -> list[np.ndarray]:
    alphabet = budget.alphabet if alphabet is None else alphabet
    x = as_policy_array(x, alphabet)
    if x.sum() > budget.total_budget:
        raise InfeasibleStateError(f"cost {int(x.sum())} exceeds B_T={budget.total_budget}")
    return [y for y in neighbors(x, alphabet) if y.sum() <= budget.total_budget]


def _candidate_moves(x: np.ndarray, total: int, landscape: Landscape):
    """Policy indices and unit signs of feasible moves in canonical order."""
    valid = np.empty(2 * x.size, dtype=bool)
    valid[0::2] = x > 0
    valid[1::2] = (x < landscape.alphabet - 1) & (total + 1 <= landscape.budget.total_budget)
    slots = np.flatnonzero(valid)
    # even slots are decrements, odd slots increments
    return slots >> 1, (slots & 1) * 2.0 - 1.0


def _best_move(x, total, dots, landscape: Landscape):
    """Evaluate the feasible neighbourhood; column 0 is the current array."""
    idx, sign = _candidate_moves(x, total, landscape)
    cand = np.empty((dots.size, idx.size + 1))
    cand[:, 0] = dots
    cand[:, 1:] = dots[:, None] + landscape._c[:, idx] * sign
    scores = landscape.scores_from_dots(cand)
    best = int(np.argmax(scores))
    return best, idx, sign, cand, scores


def step(x, landscape: Landscape) -> np.ndarray:
    """One adaptive step from ``x``."""
    x = landscape.check(x)
    dots = dot_products(landscape._c, x)
    best, idx, sign, _, _ = _best_move(x, int(x.sum()), dots, landscape)
    y = x.copy()
    if best:
        y[idx[best - 1]] += int(sign[best - 1])
    return y


def default_max_steps(n_policies: int, alphabet: int) -> int:
    return n_policies * (alphabet - 1) * 100


def climb(x0, landscape: Landscape, max_steps: int | None = None) -> Trajectory:
    """Hill-climb from ``x0`` until a local optimum or ``max_steps`` moves.

    Dot products are updated incrementally, so each recorded performance is
    exactly the value that won the comparison at that step.
    """
    x = landscape.check(x0).copy()
    if max_steps is None:
        max_steps = default_max_steps(landscape.n_policies, landscape.alphabet)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    total = int(x.sum())
    dots = dot_products(landscape._c, x)
    traj = Trajectory(states=[x.copy()])
    for _ in range(max_steps):
        best, idx, sign, cand, scores = _best_move(x, total, dots, landscape)
        if not traj.performances:
            traj.performances.append(float(scores[0]))
        if best == 0:
            traj.converged = True
            break
        i, s = idx[best - 1], int(sign[best - 1])
        x[i] += s
        total += s
        dots = cand[:, best].copy()
        traj.states.append(x.copy())
        traj.performances.append(float(scores[best]))
    else:
        # confirm whether the last state happens to be optimal anyway
        best, *_ = _best_move(x, total, dots, landscape)
        traj.converged = best == 0
        if not traj.converged:
            logger.warning("climb hit max_steps=%d before reaching a local optimum", max_steps)
    return traj


def is_local_optimum(x, landscape: Landscape) -> bool:
    """True when no feasible neighbour scores strictly higher than ``x``."""
    x = landscape.check(x)
    nbrs = feasible_neighbors(x, landscape.budget)
    scores = landscape.evaluate_many(np.array(nbrs))
    return bool(np.all(scores[0] >= scores[1:]))


def _enumerate(n: int, alphabet: int) -> np.ndarray:
    """Every array of ``{0..A-1}^n`` as rows, in lexicographic order."""
    grids = np.indices((alphabet,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


def brute_force_optimum(landscape: Landscape, limit: int = 10**7, chunk: int = 65536):
    """Exhaustive global optimum over the feasible region.

    Ties resolve to the lexicographically smallest array.
    """
    n, a = landscape.n_policies, landscape.alphabet
    _check_enumerable(n, a, limit)
    best_x, best_f = None, -np.inf
    space = _enumerate(n, a)
    for start in range(0, space.shape[0], chunk):
        block = space[start : start + chunk]
        block = block[block.sum(axis=1) <= landscape.budget.total_budget]
        if block.size == 0:
            continue
        scores = landscape.evaluate_many(block)
        k = int(np.argmax(scores))
        if scores[k] > best_f:
            best_x, best_f = block[k].copy(), float(scores[k])
    return best_x, best_f


def landscape_table(landscape: Landscape, limit: int = 10**6) -> dict[str, np.ndarray]:
    """Full enumeration of the policy space with feasibility and optimum flags."""
    n, a = landscape.n_policies, landscape.alphabet
    _check_enumerable(n, a, limit)
    space = _enumerate(n, a)
    costs = space.sum(axis=1)
    feasible = costs <= landscape.budget.total_budget
    scores = landscape.evaluate_many(space)
    radix = a ** np.arange(n - 1, -1, -1)
    local = feasible.copy()
    for i in range(n):
        for delta in (-1, 1):
            moved = space[:, i] + delta
            inside = (moved >= 0) & (moved < a)
            nbr = np.flatnonzero(inside)
            nbr_index = (space[nbr] @ radix) + delta * radix[i]
            ok = feasible[nbr_index]
            worse = scores[nbr_index] > scores[nbr]
            local[nbr[ok & worse]] = False
    return {"states": space, "cost": costs, "F": scores, "feasible": feasible, "local_optimum": local}


def write_trajectory(traj: Trajectory, path) -> Path:
    path = Path(path)
    n = traj.states[0].size
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step"] + [f"x_{i + 1}" for i in range(n)] + ["cost", "F"])
        for t, (x, f) in enumerate(zip(traj.states, traj.performances)):
            writer.writerow([t, *x.tolist(), int(x.sum()), repr(f)])
    return path


def write_landscape(table: dict, path) -> Path:
    path = Path(path)
    n = table["states"].shape[1]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x_{i + 1}" for i in range(n)] + ["cost", "F", "is_feasible", "is_local_optimum"])
        for x, c, f, feas, loc in zip(table["states"], table["cost"], table["F"],
                                      table["feasible"], table["local_optimum"]):
            writer.writerow([*x.tolist(), int(c), repr(float(f)), int(feas), int(loc)])
    return path
