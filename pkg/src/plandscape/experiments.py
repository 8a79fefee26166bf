"""Ensembles of independent climbs, budget sweeps and two-parameter grids.

Simulation ``k`` of an ensemble draws its network, weights and initial
array from three sub-streams of ``RngStream(base_seed, k)``.  The streams do
not depend on the sweep point, so every budget in a sweep (and every cell of
a grid over distribution parameters) sees the same underlying random
numbers.  Grids over ``N`` or ``M`` change array shapes, so those cells are
only nominally paired.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distributions import RNG_FAMILY, RngStream
from .network import NetworkConfig, build_network
from .optimizer import Landscape, climb, default_max_steps
from .performance import BudgetSpec, PerformanceParams, sample_initial_condition, sample_weights

QUANTILE_CONVENTION = "linear interpolation between order statistics (Hyndman-Fan type 7)"

NETWORK_STREAM, WEIGHTS_STREAM, INITIAL_STREAM = 0, 1, 2

AXIS_NAMES = ("N", "M", "mu_k", "beta_k", "mu_c", "beta_c", "mu_w", "beta_w", "B_T", "A")


class ConfigError(ValueError):
    """A configuration value outside its allowed range."""

    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.field = name


def _is_int(v) -> bool:
    return not isinstance(v, bool) and isinstance(v, (int, np.integer, float)) and float(v).is_integer()


@dataclass(frozen=True)
class ExperimentConfig:
    """Model parameters (named as in the baseline parameter table) and harness settings."""

    N: int = 100
    M: int = 30
    A: int = 5
    B_T: float = 300.0
    mu_k: float = 5.0
    beta_k: float = 2.0
    mu_c: float = 1 / 3
    beta_c: float = 2.0
    mu_w: float = 8.0
    beta_w: float = 15.0
    eta: float = 3.0
    n_sims: int = 100
    base_seed: int = 0
    max_steps: int | None = None
    fix_weights: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self):
        for name in ("N", "M", "A", "n_sims"):
            if not _is_int(getattr(self, name)):
                raise ConfigError(name, f"must be an integer, got {getattr(self, name)!r}")
        if self.N < 1:
            raise ConfigError("N", f"must be a positive integer, got {self.N}")
        if self.M < 2:
            raise ConfigError("M", f"must be an integer >= 2, got {self.M}")
        if self.A < 2:
            raise ConfigError("A", f"must be an integer >= 2, got {self.A}")
        if not self.B_T >= 0:
            raise ConfigError("B_T", f"must lie in [0, inf), got {self.B_T}")
        if not 1 < self.mu_k < self.M:
            raise ConfigError("mu_k", f"must lie in (1, M) = (1, {self.M}), got {self.mu_k}")
        if not -1 < self.mu_c < 1:
            raise ConfigError("mu_c", f"must lie in (-1, 1), got {self.mu_c}")
        if not 1 < self.mu_w < 10:
            raise ConfigError("mu_w", f"must lie in (1, 10), got {self.mu_w}")
        for name in ("beta_k", "beta_c", "beta_w", "eta"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, f"must lie in (0, inf), got {getattr(self, name)}")
        if self.n_sims < 1:
            raise ConfigError("n_sims", f"must be >= 1, got {self.n_sims}")
        if not _is_int(self.base_seed) or not 0 <= self.base_seed < 2**64:
            raise ConfigError("base_seed", f"must be an unsigned 64-bit integer, got {self.base_seed}")
        if self.max_steps is not None and (not _is_int(self.max_steps) or self.max_steps < 1):
            raise ConfigError("max_steps", f"must be a positive integer, got {self.max_steps}")

    @property
    def rho(self) -> float:
        return self.mu_k / self.M

    def network(self) -> NetworkConfig:
        return NetworkConfig(int(self.N), int(self.M), self.mu_k, self.beta_k, self.mu_c, self.beta_c)

    def budget(self) -> BudgetSpec:
        return BudgetSpec(int(self.A), float(self.B_T))

    def params(self) -> PerformanceParams:
        return PerformanceParams(self.eta)

    def steps_cap(self) -> int:
        return int(self.max_steps) if self.max_steps is not None else default_max_steps(int(self.N), int(self.A))

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class SimResult:
    sim_index: int
    final_F: float
    steps: int
    cost: int
    converged: bool


@dataclass
class EnsembleResult:
    per_sim: list[SimResult]
    q25: float = field(init=False)
    median: float = field(init=False)
    q75: float = field(init=False)

    def __post_init__(self):
        self.q25, self.median, self.q75 = quartiles([r.final_F for r in self.per_sim])

    @property
    def finals(self) -> np.ndarray:
        return np.array([r.final_F for r in self.per_sim])

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.per_sim)


def quartiles(values) -> tuple[float, float, float]:
    """25th, 50th and 75th percentiles with linear interpolation."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("quartiles of an empty sequence")
    q = np.quantile(v, [0.25, 0.5, 0.75], method="linear")
    return float(q[0]), float(q[1]), float(q[2])


def realize(config: ExperimentConfig, sim_index: int):
    """Network, weights and initial array of one simulation."""
    root = RngStream(int(config.base_seed), sim_index)
    matrix = build_network(config.network(), root.child(NETWORK_STREAM))
    weights_root = RngStream(int(config.base_seed), 0) if config.fix_weights else root
    weights = sample_weights(int(config.M), config.mu_w, config.beta_w, weights_root.child(WEIGHTS_STREAM))
    landscape = Landscape(matrix, weights, config.budget(), config.params())
    x0 = sample_initial_condition(int(config.N), config.budget(), root.child(INITIAL_STREAM))
    return landscape, x0


def run_simulation(config: ExperimentConfig, sim_index: int) -> SimResult:
    try:
        landscape, x0 = realize(config, sim_index)
        traj = climb(x0, landscape, config.steps_cap())
    except Exception as exc:
        raise RuntimeError(f"simulation {sim_index} failed: {exc}") from exc
    return SimResult(sim_index, traj.final_performance, traj.steps, int(traj.final_state.sum()), traj.converged)


def _run_chunk(config: ExperimentConfig, indices) -> list[SimResult]:
    return [run_simulation(config, k) for k in indices]


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        return os.cpu_count() or 1
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def run_many(configs: list[ExperimentConfig], workers: int | None = None) -> list[EnsembleResult]:
    """Run several ensembles, sharing one process pool across all of them."""
    workers = _resolve_workers(workers)
    jobs = [(c, k) for c in configs for k in range(int(c.n_sims))]
    if workers == 1:
        flat = [run_simulation(c, k) for c, k in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(run_simulation, *zip(*jobs), chunksize=max(1, len(jobs) // (4 * workers))))
    out, pos = [], 0
    for c in configs:
        out.append(EnsembleResult(flat[pos : pos + int(c.n_sims)]))
        pos += int(c.n_sims)
    return out


def run_ensemble(config: ExperimentConfig, workers: int | None = None) -> EnsembleResult:
    return run_many([config], workers)[0]


def budget_sweep(config: ExperimentConfig, budgets, workers: int | None = None):
    budgets = [float(b) for b in budgets]
    if not budgets:
        raise ValueError("budget sweep needs at least one budget")
    if budgets != sorted(budgets):
        raise ValueError("budgets must be sorted ascending")
    results = run_many([config.replace(B_T=b) for b in budgets], workers)
    return list(zip(budgets, results))


@dataclass
class GridResult:
    axis1: tuple[str, list]
    axis2: tuple[str, list]
    ensembles: list[list[EnsembleResult]]
    fix_rho: bool = False

    @property
    def medians(self) -> np.ndarray:
        return np.array([[e.median for e in row] for row in self.ensembles])

    def cells(self):
        for a, row in zip(self.axis1[1], self.ensembles):
            for b, ens in zip(self.axis2[1], row):
                yield a, b, ens


def _cast(name: str, value):
    if name in ("N", "M", "A"):
        if not _is_int(value):
            raise ConfigError(name, f"must be an integer, got {value!r}")
        return int(value)
    return float(value)


def grid_config(config: ExperimentConfig, changes: dict, fix_rho: bool = False) -> ExperimentConfig:
    for name in changes:
        if name not in AXIS_NAMES:
            raise ConfigError(name, f"unknown sweep axis; expected one of {', '.join(AXIS_NAMES)}")
    changes = {k: _cast(k, v) for k, v in changes.items()}
    if fix_rho:
        if "mu_k" in changes:
            raise ConfigError("mu_k", "cannot be swept while the network density is held fixed")
        changes["mu_k"] = config.rho * changes.get("M", config.M)
    return config.replace(**changes)


def sensitivity_grid(config: ExperimentConfig, axis1, axis2, fix_rho: bool = False,
                     workers: int | None = None) -> GridResult:
    (name1, values1), (name2, values2) = axis1, axis2
    if name1 == name2:
        raise ConfigError(name1, "both grid axes name the same parameter")
    values1, values2 = list(values1), list(values2)
    cells = [grid_config(config, {name1: a, name2: b}, fix_rho) for a in values1 for b in values2]
    flat = run_many(cells, workers)
    rows = [flat[i * len(values2) : (i + 1) * len(values2)] for i in range(len(values1))]
    return GridResult((name1, values1), (name2, values2), rows, fix_rho)


def _metadata(config: ExperimentConfig, sweep: dict) -> dict:
    return {
        "base_seed": int(config.base_seed),
        "n_sims": int(config.n_sims),
        "stream_layout": "RngStream(base_seed, sim_index).child(0=network, 1=weights, 2=initial array)",
        "rng_family": RNG_FAMILY,
        "quantile_convention": QUANTILE_CONVENTION,
        "pairing": "sweep points share per-simulation streams; N or M changes rebuild shape-dependent draws",
        "config": config.to_dict(),
        "sweep": sweep,
    }


def _write_tables(out_dir: Path, keys: list[str], points) -> list[Path]:
    long_path, summary_path = out_dir / "results.csv", out_dir / "summary.csv"
    with long_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(keys + ["sim_index", "final_F", "steps", "cost", "converged"])
        for values, ens in points:
            for r in ens.per_sim:
                writer.writerow([*values, r.sim_index, repr(r.final_F), r.steps, r.cost, int(r.converged)])
    with summary_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(keys + ["q25", "median", "q75"])
        for values, ens in points:
            writer.writerow([*values, repr(ens.q25), repr(ens.median), repr(ens.q75)])
    return [long_path, summary_path]


def _write_metadata(out_dir: Path, meta: dict) -> Path:
    path = out_dir / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def write_sweep(config: ExperimentConfig, sweep, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    points = [([repr(b)], ens) for b, ens in sweep]
    paths = _write_tables(out_dir, ["B_T"], points)
    meta = _metadata(config, {"kind": "budget", "B_T": [b for b, _ in sweep]})
    return paths + [_write_metadata(out_dir, meta)]


def write_grid(config: ExperimentConfig, grid: GridResult, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    keys = [grid.axis1[0], grid.axis2[0]]
    points = [([repr(a), repr(b)], ens) for a, b, ens in grid.cells()]
    paths = _write_tables(out_dir, keys, points)
    meta = _metadata(config, {
        "kind": "grid",
        "axis1": {"name": grid.axis1[0], "values": grid.axis1[1]},
        "axis2": {"name": grid.axis2[0], "values": grid.axis2[1]},
        "fix_rho": grid.fix_rho,
    })
    return paths + [_write_metadata(out_dir, meta)]
