"""Command-line front end: ``plandscape generate|climb|sweep|grid|landscape``.

Exit codes: 0 ok, 1 I/O failure, 2 invalid configuration or arguments,
3 a climb did not converge within ``max_steps``.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .distributions import RNG_FAMILY
from .experiments import (
    ConfigError,
    ExperimentConfig,
    budget_sweep,
    realize,
    sensitivity_grid,
    write_grid,
    write_sweep,
)
from .network import write_edge_list, write_matrix
from .optimizer import climb, is_local_optimum, landscape_table, write_landscape, write_trajectory

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_NONCONVERGED = 0, 1, 2, 3

SEED_ENV = "PLANDSCAPE_SEED"
HARNESS_KEYS = {"n_sims", "base_seed", "max_steps", "workers", "fix_weights"}
MODEL_KEYS = {"N", "M", "A", "B_T", "B", "mu_k", "beta_k", "mu_c", "beta_c", "mu_w", "beta_w", "eta"}

logger = logging.getLogger("plandscape")


class UsageError(Exception):
    pass


def load_config(path, seed: int | None = None) -> tuple[ExperimentConfig, int | None]:
    """Parse a flat JSON parameter file; returns the config and its ``workers`` entry."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ConfigError("config", "must be a flat JSON object")
    unknown = set(raw) - MODEL_KEYS - HARNESS_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown configuration key")
    for key, value in raw.items():
        if isinstance(value, (dict, list)):
            raise ConfigError(key, "nested values are not allowed")
    if "B" in raw:
        if "B_T" in raw:
            raise ConfigError("B", "give either B or B_T, not both")
        b = raw.pop("B")
        a = raw.get("A", ExperimentConfig.A)
        if not isinstance(b, (int, float)) or not 0 <= b <= a - 1:
            raise ConfigError("B", f"must lie in [0, A-1] = [0, {a - 1}], got {b!r}")
        raw["B_T"] = b * raw.get("N", ExperimentConfig.N)
    workers = raw.pop("workers", None)
    if seed is not None:
        raw["base_seed"] = seed
    try:
        return ExperimentConfig(**raw), workers
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from exc


def _resolve_seed(arg: int | None) -> int | None:
    if arg is not None:
        return arg
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(SEED_ENV, f"must be an unsigned 64-bit integer, got {env!r}") from None
    return None


def parse_axis(text: str) -> tuple[str, list[float]]:
    if "=" not in text:
        raise UsageError(f"axis {text!r} must look like name=v1,v2,...")
    name, _, values = text.partition("=")
    try:
        vals = [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"axis {text!r} has a non-numeric value") from None
    if not vals:
        raise UsageError(f"axis {name!r} has no values")
    return name.strip(), [int(v) if v.is_integer() and name.strip() in ("N", "M", "A") else v for v in vals]


def parse_budgets(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--budgets {text!r} is not a comma-separated list of numbers") from None


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def write_manifest(out: Path, command: str, config: ExperimentConfig, files, started: str, extra=None) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "rng_family": RNG_FAMILY,
        "config": config.to_dict(),
        "outputs": sorted(Path(f).name for f in files),
        "started": started,
        "finished": _now(),
    }
    if extra:
        manifest.update(extra)
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def cmd_generate(config: ExperimentConfig, out: Path, args) -> int:
    started = _now()
    landscape, _ = realize(config, 0)
    files = [write_edge_list(landscape.matrix, out / "edges.csv"),
             write_matrix(landscape.matrix, out / "matrix.csv")]
    write_manifest(out, "generate", config, files, started)
    return EXIT_OK


def cmd_climb(config: ExperimentConfig, out: Path, args) -> int:
    started = _now()
    landscape, x0 = realize(config, 0)
    traj = climb(x0, landscape, config.steps_cap())
    files = [write_trajectory(traj, out / "trajectory.csv")]
    final_ok = is_local_optimum(traj.final_state, landscape)
    write_manifest(out, "climb", config, files, started,
                   {"converged": traj.converged, "steps": traj.steps, "final_is_local_optimum": final_ok})
    return EXIT_OK if traj.converged else EXIT_NONCONVERGED


def cmd_sweep(config: ExperimentConfig, out: Path, args) -> int:
    if not args.budgets:
        raise UsageError("sweep needs --budgets")
    started = _now()
    budgets = parse_budgets(args.budgets)
    if not budgets or budgets != sorted(budgets):
        raise UsageError("--budgets must be a non-empty ascending list")
    for b in budgets:
        config.replace(B_T=b)
    sweep = budget_sweep(config, budgets, workers=args.workers)
    files = write_sweep(config, sweep, out)
    converged = all(ens.all_converged for _, ens in sweep)
    write_manifest(out, "sweep", config, files, started, {"all_converged": converged})
    return EXIT_OK if converged else EXIT_NONCONVERGED


def cmd_grid(config: ExperimentConfig, out: Path, args) -> int:
    if not args.axis1 or not args.axis2:
        raise UsageError("grid needs --axis1 and --axis2")
    started = _now()
    grid = sensitivity_grid(config, parse_axis(args.axis1), parse_axis(args.axis2),
                            fix_rho=args.fix_rho, workers=args.workers)
    files = write_grid(config, grid, out)
    converged = all(ens.all_converged for _, _, ens in grid.cells())
    write_manifest(out, "grid", config, files, started, {"all_converged": converged})
    return EXIT_OK if converged else EXIT_NONCONVERGED


def cmd_landscape(config: ExperimentConfig, out: Path, args) -> int:
    size = config.A**config.N
    if size > 10**6:
        raise ConfigError("N", f"landscape export needs A^N <= 10^6, got {config.A}^{config.N} = {size}")
    started = _now()
    landscape, _ = realize(config, 0)
    files = [write_landscape(landscape_table(landscape), out / "landscape.csv")]
    write_manifest(out, "landscape", config, files, started)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "climb": cmd_climb,
    "sweep": cmd_sweep,
    "grid": cmd_grid,
    "landscape": cmd_landscape,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plandscape", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", required=True, type=Path)
        p.add_argument("-v", "--verbose", action="store_true", help="show warnings from the library")
        if name in ("sweep", "grid"):
            p.add_argument("--workers", type=int, default=None)
        if name == "sweep":
            p.add_argument("--budgets", required=True)
        if name == "grid":
            p.add_argument("--axis1", required=True)
            p.add_argument("--axis2", required=True)
            p.add_argument("--fix-rho", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config, workers = load_config(args.config, _resolve_seed(args.seed))
        if getattr(args, "workers", None) is None and hasattr(args, "workers"):
            args.workers = workers
        args.out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](config, args.out, args)
    except (ConfigError, UsageError) as exc:
        print(f"plandscape: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"plandscape: {args.config} is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"plandscape: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
