"""Median final performance as the total budget grows.

Small ensembles keep this quick; raise n_sims for smoother curves.
Run: python3 demos/budget_sweep_demo.py [out_dir]
"""

import logging
import sys
from pathlib import Path

from plandscape import ExperimentConfig
from plandscape.experiments import budget_sweep, write_sweep

# sparse networks leave some targets unconnected; the per-landscape warning is noise here
logging.getLogger("plandscape").setLevel(logging.ERROR)

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out/sweep")

cfg = ExperimentConfig(N=70, M=50, mu_k=5, n_sims=30, base_seed=3)
budgets = list(range(20, 301, 40))
sweep = budget_sweep(cfg, budgets)

print(f"{'B_T':>5} {'q25':>7} {'median':>7} {'q75':>7}")
prev = None
for b, ens in sweep:
    gain = "" if prev is None else f"  (+{ens.median - prev:.3f})"
    print(f"{b:>5.0f} {ens.q25:7.4f} {ens.median:7.4f} {ens.q75:7.4f}{gain}")
    prev = ens.median

# beyond N*(A-1) = 280 every array is affordable, so the last points coincide
files = write_sweep(cfg, sweep, out)
print("wrote", ", ".join(str(f) for f in files))
