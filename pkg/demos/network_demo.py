"""Build one baseline policy-target network and look at its degree structure.

Run: python3 demos/network_demo.py [out_dir]
"""

import sys
from pathlib import Path

import numpy as np

from plandscape import ExperimentConfig
from plandscape.distributions import RngStream
from plandscape.network import build_network, density, write_edge_list

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out/network")
out.mkdir(parents=True, exist_ok=True)

cfg = ExperimentConfig()
net = build_network(cfg.network(), RngStream(7).child(0))

k_out = net.outdegrees()
k_in = net.indegrees()
print(f"N={net.n_policies} policies, M={net.n_targets} targets, {int(k_out.sum())} edges")
print(f"density {density(net):.4f} (configured rho = {cfg.rho:.4f})")
print(f"outdegree mean {k_out.mean():.2f}, range {k_out.min()}..{k_out.max()}")
print(f"indegree  mean {k_in.mean():.2f}, range {k_in.min()}..{k_in.max()}")

c = net.coefficients[net.mask]
print(f"coefficients: mean {c.mean():+.3f} (mu_c = {cfg.mu_c:+.3f}), {np.mean(c > 0):.0%} positive")

# the ten most connected targets
top = np.argsort(-k_in, kind="stable")[:10]
print("busiest targets (1-based):", (top + 1).tolist())

write_edge_list(net, out / "edges.csv")
print("edge list written to", out / "edges.csv")
