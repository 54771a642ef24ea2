#!/usr/bin/env python3
"""Right-edge speed and percolation-cone angles across open probabilities."""

from pathlib import Path

from dfpp import oriented
from dfpp.io_utils import write_csv

SEED = 20260810
P_GRID = (0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0)
OUT = Path("out/edge_speed")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rows = []
    for p in P_GRID:
        cone = oriented.estimate_cone(p, n=10_000, replicates=32, seed=SEED)
        print(f"p={p}: alpha={cone.alpha_hat:.4f} +- {cone.alpha_se:.4f}  "
              f"cone=({cone.theta_minus:.4f}, {cone.theta_plus:.4f})")
        rows.append((p, cone.alpha_hat, cone.alpha_se, cone.theta_minus, cone.theta_plus))
    write_csv(OUT / "speeds.csv",
              ["p", "alpha_hat", "alpha_se", "theta_minus", "theta_plus"], rows)
    print(f"wrote {OUT / 'speeds.csv'}")


if __name__ == "__main__":
    main()
