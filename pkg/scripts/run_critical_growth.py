#!/usr/bin/env python3
"""Mean passage time along the diagonal at the estimated critical point.

Doubles the radius from 64 to 4096 and prints the growth diagnostics:
means must keep rising while T/r collapses, with a shallow log-log slope.
"""

from pathlib import Path

from dfpp import distributions as dists
from dfpp import estimators as est
from dfpp import oriented
from dfpp.io_utils import write_csv

SEED = 20260810
R_SCHEDULE = (64, 128, 256, 512, 1024, 2048, 4096)
OUT = Path("out/critical_growth")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    pc = oriented.estimate_pc(n=10_000, tolerance=0.01, seed=SEED)
    print(f"running at p0 = {pc.p_hat:.6f}")
    cd = est.critical_divergence(dists.Bernoulli01(p0=pc.p_hat), R_SCHEDULE, 400, SEED)
    rows = list(zip(cd.r_schedule, cd.means, cd.stderrs))
    for r, m, s in rows:
        print(f"r={r:5d}: mean T = {m:.3f} +- {s:.3f}   T/r = {m / r:.5f}")
    print(f"strictly increasing: {cd.strictly_increasing}")
    print(f"(T/r at {R_SCHEDULE[-1]}) / (T/r at {R_SCHEDULE[0]}) = {cd.ratio_over_schedule:.4f}")
    print(f"log-log slope: {cd.loglog_slope:.3f}")
    write_csv(OUT / "means.csv", ["r", "mean_T", "stderr"], rows)
    print(f"wrote {OUT / 'means.csv'}")


if __name__ == "__main__":
    main()
