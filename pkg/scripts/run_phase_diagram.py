#!/usr/bin/env python3
"""Phase diagram sweep for two-point edge laws.

Classifies a grid of zero-edge probabilities against an estimated critical
probability and writes the angular time-constant profiles behind a
three-panel shape figure.
"""

from pathlib import Path

from dfpp import distributions as dists
from dfpp import estimators as est
from dfpp import oriented
from dfpp.io_utils import write_csv

SEED = 20260810
P_GRID = (0.4, 0.5, 0.6447, 0.7, 0.8, 0.9)
OUT = Path("out/phase_diagram")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    pc = oriented.estimate_pc(n=10_000, tolerance=0.01, seed=SEED)
    print(f"estimated critical probability: {pc.p_hat:.6f} (bracket {pc.bracket})")
    budget = est.PhaseBudget(r_schedule=(64, 128, 256), replicates=200)
    rows = []
    for p in P_GRID:
        force = "critical" if abs(p - pc.p_hat) <= 0.01 else None
        report = est.classify_phase(
            dists.Bernoulli01(p0=p), pc.p_hat, budget=budget, seed=SEED, force_phase=force
        )
        tm = report.cone.theta_minus if report.cone else None
        tp = report.cone.theta_plus if report.cone else None
        print(f"p0={p}: {report.phase}"
              + (f", cone=({tm:.3f}, {tp:.3f})" if tm is not None else ""))
        for mu in report.mu_by_theta:
            rows.append((p, report.phase, mu.theta, mu.mu_hat, mu.stderrs[-1], tm, tp))
    write_csv(OUT / "profiles.csv",
              ["p", "phase", "theta", "mu_hat", "stderr", "theta_minus", "theta_plus"], rows)
    print(f"wrote {OUT / 'profiles.csv'}")


if __name__ == "__main__":
    main()
