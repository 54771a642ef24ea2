"""Command-line experiment runner.

Every command writes a CSV of per-cell rows plus a JSON summary stamped
with the schema version and a hash of the configuration.  For a fixed
(config, seed) the output bytes are identical across runs and worker
counts; timing goes to the console only.
"""

from __future__ import annotations

import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import click

from . import distributions as dists
from . import estimators as est
from . import growth as growth_mod
from . import oriented
from . import verify
from .io_utils import SCHEMA_VERSION, summary_envelope, write_csv, write_json
from .passage import RayTruncated

EXIT_FAILED_CRITERION = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: dict

    def as_dict(self) -> dict:
        return {"command": self.command, **self.params}


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    csv_path: Path | None
    summary_path: Path
    elapsed: float


def _parse_dist(value: str) -> dists.EdgeTimeDistribution:
    text = value
    path = Path(value)
    if value.startswith("@"):
        path = Path(value[1:])
        text = path.read_text()
    elif not value.lstrip().startswith("{") and path.exists():
        text = path.read_text()
    try:
        return dists.from_json(text)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"--dist: {exc}") from exc


def _parse_floats(value: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError as exc:
        raise click.UsageError(f"bad numeric list {value!r}") from exc


def _parse_ints(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in value.split(",") if v.strip())
    except ValueError as exc:
        raise click.UsageError(f"bad integer list {value!r}") from exc


def _emit(
    command: str,
    params: dict,
    out_dir: str,
    fmt: str,
    header: list[str],
    rows: list,
    body: dict,
    started: float,
) -> ExperimentResult:
    cfg = ExperimentConfig(command=command, params=params)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = None
    if fmt in ("csv", "both") and header:
        csv_path = out / f"{command}.csv"
        write_csv(csv_path, header, rows)
    summary_path = out / f"{command}_summary.json"
    write_json(summary_path, summary_envelope(command, cfg.as_dict(), body))
    elapsed = time.perf_counter() - started
    click.echo(f"{command}: wrote {summary_path} ({elapsed:.1f}s)", err=True)
    return ExperimentResult(config=cfg, csv_path=csv_path, summary_path=summary_path, elapsed=elapsed)


def _pool_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def common_options(fn):
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--replicates", type=int, default=200, show_default=True)(fn)
    fn = click.option("--workers", type=int, default=1, show_default=True)(fn)
    fn = click.option("--out", "out_dir", default="out", show_default=True)(fn)
    fn = click.option(
        "--format", "fmt", type=click.Choice(["csv", "json", "both"]), default="both",
        show_default=True,
    )(fn)
    return fn


@click.group()
@click.version_option()
def main():
    """Directed first-passage percolation experiments."""


@main.command("estimate-mu")
@click.option("--dist", "dist_text", required=True, help="distribution JSON or @file")
@click.option("--theta", "thetas", default="0.7853981633974483", show_default=True,
              help="comma-separated angles in [0, pi/2]")
@click.option("--r-schedule", default="64,128,256", show_default=True)
@common_options
def cmd_estimate_mu(dist_text, thetas, r_schedule, seed, replicates, workers, out_dir, fmt):
    """Estimate the time constant along one or more directions."""
    started = time.perf_counter()
    dist = _parse_dist(dist_text)
    theta_list = _parse_floats(thetas)
    schedule = _parse_ints(r_schedule)
    if not theta_list:
        raise click.UsageError("--theta: need at least one angle")

    def cell(theta: float) -> est.MuEstimate:
        return est.estimate_mu(dist, theta, schedule, replicates, seed, keep_samples=True)

    try:
        results = _pool_map(cell, theta_list, workers)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    rows = []
    for mu in results:
        for r, samples in zip(mu.r_schedule, mu.samples):
            for rep, t in enumerate(samples):
                rows.append((mu.dist_id, mu.theta, r, rep, t, t / r))
    body = {"estimates": [m.to_dict() for m in results]}
    params = {
        "dist": dists.to_json(dist), "theta": list(theta_list),
        "r_schedule": list(schedule), "replicates": replicates, "seed": seed,
    }
    _emit("estimate-mu", params, out_dir, fmt,
          ["dist_id", "theta", "r", "replicate", "T", "T_over_r"], rows, body, started)


@main.command("tail")
@click.option("--dist", "dist_text", required=True)
@click.option("--theta", type=float, required=True)
@click.option("--delta", type=float, required=True)
@click.option("--r", type=int, required=True)
@common_options
def cmd_tail(dist_text, theta, delta, r, seed, replicates, workers, out_dir, fmt):
    """Frequency of {T <= delta * r} with an exact binomial interval."""
    started = time.perf_counter()
    dist = _parse_dist(dist_text)
    try:
        t = est.tail_probability(dist, theta, delta, r, replicates, seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    body = {"tail": t.to_dict()}
    params = {"dist": dists.to_json(dist), "theta": theta, "delta": delta, "r": r,
              "replicates": replicates, "seed": seed}
    _emit("tail", params, out_dir, fmt,
          ["dist_id", "theta", "delta", "r", "successes", "replicates", "frequency", "ci_lo", "ci_hi"],
          [(t.dist_id, t.theta, t.delta, t.r, t.successes, t.replicates, t.frequency, t.ci_lo, t.ci_hi)],
          body, started)


@main.command("moments")
@click.option("--dist", "dist_text", required=True)
@click.option("--theta", type=float, required=True)
@click.option("--m", "orders", default="1,2", show_default=True)
@click.option("--r-schedule", default="64,128,256,512", show_default=True)
@click.option("--cone", required=True, help="theta_minus,theta_plus of the estimated cone")
@common_options
def cmd_moments(dist_text, theta, orders, r_schedule, cone, seed, replicates, workers, out_dir, fmt):
    """Moment plateaus of T on the percolation cone."""
    started = time.perf_counter()
    dist = _parse_dist(dist_text)
    cone_pair = _parse_floats(cone)
    if len(cone_pair) != 2:
        raise click.UsageError("--cone: expected theta_minus,theta_plus")
    schedule = _parse_ints(r_schedule)

    def cell(m: int) -> est.MomentPlateau:
        return est.moment_plateau(dist, theta, m, schedule, replicates, seed, cone=cone_pair)

    try:
        results = _pool_map(cell, _parse_ints(orders), workers)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    rows = []
    for mp in results:
        for r, mom, se, lo, hi in zip(mp.r_schedule, mp.moments, mp.stderrs, mp.boot_lo, mp.boot_hi):
            rows.append((mp.dist_id, mp.theta, mp.m, r, mom, se, lo, hi))
    body = {
        "plateaus": [
            {
                "m": mp.m, "theta": mp.theta, "r_schedule": list(mp.r_schedule),
                "moments": list(mp.moments), "stderrs": list(mp.stderrs),
                "plateau_ok": mp.plateau_ok, "spread_vs_pooled_ok": mp.spread_vs_pooled_ok,
            }
            for mp in results
        ]
    }
    params = {"dist": dists.to_json(dist), "theta": theta, "m": orders,
              "r_schedule": list(schedule), "cone": list(cone_pair),
              "replicates": replicates, "seed": seed}
    _emit("moments", params, out_dir, fmt,
          ["dist_id", "theta", "m", "r", "moment", "stderr", "boot_lo", "boot_hi"],
          rows, body, started)


@main.command("sigma-tail")
@click.option("--dist", "dist_text", required=True)
@click.option("--theta", type=float, required=True)
@click.option("--r", type=int, required=True)
@common_options
def cmd_sigma_tail(dist_text, theta, r, seed, replicates, workers, out_dir, fmt):
    """Survival function of the minimum positive-edge count to the target."""
    started = time.perf_counter()
    dist = _parse_dist(dist_text)
    s = est.sigma_tail(dist, theta, r, replicates, seed)
    rows = [(s.dist_id, s.theta, s.r, k, f) for k, f in s.survival]
    body = {"sigma_tail": {
        "theta": s.theta, "r": s.r, "replicates": s.replicates,
        "survival": [[k, f] for k, f in s.survival],
        "slope": s.slope, "intercept": s.intercept, "r_squared": s.r_squared,
        "ks_used": list(s.ks_used),
    }}
    params = {"dist": dists.to_json(dist), "theta": theta, "r": r,
              "replicates": replicates, "seed": seed}
    _emit("sigma-tail", params, out_dir, fmt,
          ["dist_id", "theta", "r", "k", "freq_ge_k"], rows, body, started)


@main.command("phase-diagram")
@click.option("--p-grid", default="0.4,0.6447,0.8", show_default=True)
@click.option("--pc-hat", type=float, default=None,
              help="critical probability estimate; estimated if omitted")
@click.option("--theta-grid", default=",".join(str(t) for t in est.DEFAULT_THETA_GRID),
              show_default=False)
@click.option("--r-schedule", default="64,128,256", show_default=True)
@common_options
def cmd_phase_diagram(p_grid, pc_hat, theta_grid, r_schedule, seed, replicates, workers, out_dir, fmt):
    """Phase classification and angular profiles for two-point laws."""
    started = time.perf_counter()
    ps = _parse_floats(p_grid)
    if any(not 0.0 < p <= 1.0 for p in ps):
        raise click.UsageError("--p-grid: entries must lie in (0, 1]")
    thetas = _parse_floats(theta_grid)
    schedule = _parse_ints(r_schedule)
    if pc_hat is None:
        pc_hat = oriented.estimate_pc(n=10_000, tolerance=0.01, seed=seed).p_hat
    budget = est.PhaseBudget(r_schedule=schedule, replicates=replicates)

    def cell(p: float) -> est.PhaseReport:
        force = "critical" if abs(p - pc_hat) <= 0.01 else None
        return est.classify_phase(
            dists.Bernoulli01(p0=p), pc_hat, thetas, budget, seed=seed, force_phase=force
        )

    try:
        reports = _pool_map(cell, ps, workers)
    except oriented.Inconclusive as exc:
        click.echo(f"inconclusive: {exc}", err=True)
        sys.exit(EXIT_BUDGET)
    rows = []
    for rep in reports:
        tm = rep.cone.theta_minus if rep.cone else None
        tp = rep.cone.theta_plus if rep.cone else None
        for mu in rep.mu_by_theta:
            rows.append((rep.f_zero, rep.phase, mu.theta, mu.mu_hat, mu.stderrs[-1], tm, tp))
    body = {"pc_hat": pc_hat, "reports": [r.to_dict() for r in reports]}
    params = {"p_grid": list(ps), "theta_grid": list(thetas), "r_schedule": list(schedule),
              "replicates": replicates, "seed": seed, "pc_hat": pc_hat}
    _emit("phase-diagram", params, out_dir, fmt,
          ["p", "phase", "theta", "mu_hat", "stderr", "theta_minus", "theta_plus"],
          rows, body, started)


@main.command("cone")
@click.option("--p", type=float, required=True)
@click.option("--n", type=int, default=10_000, show_default=True)
@common_options
def cmd_cone(p, n, seed, replicates, workers, out_dir, fmt):
    """Edge speed and percolation-cone angles at one open probability."""
    started = time.perf_counter()
    try:
        cone = oriented.estimate_cone(p, n, replicates, seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    body = {"cone": {
        "p": cone.p, "alpha_hat": cone.alpha_hat, "alpha_se": cone.alpha_se,
        "theta_minus": cone.theta_minus, "theta_plus": cone.theta_plus,
        "n": cone.n, "replicates": cone.replicates,
    }}
    params = {"p": p, "n": n, "replicates": replicates, "seed": seed}
    _emit("cone", params, out_dir, fmt,
          ["p", "alpha_hat", "alpha_se", "theta_minus", "theta_plus"],
          [(cone.p, cone.alpha_hat, cone.alpha_se, cone.theta_minus, cone.theta_plus)],
          body, started)


@main.command("pc-estimate")
@click.option("--n", type=int, default=10_000, show_default=True)
@click.option("--tolerance", type=float, default=0.01, show_default=True)
@click.option("--bracket", default="0.0,1.0", show_default=True)
@common_options
def cmd_pc_estimate(n, tolerance, bracket, seed, replicates, workers, out_dir, fmt):
    """Bisection estimate of the oriented-percolation critical probability."""
    started = time.perf_counter()
    lo_hi = _parse_floats(bracket)
    if len(lo_hi) != 2:
        raise click.UsageError("--bracket: expected lo,hi")
    try:
        pc = oriented.estimate_pc(n, tolerance, seed, bracket=lo_hi, replicates=replicates)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    except oriented.Inconclusive as exc:
        click.echo(f"inconclusive: {exc}", err=True)
        sys.exit(EXIT_BUDGET)
    rows = [
        (i, s["p"], s["n"], s["positives"], s["replicates"], s["verdict"])
        for i, s in enumerate(pc.steps)
    ]
    body = {"pc": {"p_hat": pc.p_hat, "bracket": list(pc.bracket), "note": pc.note,
                   "steps": list(pc.steps)}}
    params = {"n": n, "tolerance": tolerance, "bracket": list(lo_hi),
              "replicates": replicates, "seed": seed}
    _emit("pc-estimate", params, out_dir, fmt,
          ["step", "p", "n", "positives", "replicates", "verdict"], rows, body, started)


@main.command("right-edge")
@click.option("--p", type=float, required=True)
@click.option("--n", type=int, default=10_000, show_default=True)
@common_options
def cmd_right_edge(p, n, seed, replicates, workers, out_dir, fmt):
    """Right-edge traces of the half-line-source front."""
    started = time.perf_counter()

    def cell(rep: int):
        tr = oriented.right_edge_trace(p, n, rep, seed)
        return rep, int(tr.r[-1]), tr.alpha_hat

    results = _pool_map(cell, range(replicates), workers)
    rows = [(p, n, rep, r_n, alpha) for rep, r_n, alpha in results]
    alphas = [alpha for _, _, alpha in results]
    mean = sum(alphas) / len(alphas)
    sd = (sum((a - mean) ** 2 for a in alphas) / (len(alphas) - 1)) ** 0.5 if len(alphas) > 1 else 0.0
    body = {"alpha_hat": mean, "alpha_se": sd / math.sqrt(len(alphas)), "p": p, "n": n}
    params = {"p": p, "n": n, "replicates": replicates, "seed": seed}
    _emit("right-edge", params, out_dir, fmt,
          ["p", "n", "replicate", "r_n", "alpha_hat"], rows, body, started)


@main.command("cluster-tail")
@click.option("--p", type=float, required=True)
@click.option("--cap", type=int, default=100_000, show_default=True)
@common_options
def cmd_cluster_tail(p, cap, seed, replicates, workers, out_dir, fmt):
    """Cluster sizes of the origin's oriented cluster, with cap sentinel."""
    started = time.perf_counter()
    if not 0.0 <= p < 1.0:
        raise click.UsageError("--p: cluster exploration needs p < 1")

    def cell(rep: int):
        size = oriented.cluster_size(p, cap, rep, seed)
        return (p, rep, "" if size is oriented.EXCEEDED else size, size is oriented.EXCEEDED)

    rows = _pool_map(cell, range(replicates), workers)
    exceeded = sum(1 for r in rows if r[3])
    body = {"p": p, "cap": cap, "exceeded_fraction": exceeded / replicates,
            "sizes": [r[2] for r in rows if not r[3]]}
    params = {"p": p, "cap": cap, "replicates": replicates, "seed": seed}
    _emit("cluster-tail", params, out_dir, fmt,
          ["p", "replicate", "size", "exceeded"], rows, body, started)


@main.command("shape")
@click.option("--dist", "dist_text", required=True)
@click.option("--t-list", default="50,100,200", show_default=True)
@click.option("--theta-grid", default="0.19634954084936207,0.5890486225480862,0.7853981633974483,0.9817477042468103,1.3744467859455345",
              show_default=False, help="angles of the boundary scan")
@click.option("--window", type=int, default=None, help="window size (default 4x the largest t)")
@common_options
def cmd_shape(dist_text, t_list, theta_grid, window, seed, replicates, workers, out_dir, fmt):
    """Boundary radii of the time-t shapes along rays."""
    from .lattice import GridSpec, generate_field
    from .passage import compute_passage, shape_boundary_radius

    started = time.perf_counter()
    dist = _parse_dist(dist_text)
    ts = sorted(_parse_floats(t_list))
    thetas = _parse_floats(theta_grid)
    w = window if window is not None else int(4 * max(ts))
    grid = GridSpec(w, w)

    def cell(rep: int):
        field = generate_field(grid, dist, seed, rep)
        pf = compute_passage(field)
        out = []
        for t in ts:
            for theta in thetas:
                try:
                    rho = shape_boundary_radius(pf, t, theta)
                    out.append((dists.dist_id(dist), theta, t, rep, rho, False))
                except RayTruncated:
                    out.append((dists.dist_id(dist), theta, t, rep, None, True))
        return out

    rows = [row for batch in _pool_map(cell, range(replicates), workers) for row in batch]
    truncated = sum(1 for r in rows if r[5])
    body = {"window": w, "rows": len(rows), "truncated_fraction": truncated / len(rows)}
    params = {"dist": dists.to_json(dist), "t_list": list(ts), "theta_grid": list(thetas),
              "window": w, "replicates": replicates, "seed": seed}
    _emit("shape", params, out_dir, fmt,
          ["dist_id", "theta", "t", "replicate", "rho", "truncated"], rows, body, started)


@main.command("growth")
@click.option("--n", type=int, default=10, show_default=True)
@click.option("--model", type=click.Choice(["edges", "clocks", "both"]), default="both",
              show_default=True)
@click.option("--dump-trajectories", type=int, default=0, show_default=True,
              help="also write this many chain trajectories as (replicate, step, x, y)")
@common_options
def cmd_growth(n, model, dump_trajectories, seed, replicates, workers, out_dir, fmt):
    """Occupancy histograms of the cell-growth chain and the clock growth."""
    started = time.perf_counter()
    rows = []
    body: dict = {"n": n, "replicates": replicates}
    try:
        if model in ("edges", "both"):
            h = growth_mod.chain_occupancy(n, replicates, seed)
            rows += [("edges", n, x, y, f, replicates) for (x, y), f in sorted(h.items())]
            body["edges_cells"] = len(h)
        if model in ("clocks", "both"):
            h2 = growth_mod.fpp_occupancy(n, replicates, seed)
            rows += [("clocks", n, x, y, f, replicates) for (x, y), f in sorted(h2.items())]
            body["clocks_cells"] = len(h2)
        if model == "both":
            body["tv_distance"] = growth_mod.tv_distance(h, h2)
    except growth_mod.WindowExceeded as exc:
        click.echo(f"window exceeded: {exc}", err=True)
        sys.exit(EXIT_BUDGET)
    if dump_trajectories > 0:
        traj_rows = []
        for rep in range(dump_trajectories):
            stream = growth_mod.GrowthStream(seed=seed, replicate=rep)
            traj_rows += [(rep, step, x, y) for step, x, y in growth_mod.trajectory(n, stream)]
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "growth_trajectories.csv", ["replicate", "step", "x", "y"], traj_rows)
        body["trajectories"] = dump_trajectories
    params = {"n": n, "model": model, "replicates": replicates, "seed": seed,
              "dump_trajectories": dump_trajectories}
    _emit("growth", params, out_dir, fmt,
          ["model", "n", "x", "y", "frequency", "replicates"], rows, body, started)


@main.command("verify")
@click.argument("suite")
@click.option("--compare-to", "compare_dir", default=None,
              help="directory of a previous run of the same suite; outputs are "
                   "byte-compared after a schema-version check")
@common_options
def cmd_verify(suite, compare_dir, seed, replicates, workers, out_dir, fmt):
    """Run one named acceptance suite and report per-criterion verdicts."""
    started = time.perf_counter()
    if suite not in verify.SUITES:
        raise click.UsageError(f"unknown suite {suite!r}; known: {', '.join(sorted(verify.SUITES))}")
    acc_seed = verify.ACCEPTANCE_SEED if seed == 0 else seed
    results = verify.run_suite(suite, seed=acc_seed, workers=workers)
    rows = [r.row() for r in results]
    for r in results:
        click.echo(f"[{'PASS' if r.passed else 'FAIL'}] {r.check_id} {r.name}: {r.detail}")
    body = {
        "suite": suite,
        "checks": [
            {"id": r.check_id, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    params = {"suite": suite, "seed": acc_seed}
    res = _emit(f"verify_{suite}", params, out_dir, fmt,
                ["check_id", "name", "passed", "detail"], rows, body, started)
    if compare_dir is not None:
        other_summary = Path(compare_dir) / f"verify_{suite}_summary.json"
        if not other_summary.exists():
            raise click.UsageError(f"--compare-to: {other_summary} not found")
        other = json.loads(other_summary.read_text())
        if other.get("schema_version") != SCHEMA_VERSION:
            raise click.UsageError(
                f"--compare-to: schema version {other.get('schema_version')!r} does not "
                f"match {SCHEMA_VERSION!r}; refusing to compare"
            )
        same = res.summary_path.read_bytes() == other_summary.read_bytes()
        csv_other = Path(compare_dir) / f"verify_{suite}.csv"
        if res.csv_path is not None and csv_other.exists():
            same = same and res.csv_path.read_bytes() == csv_other.read_bytes()
        click.echo(f"compare-to {compare_dir}: {'identical' if same else 'DIFFERENT'}")
        if not same:
            sys.exit(EXIT_FAILED_CRITERION)
    if not body["all_passed"]:
        sys.exit(EXIT_FAILED_CRITERION)


if __name__ == "__main__":
    main()
