"""Monte Carlo estimation of time constants, tails, moments, and phases."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import distributions as dists
from . import kernels
from .lattice import nearest_vertex
from .oriented import ConeEstimate, Inconclusive, estimate_cone
from .rng import derive_seed

DEFAULT_THETA_GRID = (
    0.0,
    math.pi / 12,
    math.pi / 8,
    math.pi / 6,
    math.pi / 4,
    math.pi / 3,
    3 * math.pi / 8,
    5 * math.pi / 12,
    math.pi / 2,
)

Z99 = 2.3263478740408408  # one-sided 99% normal quantile
Z95 = 1.959963984540054


def collect_times(
    dist: dists.EdgeTimeDistribution,
    seed: int,
    replicates: int,
    target: tuple[int, int],
    tau: bool = False,
) -> np.ndarray:
    """Passage times to `target` over replicate fields (streaming DP).

    With tau=True the weights are thresholded to 1{t(e) > 0} under the same
    uniforms, giving the minimum count of positive edges.
    """
    X, Y = target
    kind, cum, vals, rate, shift = dists.tau_lower(dist) if tau else dists.lower(dist)
    out = np.empty(replicates)
    for rep in range(replicates):
        out[rep] = kernels.dp_target(seed, rep, X, Y, kind, cum, vals, rate, shift)
    return out


@dataclass(frozen=True)
class MuEstimate:
    """Per-radius means of T/r along one direction, with the last-point
    estimate and the trend against 1/r."""

    dist_id: str
    theta: float
    r_schedule: tuple[int, ...]
    means: tuple[float, ...]
    stderrs: tuple[float, ...]
    mu_hat: float
    trend_slope: float
    nonincreasing_within_slack: bool
    replicates: int
    seed: int
    samples: tuple | None = field(default=None, repr=False)

    def lower_bound(self, z: float = Z99) -> float:
        return self.mu_hat - z * self.stderrs[-1]

    def to_dict(self) -> dict:
        return {
            "dist_id": self.dist_id,
            "theta": self.theta,
            "r_schedule": list(self.r_schedule),
            "means": list(self.means),
            "stderrs": list(self.stderrs),
            "mu_hat": self.mu_hat,
            "trend_slope": self.trend_slope,
            "nonincreasing_within_slack": self.nonincreasing_within_slack,
            "replicates": self.replicates,
        }


def estimate_mu(
    dist: dists.EdgeTimeDistribution,
    theta: float,
    r_schedule,
    replicates: int,
    seed: int,
    keep_samples: bool = False,
) -> MuEstimate:
    """Estimate the time constant along theta over an increasing r schedule.

    Windows are sized to the target's bounding box, which NE paths never
    leave, so no window error is possible here.
    """
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError("theta must lie in [0, pi/2]")
    r_schedule = tuple(int(r) for r in r_schedule)
    if any(b <= a for a, b in zip(r_schedule, r_schedule[1:])) or not r_schedule:
        raise ValueError("r_schedule must be strictly increasing and nonempty")
    means, ses, samples = [], [], []
    for r in r_schedule:
        target = nearest_vertex((float(r), theta))
        t = collect_times(dist, seed, replicates, target)
        ratios = t / r
        means.append(float(ratios.mean()))
        ses.append(float(ratios.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0)
        if keep_samples:
            samples.append(tuple(t.tolist()))
    noninc = all(
        means[i + 1] <= means[i] + 2.0 * math.hypot(ses[i], ses[i + 1])
        for i in range(len(means) - 1)
    )
    if len(r_schedule) > 1:
        slope = float(np.polyfit([1.0 / r for r in r_schedule], means, 1)[0])
    else:
        slope = 0.0
    return MuEstimate(
        dist_id=dists.dist_id(dist),
        theta=theta,
        r_schedule=r_schedule,
        means=tuple(means),
        stderrs=tuple(ses),
        mu_hat=means[-1],
        trend_slope=slope,
        nonincreasing_within_slack=noninc,
        replicates=replicates,
        seed=seed,
        samples=tuple(samples) if keep_samples else None,
    )


def clopper_pearson(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    alpha = 1.0 - level
    lo = 0.0 if successes == 0 else float(stats.beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(stats.beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


@dataclass(frozen=True)
class TailEstimate:
    dist_id: str
    theta: float
    delta: float
    r: int
    replicates: int
    successes: int
    frequency: float
    ci_lo: float
    ci_hi: float
    level: float = 0.95

    def to_dict(self) -> dict:
        return {
            "dist_id": self.dist_id,
            "theta": self.theta,
            "delta": self.delta,
            "r": self.r,
            "replicates": self.replicates,
            "successes": self.successes,
            "frequency": self.frequency,
            "ci_lo": self.ci_lo,
            "ci_hi": self.ci_hi,
            "level": self.level,
        }


def tail_probability(
    dist: dists.EdgeTimeDistribution,
    theta: float,
    delta: float,
    r: int,
    replicates: int,
    seed: int,
) -> TailEstimate:
    """Empirical frequency of {T <= delta * r} with an exact binomial CI."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    target = nearest_vertex((float(r), theta))
    t = collect_times(dist, seed, replicates, target)
    successes = int((t <= delta * r).sum())
    lo, hi = clopper_pearson(successes, replicates)
    return TailEstimate(
        dist_id=dists.dist_id(dist),
        theta=theta,
        delta=delta,
        r=r,
        replicates=replicates,
        successes=successes,
        frequency=successes / replicates,
        ci_lo=lo,
        ci_hi=hi,
    )


@dataclass(frozen=True)
class MomentPlateau:
    dist_id: str
    theta: float
    m: int
    r_schedule: tuple[int, ...]
    moments: tuple[float, ...]
    stderrs: tuple[float, ...]
    boot_lo: tuple[float, ...]
    boot_hi: tuple[float, ...]
    plateau_ok: bool
    spread_vs_pooled_ok: bool


def moment_plateau(
    dist: dists.EdgeTimeDistribution,
    theta: float,
    m: int,
    r_schedule,
    replicates: int,
    seed: int,
    cone: tuple[float, float],
    p_c_hat: float | None = None,
    bootstrap: int = 1000,
) -> MomentPlateau:
    """Per-radius m-th moments of T, with bootstrap CIs and plateau checks.

    Only meaningful on the percolation cone, so directions outside the
    supplied cone are rejected.
    """
    tm, tp = cone
    if not tm <= theta <= tp:
        raise ValueError(f"theta={theta} outside the cone [{tm}, {tp}]")
    if p_c_hat is not None and dists.atom_at_zero(dist) <= p_c_hat:
        raise ValueError("moment plateau requires a supercritical zero atom")
    r_schedule = tuple(int(r) for r in r_schedule)
    rng = np.random.default_rng(derive_seed(seed, f"bootstrap-m{m}") % 2**63)
    moments, ses, blo, bhi = [], [], [], []
    for r in r_schedule:
        t = collect_times(dist, seed, replicates, nearest_vertex((float(r), theta))) ** m
        moments.append(float(t.mean()))
        ses.append(float(t.std(ddof=1) / math.sqrt(replicates)))
        idx = rng.integers(0, replicates, size=(bootstrap, replicates))
        boot = t[idx].mean(axis=1)
        blo.append(float(np.quantile(boot, 0.025)))
        bhi.append(float(np.quantile(boot, 0.975)))
    plateau_ok = not (bhi[-1] < blo[0] or blo[-1] > bhi[0])
    pooled = math.sqrt(float(np.mean(np.square(ses))))
    spread_ok = (max(moments) - min(moments)) <= 3.0 * pooled
    return MomentPlateau(
        dist_id=dists.dist_id(dist),
        theta=theta,
        m=m,
        r_schedule=r_schedule,
        moments=tuple(moments),
        stderrs=tuple(ses),
        boot_lo=tuple(blo),
        boot_hi=tuple(bhi),
        plateau_ok=plateau_ok,
        spread_vs_pooled_ok=spread_ok,
    )


@dataclass(frozen=True)
class SigmaTail:
    dist_id: str
    theta: float
    r: int
    replicates: int
    survival: tuple[tuple[int, float], ...]  # (k, freq of {sigma >= k})
    slope: float
    intercept: float
    r_squared: float
    ks_used: tuple[int, ...]


def sigma_tail(
    dist: dists.EdgeTimeDistribution,
    theta: float,
    r: int,
    replicates: int,
    seed: int,
    min_freq: float = 1e-3,
) -> SigmaTail:
    """Survival frequencies of sigma (minimum positive-edge count to the
    target) and a log-linearity fit over k >= 1 down to `min_freq`."""
    target = nearest_vertex((float(r), theta))
    sig = collect_times(dist, seed, replicates, target, tau=True).astype(np.int64)
    kmax = int(sig.max())
    survival = [(k, float((sig >= k).mean())) for k in range(1, kmax + 1)]
    usable = [(k, f) for k, f in survival if f >= min_freq]
    if len(usable) >= 2:
        xs = np.array([k for k, _ in usable], dtype=float)
        ys = np.log([f for _, f in usable])
        slope, intercept = np.polyfit(xs, ys, 1)
        yhat = slope * xs + intercept
        ss_tot = float(((ys - ys.mean()) ** 2).sum())
        r2 = 1.0 if ss_tot == 0 else 1.0 - float(((ys - yhat) ** 2).sum()) / ss_tot
    else:
        slope, intercept, r2 = 0.0, 0.0, 1.0
    return SigmaTail(
        dist_id=dists.dist_id(dist),
        theta=theta,
        r=r,
        replicates=replicates,
        survival=tuple(survival),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=float(r2),
        ks_used=tuple(k for k, _ in usable),
    )


@dataclass(frozen=True)
class ConvexityReport:
    triples: int
    violations: tuple
    passed: bool


def convexity_check(mu_by_theta: list[MuEstimate], slack_z: float = 2.0) -> ConvexityReport:
    """Midpoint-chord convexity of the homogeneous extension r*mu(theta).

    For every pair of grid angles whose bisector is itself a grid angle,
    the chord midpoint must dominate the radially-scaled estimate there:
    cos((tk-ti)/2) * mu(mid) <= (mu(ti) + mu(tk))/2, within slack_z
    combined standard errors.
    """
    if len(mu_by_theta) < 5:
        raise ValueError("need at least 5 grid angles")
    est = sorted(mu_by_theta, key=lambda e: e.theta)
    thetas = [e.theta for e in est]
    triples = 0
    violations = []
    for i in range(len(est)):
        for k in range(i + 2, len(est)):
            mid = 0.5 * (thetas[i] + thetas[k])
            js = [j for j in range(len(est)) if abs(thetas[j] - mid) < 1e-9]
            if not js:
                continue
            j = js[0]
            triples += 1
            chord = math.cos(0.5 * (thetas[k] - thetas[i]))
            lhs = chord * est[j].mu_hat
            rhs = 0.5 * (est[i].mu_hat + est[k].mu_hat)
            slack = slack_z * math.sqrt(
                est[j].stderrs[-1] ** 2
                + 0.25 * est[i].stderrs[-1] ** 2
                + 0.25 * est[k].stderrs[-1] ** 2
            )
            # rounding guard keeps the analytic equality case (linear mu) green
            if lhs > rhs + slack + 1e-12 * max(1.0, abs(rhs)):
                violations.append(
                    {
                        "theta_i": thetas[i],
                        "theta_j": thetas[j],
                        "theta_k": thetas[k],
                        "lhs": lhs,
                        "rhs": rhs,
                        "slack": slack,
                    }
                )
    return ConvexityReport(triples=triples, violations=tuple(violations), passed=not violations)


@dataclass(frozen=True)
class CriticalDivergence:
    dist_id: str
    r_schedule: tuple[int, ...]
    means: tuple[float, ...]
    stderrs: tuple[float, ...]
    strictly_increasing: bool
    ratio_over_schedule: float  # (mean T / r) at last r over the same at first r
    ratio_ok: bool
    loglog_slope: float
    slope_ok: bool


def critical_divergence(
    dist: dists.EdgeTimeDistribution,
    r_schedule,
    replicates: int,
    seed: int,
    theta: float = math.pi / 4,
    ratio_limit: float = 0.25,
    slope_limit: float = 0.75,
) -> CriticalDivergence:
    """Growth diagnostics for two-valued weights near criticality: means must
    keep increasing while T/r collapses and the log-log slope stays under
    the square-root-log envelope."""
    pts = dists.atoms(dist)
    purely_01 = (
        pts
        and abs(sum(p for _, p in pts) - 1.0) <= dists.PROB_TOL
        and not ({v for v, _ in pts} - {0.0, 1.0})
    )
    if not purely_01:
        raise ValueError("critical divergence diagnostics expect a 0/1 law")
    r_schedule = tuple(int(r) for r in r_schedule)
    means, ses = [], []
    for r in r_schedule:
        t = collect_times(dist, seed, replicates, nearest_vertex((float(r), theta)))
        means.append(float(t.mean()))
        ses.append(float(t.std(ddof=1) / math.sqrt(replicates)))
    increasing = all(a < b for a, b in zip(means, means[1:]))
    ratio = (means[-1] / r_schedule[-1]) / (means[0] / r_schedule[0])
    slope = float(np.polyfit(np.log(r_schedule), np.log(means), 1)[0])
    return CriticalDivergence(
        dist_id=dists.dist_id(dist),
        r_schedule=r_schedule,
        means=tuple(means),
        stderrs=tuple(ses),
        strictly_increasing=increasing,
        ratio_over_schedule=float(ratio),
        ratio_ok=ratio < ratio_limit,
        loglog_slope=slope,
        slope_ok=slope <= slope_limit,
    )


@dataclass(frozen=True)
class PhaseBudget:
    r_schedule: tuple[int, ...] = (64, 128, 256)
    replicates: int = 200
    cone_levels: int = 4096
    cone_replicates: int = 32


@dataclass(frozen=True)
class PhaseReport:
    dist_id: str
    f_zero: float
    p_c_hat: float
    phase: str
    cone: ConeEstimate | None
    mu_by_theta: tuple[MuEstimate, ...]
    verdicts: dict

    def to_dict(self) -> dict:
        cone = None
        if self.cone is not None:
            cone = {
                "p": self.cone.p,
                "alpha_hat": self.cone.alpha_hat,
                "alpha_se": self.cone.alpha_se,
                "theta_minus": self.cone.theta_minus,
                "theta_plus": self.cone.theta_plus,
            }
        return {
            "dist_id": self.dist_id,
            "f_zero": self.f_zero,
            "p_c_hat": self.p_c_hat,
            "phase": self.phase,
            "cone": cone,
            "mu_by_theta": [e.to_dict() for e in self.mu_by_theta],
            "verdicts": self.verdicts,
        }


def _trends_to_zero(est: MuEstimate) -> bool:
    first, last = est.means[0], est.means[-1]
    return last <= max(0.5 * first, 1e-9)


def classify_phase(
    dist: dists.EdgeTimeDistribution,
    p_c_hat: float,
    theta_grid=DEFAULT_THETA_GRID,
    budget: PhaseBudget = PhaseBudget(),
    seed: int = 0,
    force_phase: str | None = None,
    tolerance: float = 0.01,
) -> PhaseReport:
    """Classify the law against the estimated critical probability and run
    the matching positivity / decay checks per direction."""
    f0 = dists.atom_at_zero(dist)
    if force_phase is not None:
        phase = force_phase
    elif f0 > p_c_hat + tolerance:
        phase = "supercritical"
    elif f0 < p_c_hat - tolerance:
        phase = "subcritical"
    else:
        raise Inconclusive(
            f"F(0)={f0} within tolerance {tolerance} of p_c_hat={p_c_hat}; pass force_phase"
        )
    mus = tuple(
        estimate_mu(dist, th, budget.r_schedule, budget.replicates, seed) for th in theta_grid
    )
    verdicts: dict = {}
    cone = None
    if phase == "subcritical":
        verdicts["mu-positive-all-theta"] = all(e.lower_bound() > 0 for e in mus)
    elif phase == "critical":
        diag = [e for e in mus if abs(e.theta - math.pi / 4) < 1e-9]
        off = [e for e in mus if abs(e.theta - math.pi / 4) >= 1e-9]
        verdicts["mu-vanishes-on-diagonal"] = all(_trends_to_zero(e) for e in diag)
        verdicts["mu-positive-off-diagonal"] = all(e.lower_bound() > 0 for e in off)
    else:
        if f0 >= 1.0:
            cone = ConeEstimate(
                p=1.0,
                alpha_hat=1.0,
                alpha_se=0.0,
                theta_minus=0.0,
                theta_plus=math.pi / 2,
                n=0,
                replicates=0,
            )
        else:
            cone = estimate_cone(f0, budget.cone_levels, budget.cone_replicates, seed)
        inside = [e for e in mus if cone.theta_minus <= e.theta <= cone.theta_plus]
        outside = [e for e in mus if e not in inside]
        verdicts["mu-vanishes-on-cone"] = all(_trends_to_zero(e) for e in inside)
        verdicts["mu-positive-off-cone"] = all(e.lower_bound() > 0 for e in outside)
    return PhaseReport(
        dist_id=dists.dist_id(dist),
        f_zero=f0,
        p_c_hat=p_c_hat,
        phase=phase,
        cone=cone,
        mu_by_theta=mus,
        verdicts=verdicts,
    )
