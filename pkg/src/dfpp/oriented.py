"""Oriented bond percolation on the rotated lattice.

Sites are (x, level); open edges run from (x, n) to (x+1, n+1) and
(x-1, n+1).  The right edge of the half-line-source front yields the edge
speed, the critical probability estimate, and the percolation-cone angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .rng import DOMAIN_ORIENTED, uniform_array, uniform_scalar


class Inconclusive(RuntimeError):
    """The statistical test could not separate the hypotheses within budget."""


class _NegInfinity:
    """Explicit sentinel for the right edge of an empty front."""

    __slots__ = ()

    def __repr__(self):
        return "NEG_INF"


NEG_INF = _NegInfinity()


class _Exceeded:
    """Explicit sentinel for a cluster exploration that hit its cap."""

    __slots__ = ()

    def __repr__(self):
        return "EXCEEDED"


EXCEEDED = _Exceeded()

SOURCE_ORIGIN = "origin"
SOURCE_HALF_LINE = "half-line"

DEFAULT_MARGIN = 200

# Maps the measured right-edge speed (sites per level) onto the half-offset
# used by the cone-angle formula.  The value is pinned by two anchors: all
# edges open must give the full quadrant (0, pi/2), and zero speed must give
# the diagonal (pi/4, pi/4).
CONE_CONVENTION_SCALE = 0.5


@dataclass(frozen=True)
class EdgeStream:
    """Uniforms for oriented-percolation edges, keyed by (level, site, direction)."""

    seed: int
    replicate: int

    def uniform(self, level: int, x: int, direction: int) -> float:
        return uniform_scalar(self.seed, self.replicate, DOMAIN_ORIENTED, level, x, direction)

    def uniform_row(self, level: int, xs: np.ndarray, direction: int) -> np.ndarray:
        return uniform_array(self.seed, self.replicate, DOMAIN_ORIENTED, level, xs, direction)


@dataclass(frozen=True)
class FrontState:
    """Occupied sites of one level, as a bitmap over [base, base + len - 1].

    For the half-line source, sites left of the window stand in for the
    infinite occupied half-line (margin truncation).
    """

    level: int
    base: int
    occupied: np.ndarray
    source: str
    margin: int = DEFAULT_MARGIN

    def occupied_sites(self) -> list[int]:
        return [self.base + i for i in np.nonzero(self.occupied)[0].tolist()]

    def right_edge(self):
        idx = np.nonzero(self.occupied)[0]
        if len(idx) == 0:
            return (self.base - 1) if self.source == SOURCE_HALF_LINE else NEG_INF
        return self.base + int(idx[-1])

    def is_occupied(self, x: int) -> bool:
        if x < self.base:
            return self.source == SOURCE_HALF_LINE
        if x >= self.base + len(self.occupied):
            return False
        return bool(self.occupied[x - self.base])


def initial_front(source: str, margin: int = DEFAULT_MARGIN) -> FrontState:
    if source == SOURCE_ORIGIN:
        return FrontState(level=0, base=0, occupied=np.array([True]), source=source, margin=margin)
    if source == SOURCE_HALF_LINE:
        return FrontState(
            level=0,
            base=-margin,
            occupied=np.ones(margin + 1, dtype=bool),
            source=source,
            margin=margin,
        )
    raise ValueError(f"unknown source {source!r}")


def evolve_front(state: FrontState, p: float, stream: EdgeStream) -> FrontState:
    """One level of the front: x is occupied at n+1 iff its down-left parent
    opens the up-right edge or its down-right parent opens the up-left edge."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a probability")
    lev = state.level
    if state.source == SOURCE_ORIGIN:
        nbase = state.base - 1
        xs = np.arange(nbase, state.base + len(state.occupied) + 1)
    else:
        r = state.right_edge()
        nbase = r + 1 - state.margin
        xs = np.arange(nbase, r + 2)
    open_ur = stream.uniform_row(lev, xs - 1, 0) < p
    open_ul = stream.uniform_row(lev, xs + 1, 1) < p
    occ_left = np.array([state.is_occupied(int(x) - 1) for x in xs])
    occ_right = np.array([state.is_occupied(int(x) + 1) for x in xs])
    new = (occ_left & open_ur) | (occ_right & open_ul)
    return FrontState(
        level=lev + 1,
        base=int(nbase),
        occupied=new,
        source=state.source,
        margin=state.margin,
    )


@dataclass(frozen=True)
class RightEdgeTrace:
    """The sequence r_1..r_n of right-edge positions for one replicate."""

    p: float
    r: np.ndarray
    seed: int
    replicate: int
    margin: int

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def alpha_hat(self) -> float:
        return float(self.r[-1]) / self.n


def right_edge_trace(
    p: float,
    n: int,
    replicate: int,
    seed: int,
    margin: int = DEFAULT_MARGIN,
) -> RightEdgeTrace:
    if n < 1:
        raise ValueError("need at least one level")
    r = kernels.right_edge_kernel(seed, replicate, p, n, margin)
    return RightEdgeTrace(p=p, r=r, seed=seed, replicate=replicate, margin=margin)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class PcEstimate:
    p_hat: float
    bracket: tuple[float, float]
    steps: tuple
    note: str = ""


SUPERCRITICAL, UNDECIDED, SUBCRITICAL = 1, 0, -1


def _classify_drift(
    p: float,
    n: int,
    replicates: int,
    seed: int,
    margin: int,
    max_n_factor: int,
    steps: list,
    z: float = 1.96,
) -> int:
    """Sign of the right-edge drift via a Wilson interval on sign frequencies,
    doubling the level count while the test cannot separate."""
    m = n
    while True:
        finals = [
            int(kernels.right_edge_kernel(seed, rep, p, m, margin)[-1])
            for rep in range(replicates)
        ]
        positives = sum(1 for r in finals if r > 0)
        lo, hi = wilson_interval(positives, replicates, z)
        if lo > 0.5:
            verdict = SUPERCRITICAL
        elif hi < 0.5:
            verdict = SUBCRITICAL
        else:
            verdict = UNDECIDED
        steps.append(
            {"p": p, "n": m, "positives": positives, "replicates": replicates, "verdict": verdict}
        )
        if verdict != UNDECIDED or m >= n * max_n_factor:
            return verdict
        m *= 2


def estimate_pc(
    n: int,
    tolerance: float,
    seed: int,
    bracket: tuple[float, float] = (0.0, 1.0),
    replicates: int = 32,
    margin: int = DEFAULT_MARGIN,
    max_n_factor: int = 8,
) -> PcEstimate:
    """Bisection on p for the critical probability of oriented percolation.

    Edge states share uniforms across all probed p, so the drift is
    pathwise monotone in p and the bracket stays valid.
    """
    if tolerance < 1e-3:
        raise ValueError("tolerance below 1e-3 is not supported")
    lo, hi = bracket
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("invalid bracket")
    steps: list = []

    def classify(p):
        return _classify_drift(p, n, replicates, seed, margin, max_n_factor, steps)

    if classify(lo) == SUPERCRITICAL:
        return PcEstimate(
            p_hat=lo,
            bracket=(lo, lo),
            steps=tuple(steps),
            note="supercritical at lower bracket edge",
        )
    if classify(hi) == SUBCRITICAL:
        return PcEstimate(
            p_hat=hi,
            bracket=(hi, hi),
            steps=tuple(steps),
            note="subcritical at upper bracket edge",
        )
    while hi - lo >= tolerance:
        mid = 0.5 * (lo + hi)
        verdict = classify(mid)
        if verdict == SUPERCRITICAL:
            hi = mid
        elif verdict == SUBCRITICAL:
            lo = mid
        else:
            raise Inconclusive(
                f"drift sign at p={mid} undecidable after level budget {n * max_n_factor}"
            )
    return PcEstimate(p_hat=0.5 * (lo + hi), bracket=(lo, hi), steps=tuple(steps))


def cone_angles(
    alpha_hat: float,
    convention_scale: float = CONE_CONVENTION_SCALE,
) -> tuple[float, float]:
    """Percolation-cone angles from the measured edge speed.

    theta_minus = atan((1/2 - a)/(1/2 + a)) and theta_plus its mirror, with
    a = convention_scale * alpha_hat.  Exact at the two anchors: alpha 0
    gives (pi/4, pi/4); the all-open speed 1 gives (0, pi/2).
    """
    a = convention_scale * alpha_hat
    num_m, den_m = 0.5 - a, 0.5 + a
    if num_m < -1e-12 or den_m < -1e-12:
        raise ValueError(f"alpha_hat={alpha_hat} outside the physical range for this convention")
    num_m, den_m = max(num_m, 0.0), max(den_m, 0.0)
    theta_minus = math.atan2(num_m, den_m)
    theta_plus = math.atan2(den_m, num_m)
    clamp = lambda t: min(max(t, 0.0), math.pi / 2)
    return clamp(theta_minus), clamp(theta_plus)


@dataclass(frozen=True)
class ConeEstimate:
    p: float
    alpha_hat: float
    alpha_se: float
    theta_minus: float
    theta_plus: float
    n: int
    replicates: int


def estimate_cone(
    p: float,
    n: int,
    replicates: int,
    seed: int,
    margin: int = DEFAULT_MARGIN,
) -> ConeEstimate:
    alphas = np.array(
        [right_edge_trace(p, n, rep, seed, margin).alpha_hat for rep in range(replicates)]
    )
    alpha = float(alphas.mean())
    se = float(alphas.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    tm, tp = cone_angles(alpha)
    return ConeEstimate(
        p=p,
        alpha_hat=alpha,
        alpha_se=se,
        theta_minus=tm,
        theta_plus=tp,
        n=n,
        replicates=replicates,
    )


def cluster_size(p: float, cap: int, replicate: int, seed: int):
    """|C_0| of the origin's cluster, or the EXCEEDED sentinel at the cap."""
    if not 0.0 <= p < 1.0:
        raise ValueError("cluster_size needs p < 1")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    size, exceeded = kernels.cluster_size_kernel(seed, replicate, p, cap)
    return EXCEEDED if exceeded else int(size)


def slope_connectivity(
    p: float,
    a: float,
    u1: int,
    replicates: int,
    seed: int,
    theta_minus: float,
    p_c_hat: float | None = None,
) -> float:
    """Fraction of replicates in which some vertex with x >= u1 and slope
    y/x <= a is reached by a NE zero-path from the origin.

    Open edges are the zero-time edges of a two-point field with zero
    probability p, so this runs on the thresholded passage table.
    """
    from .distributions import Bernoulli01
    from .lattice import GridSpec, generate_field

    if not 0.0 < a < math.tan(theta_minus):
        raise ValueError(f"slope bound a={a} must lie in (0, tan(theta_minus))")
    if p_c_hat is not None and p < p_c_hat:
        raise ValueError("slope connectivity is a critical/supercritical check")
    if u1 == 0:
        return 1.0
    W = int(math.ceil(u1 * 1.3)) + 2
    H = int(math.ceil(a * W)) + 2
    grid = GridSpec(W, H)
    slope_ok = np.zeros((W + 1, H + 1), dtype=bool)
    for x in range(u1, W + 1):
        slope_ok[x, : int(math.floor(a * x)) + 1] = True
    hits = 0
    for rep in range(replicates):
        fld = generate_field(grid, Bernoulli01(p0=p), seed, rep)
        T = kernels.dp_tau_full(fld.east, fld.north)
        if bool(((T == 0) & slope_ok).any()):
            hits += 1
    return hits / replicates
