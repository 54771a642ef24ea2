"""Edge-time laws, inverse-CDF sampling, stochastic ordering, and couplings.

All sampling is by the generalized inverse F^{-1}(u) = inf{x : F(x) >= u},
so that pointwise CDF ordering of two laws turns into a pathwise ordering
of samples under common uniforms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

PROB_TOL = 1e-12


@dataclass(frozen=True)
class Bernoulli01:
    """Two-point law on {0, 1}: value 0 with probability p0."""

    p0: float

    def __post_init__(self):
        if not 0.0 <= self.p0 <= 1.0:
            raise ValueError(f"p0 must be in [0,1], got {self.p0}")


@dataclass(frozen=True)
class DiscreteAtoms:
    """Finitely many atoms (value, prob); values ascending, probs sum to 1."""

    values: tuple
    probs: tuple

    def __post_init__(self):
        if len(self.values) != len(self.probs) or not self.values:
            raise ValueError("values and probs must be nonempty and equal length")
        if any(v < 0 for v in self.values):
            raise ValueError("support points must be >= 0")
        if list(self.values) != sorted(self.values):
            raise ValueError("values must be sorted ascending")
        if len(set(self.values)) != len(self.values):
            raise ValueError("duplicate support points")
        if any(p < 0 for p in self.probs):
            raise ValueError("negative probability")
        if abs(sum(self.probs) - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, not 1")


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")


@dataclass(frozen=True)
class Shifted:
    """Law of X + a where X has the inner law; support must stay >= 0."""

    inner: "EdgeTimeDistribution"
    a: float

    def __post_init__(self):
        if support_min(self.inner) + self.a < 0:
            raise ValueError("shift would produce negative support")


EdgeTimeDistribution = Bernoulli01 | DiscreteAtoms | Exponential | Shifted


def support_min(dist: EdgeTimeDistribution) -> float:
    if isinstance(dist, Bernoulli01):
        return 0.0 if dist.p0 > 0 else 1.0
    if isinstance(dist, DiscreteAtoms):
        return min(v for v, p in zip(dist.values, dist.probs) if p > 0)
    if isinstance(dist, Exponential):
        return 0.0
    return support_min(dist.inner) + dist.a


def cdf(dist: EdgeTimeDistribution, x: float) -> float:
    if isinstance(dist, Bernoulli01):
        if x < 0:
            return 0.0
        return dist.p0 if x < 1 else 1.0
    if isinstance(dist, DiscreteAtoms):
        return float(sum(p for v, p in zip(dist.values, dist.probs) if v <= x))
    if isinstance(dist, Exponential):
        return 1.0 - math.exp(-dist.rate * x) if x >= 0 else 0.0
    return cdf(dist.inner, x - dist.a)


def atom_at_zero(dist: EdgeTimeDistribution) -> float:
    """F(0): the open-edge probability that drives the phase transition."""
    return cdf(dist, 0.0)


def mean(dist: EdgeTimeDistribution) -> float:
    if isinstance(dist, Bernoulli01):
        return 1.0 - dist.p0
    if isinstance(dist, DiscreteAtoms):
        return float(sum(v * p for v, p in zip(dist.values, dist.probs)))
    if isinstance(dist, Exponential):
        return 1.0 / dist.rate
    return mean(dist.inner) + dist.a


def atoms(dist: EdgeTimeDistribution) -> list[tuple[float, float]]:
    """The point masses of the law, as (value, prob), ascending."""
    if isinstance(dist, Bernoulli01):
        out = []
        if dist.p0 > 0:
            out.append((0.0, dist.p0))
        if dist.p0 < 1:
            out.append((1.0, 1.0 - dist.p0))
        return out
    if isinstance(dist, DiscreteAtoms):
        return [(float(v), float(p)) for v, p in zip(dist.values, dist.probs) if p > 0]
    if isinstance(dist, Exponential):
        return []
    return [(v + dist.a, p) for v, p in atoms(dist.inner)]


# Lowered form consumed by the DP kernels: either a step quantile table
# (kind 0) or a shifted exponential (kind 1).
KIND_DISCRETE = 0
KIND_EXPONENTIAL = 1


def lower(dist: EdgeTimeDistribution) -> tuple[int, np.ndarray, np.ndarray, float, float]:
    """Collapse a law to (kind, cum, values, rate, shift) for the kernels."""
    shift = 0.0
    while isinstance(dist, Shifted):
        shift += dist.a
        dist = dist.inner
    if isinstance(dist, Exponential):
        return (KIND_EXPONENTIAL, np.empty(0), np.empty(0), dist.rate, shift)
    pts = atoms(dist)
    vals = np.array([v + shift for v, _ in pts])
    cum = np.cumsum([p for _, p in pts])
    cum[-1] = 1.0  # kill normalization round-off so sampling is total on [0,1)
    return (KIND_DISCRETE, cum, vals, 0.0, 0.0)


def tau_lower(dist: EdgeTimeDistribution):
    """Lowered form of the 0/1 law tau(e) = 1{t(e) > 0} under the same uniforms."""
    return lower(Bernoulli01(p0=atom_at_zero(dist)))


def sample(dist: EdgeTimeDistribution, u: float) -> float:
    """Inverse-CDF sample: F^{-1}(u) = inf{x : F(x) >= u}, u in [0,1)."""
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must be in [0,1), got {u}")
    kind, cum, vals, rate, shift = lower(dist)
    if kind == KIND_EXPONENTIAL:
        return shift - math.log1p(-u) / rate
    # first index with cum[idx] >= u, i.e. the generalized inverse
    idx = min(int(np.searchsorted(cum, u, side="left")), len(vals) - 1)
    return float(vals[idx])


def sample_array(dist: EdgeTimeDistribution, u: np.ndarray) -> np.ndarray:
    from .kernels import exp_quantile_array

    kind, cum, vals, rate, shift = lower(dist)
    if kind == KIND_EXPONENTIAL:
        # libm-backed loop keeps array samples bit-identical to sample()
        return exp_quantile_array(np.asarray(u, dtype=np.float64), rate, shift)
    idx = np.minimum(np.searchsorted(cum, u, side="left"), len(vals) - 1)
    return vals[idx]


def stochastically_dominates(
    f1: EdgeTimeDistribution,
    f2: EdgeTimeDistribution,
    grid: list[float] | None = None,
) -> bool:
    """True iff F1(x) <= F2(x) at every probe point and atom of either law.

    This is the premise under which passage times for f2 are pathwise below
    those for f1 under common uniforms.
    """
    probes = set(grid or ())
    probes.update(v for v, _ in atoms(f1))
    probes.update(v for v, _ in atoms(f2))
    probes.add(0.0)
    return all(cdf(f1, x) <= cdf(f2, x) + PROB_TOL for x in probes)


# ---------------------------------------------------------------------------
# Couplings for the near-critical constructions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoupledPair:
    """A sample t of the base law and its coupled companion g."""

    t: float
    g: float


@dataclass(frozen=True)
class GEpsilonSpec:
    """Base law flat on [0, h) with a jump at h, and a mass transfer epsilon.

    The coupled law moves probability epsilon from the atom at h down to the
    atom at 0, leaving everything above h untouched.
    """

    base: EdgeTimeDistribution
    h: float
    epsilon: float

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        f0 = atom_at_zero(self.base)
        fh = cdf(self.base, self.h)
        if any(0.0 < v < self.h for v, _ in atoms(self.base)):
            raise ValueError("base law must be flat on (0, h)")
        if not fh > f0:
            raise ValueError("base law needs an atom at h")
        if not f0 + self.epsilon < fh:
            raise ValueError("epsilon must be smaller than the jump at h")

    @property
    def branch_prob(self) -> float:
        """P[g = 0 | t = h] = epsilon / (F(h) - F(0))."""
        return self.epsilon / (cdf(self.base, self.h) - atom_at_zero(self.base))


def g_epsilon_distribution(spec: GEpsilonSpec) -> DiscreteAtoms:
    """The marginal law of the coupled sample g (base must be discrete)."""
    base_atoms = atoms(spec.base)
    out: dict[float, float] = {}
    for v, p in base_atoms:
        if v == 0.0:
            out[0.0] = out.get(0.0, 0.0) + p
        elif v == spec.h:
            out[0.0] = out.get(0.0, 0.0) + spec.epsilon
            out[spec.h] = out.get(spec.h, 0.0) + p - spec.epsilon
        else:
            out[v] = out.get(v, 0.0) + p
    vals = tuple(sorted(out))
    return DiscreteAtoms(values=vals, probs=tuple(out[v] for v in vals))


def couple_g_epsilon(spec: GEpsilonSpec, t: float, u_aux: float) -> CoupledPair:
    """Couple g to an observed sample t of the base law.

    g = 0 when t = 0; g = t when t > h; when t = h, g drops to 0 with
    probability epsilon/(F(h)-F(0)) and stays at h otherwise.
    """
    if t == 0.0:
        return CoupledPair(t=0.0, g=0.0)
    if t > spec.h:
        if not any(abs(v - t) < 1e-12 for v, _ in atoms(spec.base)):
            raise ValueError(f"t={t} is not in the support of the base law")
        return CoupledPair(t=t, g=t)
    if t == spec.h:
        g = 0.0 if u_aux < spec.branch_prob else spec.h
        return CoupledPair(t=t, g=g)
    raise ValueError(f"t={t} is not in the support of the base law")


def couple_g_epsilon_array(spec: GEpsilonSpec, t: np.ndarray, u_aux: np.ndarray) -> np.ndarray:
    """Vectorized couple_g_epsilon; returns the g array."""
    g = t.copy()
    at_h = t == spec.h
    g[at_h & (u_aux < spec.branch_prob)] = 0.0
    return g


def build_g_n(f: EdgeTimeDistribution, x_n: float) -> DiscreteAtoms:
    """Flatten f on [0, x_n): all mass of atoms in (0, x_n) moves up to x_n."""
    pts = atoms(f)
    if isinstance(f, Exponential) or not pts:
        raise ValueError("build_g_n needs a discrete law")
    if not any(abs(v - x_n) < 1e-12 for v, _ in pts):
        raise ValueError(f"x_n={x_n} is not a support point")
    out: dict[float, float] = {}
    for v, p in pts:
        key = v if (v == 0.0 or v >= x_n) else x_n
        out[key] = out.get(key, 0.0) + p
    vals = tuple(sorted(out))
    return DiscreteAtoms(values=vals, probs=tuple(out[v] for v in vals))


# ---------------------------------------------------------------------------
# JSON wire format: {"bernoulli01": {"p0": ..}}, {"atoms": [[v,p],..]},
# {"exponential": {"rate": ..}}, {"shift": {"a": .., "inner": {..}}}
# ---------------------------------------------------------------------------


def from_json(obj) -> EdgeTimeDistribution:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError("distribution literal must be a single-key object")
    key, body = next(iter(obj.items()))
    if key == "bernoulli01":
        return Bernoulli01(p0=float(body["p0"]))
    if key == "atoms":
        pairs = [(float(v), float(p)) for v, p in body]
        pairs.sort()
        return DiscreteAtoms(values=tuple(v for v, _ in pairs), probs=tuple(p for _, p in pairs))
    if key == "exponential":
        return Exponential(rate=float(body["rate"]))
    if key == "shift":
        return Shifted(inner=from_json(body["inner"]), a=float(body["a"]))
    raise ValueError(f"unknown distribution kind {key!r}")


def to_json(dist: EdgeTimeDistribution) -> dict:
    if isinstance(dist, Bernoulli01):
        return {"bernoulli01": {"p0": dist.p0}}
    if isinstance(dist, DiscreteAtoms):
        return {"atoms": [[v, p] for v, p in zip(dist.values, dist.probs)]}
    if isinstance(dist, Exponential):
        return {"exponential": {"rate": dist.rate}}
    return {"shift": {"a": dist.a, "inner": to_json(dist.inner)}}


def dist_id(dist: EdgeTimeDistribution) -> str:
    """Canonical one-line identifier used in provenance and output files."""
    return json.dumps(to_json(dist), sort_keys=True, separators=(",", ":"))
