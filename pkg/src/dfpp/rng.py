"""Counter-based uniforms keyed by coordinates.

Every random quantity in this package is a pure function of
(master_seed, replicate, domain, key triple).  Replicates are independent
streams, and an edge keeps its uniform no matter the window size or the
order of traversal, so realizations are shared between nested grids and
between distributions under inverse-CDF coupling.
"""

from __future__ import annotations

import numpy as np

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_INV53 = 2.0**-53

# Domain tags keep unrelated experiments on disjoint streams.
DOMAIN_FPP = 0        # edge passage times on the NE lattice
DOMAIN_ORIENTED = 1   # oriented-percolation edge states
DOMAIN_GROWTH = 2     # growth-model choices and vertex clocks
DOMAIN_COUPLING = 3   # auxiliary variates for distribution couplings

_MASK = 0xFFFFFFFFFFFFFFFF


def _u64(k: int) -> np.uint64:
    return np.uint64(int(k) & _MASK)


def mix64(z):
    """splitmix64 finalizer; works on uint64 scalars and arrays."""
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _as_u64_array(k) -> np.ndarray:
    a = np.asarray(k)
    if a.dtype != np.uint64:
        a = a.astype(np.int64, copy=False).astype(np.uint64)
    return a


def uniform_scalar(seed: int, replicate: int, domain: int, a: int, b: int, c: int) -> float:
    """Uniform in [0,1), a pure function of the six integer keys."""
    with np.errstate(over="ignore"):  # uint64 wraparound is the point
        h = mix64(_u64(seed) ^ GOLDEN)
        for k in (replicate, domain, a, b, c):
            h = mix64(h ^ (_u64(k) + GOLDEN))
    return float(h >> np.uint64(11)) * _INV53


def uniform_array(seed: int, replicate: int, domain: int, a, b, c) -> np.ndarray:
    """Vectorized uniform_scalar; a, b, c broadcast against each other."""
    a, b, c = np.broadcast_arrays(_as_u64_array(a), _as_u64_array(b), _as_u64_array(c))
    with np.errstate(over="ignore"):
        h = mix64(_u64(seed) ^ GOLDEN)
        h = mix64(h ^ (_u64(replicate) + GOLDEN))
        h = mix64(h ^ (_u64(domain) + GOLDEN))
        h = mix64(h ^ (a + GOLDEN))
        h = mix64(h ^ (b + GOLDEN))
        h = mix64(h ^ (c + GOLDEN))
    return (h >> np.uint64(11)).astype(np.float64) * _INV53


def derive_seed(master_seed: int, label: str) -> int:
    """Stable sub-seed for a named experiment cell (not Python's salted hash)."""
    with np.errstate(over="ignore"):
        h = mix64(_u64(master_seed) ^ GOLDEN)
        for byte in label.encode("utf-8"):
            h = mix64(h ^ (_u64(byte) + GOLDEN))
    return int(h)
