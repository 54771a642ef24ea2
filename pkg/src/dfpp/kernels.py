"""JIT kernels for the hot loops.

The hash chain here must stay bit-identical to rng.uniform_scalar, and the
step-quantile must match distributions.sample (first cumulative >= u), so
that fused kernels and materialized-field code see the same realizations.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLD = np.uint64(0x9E3779B97F4A7C15)
_INV53 = 2.0**-53

KIND_DISCRETE = 0
KIND_EXPONENTIAL = 1

PARENT_ORIGIN = 0
PARENT_WEST = 1
PARENT_SOUTH = 2

# numeric stand-ins are never exposed; the wrappers translate this flag
NO_EDGE_SENTINEL = np.iinfo(np.int64).min


@njit(cache=True, nogil=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True, inline="always")
def _uniform(seed, replicate, domain, a, b, c):
    h = _mix64(np.uint64(seed) ^ _GOLD)
    h = _mix64(h ^ (np.uint64(replicate) + _GOLD))
    h = _mix64(h ^ (np.uint64(domain) + _GOLD))
    h = _mix64(h ^ (np.uint64(a) + _GOLD))
    h = _mix64(h ^ (np.uint64(b) + _GOLD))
    h = _mix64(h ^ (np.uint64(c) + _GOLD))
    return (h >> np.uint64(11)) * _INV53


@njit(cache=True, nogil=True, inline="always")
def _quantile(u, kind, cum, vals, rate, shift):
    if kind == KIND_EXPONENTIAL:
        return shift - np.log1p(-u) / rate
    lo = 0
    hi = len(cum) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] >= u:
            hi = mid
        else:
            lo = mid + 1
    return vals[lo]


@njit(cache=True, nogil=True, inline="always")
def _edge_weight(seed, rep, x, y, axis, kind, cum, vals, rate, shift):
    # axis 0: east edge (x,y)->(x+1,y); axis 1: north edge (x,y)->(x,y+1)
    u = _uniform(seed, rep, 0, x, y, axis)
    return _quantile(u, kind, cum, vals, rate, shift)


@njit(cache=True, nogil=True)
def dp_target(seed, rep, X, Y, kind, cum, vals, rate, shift):
    """Directed passage time from the origin to (X, Y), O(X) memory.

    Weights are regenerated on the fly from the counter-based stream, so the
    value agrees exactly with a DP over the materialized field.
    """
    row = np.empty(X + 1, np.float64)
    row[0] = 0.0
    for x in range(1, X + 1):
        row[x] = row[x - 1] + _edge_weight(seed, rep, x - 1, 0, 0, kind, cum, vals, rate, shift)
    for y in range(1, Y + 1):
        row[0] = row[0] + _edge_weight(seed, rep, 0, y - 1, 1, kind, cum, vals, rate, shift)
        for x in range(1, X + 1):
            a = row[x - 1] + _edge_weight(seed, rep, x - 1, y, 0, kind, cum, vals, rate, shift)
            b = row[x] + _edge_weight(seed, rep, x, y - 1, 1, kind, cum, vals, rate, shift)
            row[x] = a if a <= b else b
    return row[X]


@njit(cache=True, nogil=True)
def dp_full(east, north):
    """Full DP table with back-pointers on a materialized field.

    Ties pick the south predecessor, which makes reconstructed optimal paths
    run their east steps first.
    """
    W = east.shape[0]
    H = north.shape[1]
    T = np.empty((W + 1, H + 1), np.float64)
    parent = np.empty((W + 1, H + 1), np.int8)
    T[0, 0] = 0.0
    parent[0, 0] = PARENT_ORIGIN
    for x in range(1, W + 1):
        T[x, 0] = T[x - 1, 0] + east[x - 1, 0]
        parent[x, 0] = PARENT_WEST
    for y in range(1, H + 1):
        T[0, y] = T[0, y - 1] + north[0, y - 1]
        parent[0, y] = PARENT_SOUTH
        for x in range(1, W + 1):
            a = T[x - 1, y] + east[x - 1, y]
            b = T[x, y - 1] + north[x, y - 1]
            if a < b:
                T[x, y] = a
                parent[x, y] = PARENT_WEST
            else:
                T[x, y] = b
                parent[x, y] = PARENT_SOUTH
    return T, parent


@njit(cache=True, nogil=True)
def dp_tau_full(east, north):
    """Integer DP for tau weights 1{t(e) > 0} on a materialized field."""
    W = east.shape[0]
    H = north.shape[1]
    T = np.empty((W + 1, H + 1), np.int64)
    T[0, 0] = 0
    for x in range(1, W + 1):
        T[x, 0] = T[x - 1, 0] + (1 if east[x - 1, 0] > 0.0 else 0)
    for y in range(1, H + 1):
        T[0, y] = T[0, y - 1] + (1 if north[0, y - 1] > 0.0 else 0)
        for x in range(1, W + 1):
            a = T[x - 1, y] + (1 if east[x - 1, y] > 0.0 else 0)
            b = T[x, y - 1] + (1 if north[x, y - 1] > 0.0 else 0)
            T[x, y] = a if a <= b else b
    return T


@njit(cache=True, nogil=True)
def exp_quantile_array(u, rate, shift):
    """Elementwise shift - log1p(-u)/rate through libm, so array sampling is
    bit-identical to the scalar and fused-kernel paths (numpy's vectorized
    log1p picks a SIMD variant on large arrays that can differ by one ulp)."""
    out = np.empty(u.size, np.float64)
    flat = u.ravel()
    for i in range(flat.size):
        out[i] = shift - np.log1p(-flat[i]) / rate
    return out.reshape(u.shape)


@njit(cache=True, nogil=True)
def reachable_in_set(members):
    """Vertices NE-reachable from the origin without leaving the member set."""
    W = members.shape[0] - 1
    H = members.shape[1] - 1
    reach = np.zeros_like(members)
    reach[0, 0] = members[0, 0]
    for x in range(W + 1):
        for y in range(H + 1):
            if reach[x, y] or not members[x, y]:
                continue
            if x > 0 and reach[x - 1, y]:
                reach[x, y] = True
            elif y > 0 and reach[x, y - 1]:
                reach[x, y] = True
    return reach


@njit(cache=True, nogil=True)
def field_uniforms_rect(seed, rep, nx, ny, axis):
    """Uniform block for edges (x,y) with 0<=x<nx, 0<=y<ny of one axis."""
    out = np.empty((nx, ny), np.float64)
    for x in range(nx):
        for y in range(ny):
            out[x, y] = _uniform(seed, rep, 0, x, y, axis)
    return out


# ---------------------------------------------------------------------------
# Oriented percolation on the rotated lattice: sites (x, level), edges from
# (x, n) to (x+1, n+1) ("up-right", direction 0) and to (x-1, n+1)
# ("up-left", direction 1), each open with probability p.
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True, inline="always")
def _op_open(seed, rep, level, x, direction, p):
    return _uniform(seed, rep, 1, level, x, direction) < p


@njit(cache=True, nogil=True)
def right_edge_kernel(seed, rep, p, n, K):
    """Right-edge trace r_1..r_n for the half-line source.

    Occupancy is tracked on the moving window [r-K, r]; sites left of the
    window stand in for the infinite occupied half-line.
    """
    L = K + 1
    occ = np.ones(L, np.uint8)
    new = np.empty(L, np.uint8)
    base = -K
    r = 0
    out = np.empty(n, np.int64)
    for lev in range(1, n + 1):
        nbase = r + 1 - K
        hit = False
        found = 0
        for i in range(L):
            x = nbase + i
            xm = x - 1
            if xm < base:
                om = np.uint8(1)
            elif xm <= r:
                om = occ[xm - base]
            else:
                om = np.uint8(0)
            xp = x + 1
            if xp < base:
                op = np.uint8(1)
            elif xp <= r:
                op = occ[xp - base]
            else:
                op = np.uint8(0)
            v = np.uint8(0)
            if om == 1 and _op_open(seed, rep, lev - 1, xm, 0, p):
                v = np.uint8(1)
            elif op == 1 and _op_open(seed, rep, lev - 1, xp, 1, p):
                v = np.uint8(1)
            new[i] = v
            if v == 1:
                hit = True
                found = x
        occ, new = new, occ
        base = nbase
        r = found if hit else nbase - 1
        out[lev - 1] = r
    return out


@njit(cache=True, nogil=True)
def cluster_size_kernel(seed, rep, p, cap):
    """|C_0| for the front started from {0}; returns (size, exceeded)."""
    # every surviving level adds a vertex, so the front dies or the count
    # reaches the cap within cap levels; work per level is the front span
    width = 2 * cap + 3
    off = cap + 1
    occ = np.zeros(width, np.uint8)
    new = np.zeros(width, np.uint8)
    occ[off] = 1
    count = 1
    lo = 0
    hi = 0
    for lev in range(1, cap + 1):
        nlo = lo - 1
        nhi = hi + 1
        any_hit = False
        for x in range(nlo, nhi + 1):
            v = np.uint8(0)
            xm = x - 1
            if lo <= xm <= hi and occ[off + xm] == 1 and _op_open(seed, rep, lev - 1, xm, 0, p):
                v = np.uint8(1)
            if v == 0:
                xp = x + 1
                if lo <= xp <= hi and occ[off + xp] == 1 and _op_open(seed, rep, lev - 1, xp, 1, p):
                    v = np.uint8(1)
            new[off + x] = v
            if v == 1:
                count += 1
                any_hit = True
        if not any_hit:
            return count, False
        if count >= cap:
            return count, True
        occ, new = new, occ
        # shrink to the occupied span
        while nlo <= nhi and occ[off + nlo] == 0:
            nlo += 1
        while nhi >= nlo and occ[off + nhi] == 0:
            nhi -= 1
        lo = nlo
        hi = nhi
    return count, True
