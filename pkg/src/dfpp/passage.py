"""Directed passage times, optimal paths, balls, and directed boundaries.

All quantities are exact on the window: a NE path to (x, y) never leaves
the box [0,x] x [0,y], so windowed values equal their infinite-lattice
counterparts for every vertex inside the window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .lattice import EdgeField, GridSpec, nearest_vertex

PARENT_ORIGIN = kernels.PARENT_ORIGIN
PARENT_WEST = kernels.PARENT_WEST
PARENT_SOUTH = kernels.PARENT_SOUTH


class BallTruncated(RuntimeError):
    """The ball reached the far window boundary, so it no longer represents
    the infinite-lattice ball."""


class RayTruncated(RuntimeError):
    """The shape reached the window boundary along the scanned ray."""


@dataclass(frozen=True)
class PassageField:
    """DP table of directed passage times from the origin, with back-pointers."""

    grid: GridSpec
    T: np.ndarray        # (W+1, H+1) float64
    parent: np.ndarray   # (W+1, H+1) int8


@dataclass(frozen=True)
class TauField:
    """Passage times for the thresholded weights tau(e) = 1{t(e) > 0}."""

    grid: GridSpec
    T: np.ndarray        # (W+1, H+1) int64


@dataclass(frozen=True)
class DirectedSet:
    """A vertex set containing the origin, as a bitmap over the window."""

    grid: GridSpec
    members: np.ndarray  # (W+1, H+1) bool
    threshold: int | None = None

    def __post_init__(self):
        if not self.members[0, 0]:
            raise ValueError("set must contain the origin")

    def vertices(self) -> list[tuple[int, int]]:
        xs, ys = np.nonzero(self.members)
        return list(zip(xs.tolist(), ys.tolist()))


def compute_passage(field: EdgeField) -> PassageField:
    T, parent = kernels.dp_full(field.east, field.north)
    return PassageField(grid=field.grid, T=T, parent=parent)


def compute_passage_rooted(field: EdgeField, root: tuple[int, int]) -> PassageField:
    """DP re-rooted at `root`: passage times from root to root + (dx, dy)."""
    rx, ry = root
    sub = EdgeField(
        grid=GridSpec(field.grid.width - rx, field.grid.height - ry),
        east=field.east[rx:, ry:],
        north=field.north[rx:, ry:],
        provenance=field.provenance,
    )
    return compute_passage(sub)


def compute_tau(field: EdgeField) -> TauField:
    return TauField(grid=field.grid, T=kernels.dp_tau_full(field.east, field.north))


def optimal_path(pf: PassageField, target: tuple[int, int]) -> list[tuple[int, int]]:
    """One optimal NE path from the origin to target, deterministically.

    Ties were resolved toward the south predecessor during the DP, so the
    returned path takes its east steps as early as possible.
    """
    x, y = target
    if not (0 <= x <= pf.grid.width and 0 <= y <= pf.grid.height):
        raise ValueError(f"target {target} outside grid")
    path = [(x, y)]
    while (x, y) != (0, 0):
        p = pf.parent[x, y]
        if p == PARENT_WEST:
            x -= 1
        elif p == PARENT_SOUTH:
            y -= 1
        else:
            raise AssertionError("corrupt parent table")
        path.append((x, y))
    path.reverse()
    return path


def path_weight(field: EdgeField, path: list[tuple[int, int]]) -> float:
    """Left-fold sum of edge weights along a NE path (same FP order as the DP)."""
    s = 0.0
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if (x1, y1) == (x0 + 1, y0):
            s = s + field.east[x0, y0]
        elif (x1, y1) == (x0, y0 + 1):
            s = s + field.north[x0, y0]
        else:
            raise ValueError("not a NE path")
    return s


def ball(tf: TauField, t: int) -> DirectedSet:
    """B_tau(t) = {v : T_tau(v) <= t}; errors out if it touches the far
    boundary, where the window stops representing the infinite lattice."""
    if t < 0:
        raise ValueError("t must be >= 0")
    members = tf.T <= t
    if members[-1, :].any() or members[:, -1].any():
        raise BallTruncated(f"ball at t={t} touches the window boundary")
    return DirectedSet(grid=tf.grid, members=members, threshold=t)


def boundaries(s: DirectedSet):
    """Inner vertex boundary, outer vertex boundary, and the NE edges between.

    A member is inner-boundary when one of its NE neighbors is a non-member;
    outer-boundary vertices are the non-members at the far end of those edges.
    """
    m = s.members
    W, H = s.grid.width, s.grid.height
    east_out = np.zeros_like(m)
    north_out = np.zeros_like(m)
    east_out[:W, :] = m[:W, :] & ~m[1:, :]
    # members on the window edge count their missing neighbor as outside
    east_out[W, :] = m[W, :]
    north_out[:, :H] = m[:, :H] & ~m[:, 1:]
    north_out[:, H] = m[:, H]
    inner_mask = east_out | north_out
    inner = set(zip(*(a.tolist() for a in np.nonzero(inner_mask))))
    outer: set[tuple[int, int]] = set()
    edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for (x, y) in inner:
        if x + 1 <= W and not m[x + 1, y]:
            outer.add((x + 1, y))
            edges.append(((x, y), (x + 1, y)))
        if y + 1 <= H and not m[x, y + 1]:
            outer.add((x, y + 1))
            edges.append(((x, y), (x, y + 1)))
    return inner, outer, edges


def is_directly_connected(s: DirectedSet) -> bool:
    """Every member is reachable from the origin by a NE path inside the set."""
    reach = kernels.reachable_in_set(s.members)
    return bool((reach == s.members).all())


def dump_ball(s: DirectedSet, path) -> None:
    """Ball export: one JSON header line, then one run-length line per row
    y, each run written start+length over the member bitmap."""
    import json

    W, H = s.grid.width, s.grid.height
    lines = [
        json.dumps(
            {"schema_version": "1", "width": W, "height": H, "threshold": s.threshold},
            sort_keys=True,
        )
    ]
    for y in range(H + 1):
        runs = []
        x = 0
        while x <= W:
            if s.members[x, y]:
                start = x
                while x <= W and s.members[x, y]:
                    x += 1
                runs.append(f"{start}+{x - start}")
            else:
                x += 1
        lines.append(",".join(runs))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_ball(path) -> DirectedSet:
    import json

    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        W, H = header["width"], header["height"]
        members = np.zeros((W + 1, H + 1), dtype=bool)
        for y in range(H + 1):
            line = fh.readline().strip()
            if not line:
                continue
            for run in line.split(","):
                start, length = run.split("+")
                members[int(start) : int(start) + int(length), y] = True
    return DirectedSet(grid=GridSpec(W, H), members=members, threshold=header["threshold"])


def shape_boundary_radius(
    pf: PassageField,
    t: float,
    theta: float,
    resolution: float = 1e-3,
) -> float:
    """Radial extent of the time-t shape along the ray at angle theta.

    Scans outward in unit steps for the first exit, then bisects the
    crossing down to `resolution`.  Raises RayTruncated when the shape is
    still alive at the window boundary along this ray.
    """
    inside = pf.T <= t

    def member(r: float) -> bool:
        x, y = nearest_vertex((r, theta))
        if x > pf.grid.width or y > pf.grid.height:
            raise RayTruncated(f"shape at t={t} leaves the window along theta={theta}")
        return bool(inside[x, y])

    if not member(0.0):
        raise ValueError("origin not inside the shape; t must be >= 0")
    r_in = 0.0
    r_out = None
    r = 1.0
    rmax = float(np.hypot(pf.grid.width, pf.grid.height)) + 1.0
    while r <= rmax:
        if member(r):
            r_in = r
        else:
            r_out = r
            break
        r += 1.0
    if r_out is None:
        raise RayTruncated(f"shape at t={t} reaches the window limit along theta={theta}")
    while r_out - r_in > resolution:
        mid = 0.5 * (r_in + r_out)
        if member(mid):
            r_in = mid
        else:
            r_out = mid
    return 0.5 * (r_in + r_out)
