"""Directed cell growth and its vertex-clock passage-time counterpart.

The cell process attaches one unit square per step, chosen with probability
proportional to the exposed north/east boundary edges.  The companion
simulator grows the set of vertices reached by directed passage times with
one exponential clock per vertex; the two are cross-validated statistically.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lattice import GridSpec
from .rng import DOMAIN_GROWTH, uniform_array, uniform_scalar

Cell = tuple[int, int]
Edge = tuple[Cell, int]  # (cell, direction): 0 = east side, 1 = north side


class WindowExceeded(RuntimeError):
    """Growth needed a vertex outside the clock window."""


@dataclass(frozen=True)
class GrowthStream:
    """One uniform per growth step, keyed by the step index."""

    seed: int
    replicate: int

    def uniform(self, step: int) -> float:
        return uniform_scalar(self.seed, self.replicate, DOMAIN_GROWTH, step, 0, 0)


def _outside(edge: Edge) -> Cell:
    (i, j), d = edge
    return (i + 1, j) if d == 0 else (i, j + 1)


@dataclass
class GrowthState:
    """Occupied cells plus the exposed NE boundary edges, kept incrementally."""

    cells: set = field(default_factory=lambda: {(0, 0)})
    ne_boundary: list = field(default_factory=lambda: [((0, 0), 0), ((0, 0), 1)])
    _pos: dict = field(default_factory=lambda: {((0, 0), 0): 0, ((0, 0), 1): 1})

    @property
    def step(self) -> int:
        return len(self.cells)

    def copy(self) -> "GrowthState":
        return GrowthState(
            cells=set(self.cells),
            ne_boundary=list(self.ne_boundary),
            _pos=dict(self._pos),
        )

    def _remove_edge(self, edge: Edge) -> None:
        idx = self._pos.pop(edge)
        last = self.ne_boundary[-1]
        if last != edge:
            self.ne_boundary[idx] = last
            self._pos[last] = idx
        self.ne_boundary.pop()

    def _add_edge(self, edge: Edge) -> None:
        self._pos[edge] = len(self.ne_boundary)
        self.ne_boundary.append(edge)

    def occupy(self, new: Cell) -> None:
        if new in self.cells:
            raise ValueError(f"cell {new} already occupied")
        self.cells.add(new)
        i, j = new
        for feeder in (((i - 1, j), 0), ((i, j - 1), 1)):
            if feeder in self._pos:
                self._remove_edge(feeder)
        for mine in ((new, 0), (new, 1)):
            if _outside(mine) not in self.cells:
                self._add_edge(mine)


def boundary_from_scratch(cells: set) -> list[Edge]:
    """Recompute the exposed NE boundary edges of an occupied set, sorted."""
    out = []
    for c in cells:
        for d in (0, 1):
            if _outside((c, d)) not in cells:
                out.append((c, d))
    return sorted(out)


def _advance(state: GrowthState, stream: GrowthStream) -> Cell:
    """Pick one exposed NE edge uniformly and occupy its outside cell."""
    u = stream.uniform(state.step)
    idx = min(int(u * len(state.ne_boundary)), len(state.ne_boundary) - 1)
    cell = _outside(state.ne_boundary[idx])
    state.occupy(cell)
    return cell


def growth_step(state: GrowthState, stream: GrowthStream) -> GrowthState:
    """Attach one cell: pick one exposed NE edge uniformly (a cell reachable
    through two edges carries twice the weight) and occupy its outside cell."""
    nxt = state.copy()
    _advance(nxt, stream)
    return nxt


def run_growth(n: int, stream: GrowthStream) -> GrowthState:
    """Grow from the origin cell to n cells (in place, same law as growth_step)."""
    if n < 1:
        raise ValueError("need n >= 1")
    state = GrowthState()
    while state.step < n:
        _advance(state, stream)
    return state


def trajectory(n: int, stream: GrowthStream) -> list[tuple[int, int, int]]:
    """(step, x, y) triples in attachment order, starting at (1, 0, 0)."""
    state = GrowthState()
    out = [(1, 0, 0)]
    while state.step < n:
        cell = _advance(state, stream)
        out.append((state.step, cell[0], cell[1]))
    return out


# ---------------------------------------------------------------------------
# Vertex-clock passage-time growth.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexClockField:
    """One exponential(1) clock per vertex of the window."""

    grid: GridSpec
    clock: np.ndarray  # (W+1, H+1), all > 0


def make_clock_field(grid: GridSpec, seed: int, replicate: int) -> VertexClockField:
    from .kernels import exp_quantile_array

    xs = np.arange(grid.width + 1)[:, None]
    ys = np.arange(grid.height + 1)[None, :]
    u = uniform_array(seed, replicate, DOMAIN_GROWTH, xs, ys, 1)
    return VertexClockField(grid=grid, clock=exp_quantile_array(u, 1.0, 0.0))


def fpp_growth(clock_field: VertexClockField, n: int) -> tuple[list[Cell], float]:
    """First n vertices of the directed vertex-weight growth, and the time
    t_n at which the n-th vertex is reached.

    The origin's own clock is excluded (t_1 = 0).  Raises WindowExceeded as
    soon as the frontier needs a vertex outside the clock window.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    W, H = clock_field.grid.width, clock_field.grid.height
    clock = clock_field.clock
    occupied: list[Cell] = [(0, 0)]
    if n == 1:
        return occupied, 0.0
    taken = {(0, 0)}
    seen = set()
    heap: list[tuple[float, Cell]] = []

    def expose(v: Cell, t: float) -> None:
        for nb in ((v[0] + 1, v[1]), (v[0], v[1] + 1)):
            if nb in taken or nb in seen:
                continue
            if nb[0] > W or nb[1] > H:
                raise WindowExceeded(f"growth frontier left the {W}x{H} window")
            seen.add(nb)
            heapq.heappush(heap, (t + clock[nb], nb))

    expose((0, 0), 0.0)
    t_n = 0.0
    while len(occupied) < n:
        t, v = heapq.heappop(heap)
        occupied.append(v)
        taken.add(v)
        t_n = t
        expose(v, t)
    return occupied, t_n


# ---------------------------------------------------------------------------
# Exact small-n laws and occupancy statistics.
# ---------------------------------------------------------------------------


def enumerate_chain_law(n: int) -> dict[frozenset, Fraction]:
    """Exact shape distribution at size n by enumerating every edge choice."""
    law: dict[frozenset, Fraction] = {}

    def rec(cells: frozenset, prob: Fraction) -> None:
        if len(cells) == n:
            law[cells] = law.get(cells, Fraction(0)) + prob
            return
        edges = boundary_from_scratch(set(cells))
        w = Fraction(1, len(edges))
        for e in edges:
            rec(cells | {_outside(e)}, prob * w)

    rec(frozenset({(0, 0)}), Fraction(1))
    return law


def enumerate_race_law(n: int) -> dict[frozenset, Fraction]:
    """Exact shape distribution at size n from independent unit-rate
    exponential races on the boundary edges: by memorylessness the next
    cell wins with probability (its in-edge count) / (total edges)."""
    law: dict[frozenset, Fraction] = {}

    def rec(cells: frozenset, prob: Fraction) -> None:
        if len(cells) == n:
            law[cells] = law.get(cells, Fraction(0)) + prob
            return
        edges = boundary_from_scratch(set(cells))
        total = len(edges)
        weights: dict[Cell, int] = {}
        for e in edges:
            c = _outside(e)
            weights[c] = weights.get(c, 0) + 1
        for cell, w in sorted(weights.items()):
            rec(cells | {cell}, prob * Fraction(w, total))

    rec(frozenset({(0, 0)}), Fraction(1))
    return law


def chain_occupancy(n: int, replicates: int, seed: int) -> dict[Cell, float]:
    """Cell-occupancy histogram of the edge-weighted chain, normalized to 1."""
    counts: dict[Cell, int] = {}
    for rep in range(replicates):
        state = run_growth(n, GrowthStream(seed=seed, replicate=rep))
        for c in state.cells:
            counts[c] = counts.get(c, 0) + 1
    total = n * replicates
    return {c: v / total for c, v in counts.items()}


def fpp_occupancy(n: int, replicates: int, seed: int, window: int | None = None) -> dict[Cell, float]:
    """Vertex-occupancy histogram of the clock growth, normalized to 1."""
    w = window if window is not None else max(4, int(3 * math.sqrt(n)) + 2)
    grid = GridSpec(w, w)
    counts: dict[Cell, int] = {}
    for rep in range(replicates):
        occupied, _ = fpp_growth(make_clock_field(grid, seed, rep), n)
        for c in occupied:
            counts[c] = counts.get(c, 0) + 1
    total = n * replicates
    return {c: v / total for c, v in counts.items()}


def scaled_occupancy(n: int, replicates: int, seed: int, bin_width: float = 0.25) -> dict[Cell, float]:
    """Histogram of cells with coordinates scaled by 1/sqrt(n), binned."""
    counts: dict[Cell, int] = {}
    s = math.sqrt(n)
    for rep in range(replicates):
        state = run_growth(n, GrowthStream(seed=seed, replicate=rep))
        for (i, j) in state.cells:
            key = (int(i / s / bin_width), int(j / s / bin_width))
            counts[key] = counts.get(key, 0) + 1
    total = n * replicates
    return {c: v / total for c, v in counts.items()}


def tv_distance(h1: dict, h2: dict) -> float:
    keys = set(h1) | set(h2)
    return 0.5 * sum(abs(h1.get(k, 0.0) - h2.get(k, 0.0)) for k in keys)
