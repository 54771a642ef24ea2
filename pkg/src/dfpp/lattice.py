"""Grid window, realized NE edge fields, and polar-to-vertex mapping."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from . import distributions as dists
from .rng import DOMAIN_FPP, uniform_array

MAGIC = b"DFPPFLD1"


@dataclass(frozen=True)
class GridSpec:
    """First-quadrant window: vertices (x, y) with 0 <= x <= width, 0 <= y <= height."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must be at least 1x1")

    @property
    def vertex_count(self) -> int:
        return (self.width + 1) * (self.height + 1)

    @property
    def edge_count(self) -> int:
        return self.width * (self.height + 1) + self.height * (self.width + 1)


@dataclass(frozen=True)
class PolarPoint:
    r: float
    theta: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("radius must be >= 0")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError("theta must lie in [0, pi/2]")


def nearest_vertex(p: PolarPoint | tuple[float, float]) -> tuple[int, int]:
    """Lattice vertex closest to (r cos theta, r sin theta), clamped to the
    first quadrant; ties pick the lexicographically smaller (x, y)."""
    if isinstance(p, tuple):
        p = PolarPoint(*p)
    px = p.r * math.cos(p.theta)
    py = p.r * math.sin(p.theta)
    best = None
    for cx in (math.floor(px), math.ceil(px)):
        for cy in (math.floor(py), math.ceil(py)):
            x = max(0, int(cx))
            y = max(0, int(cy))
            key = ((x - px) ** 2 + (y - py) ** 2, x, y)
            if best is None or key < best:
                best = key
    return best[1], best[2]


@dataclass(frozen=True)
class EdgeField:
    """Realized passage times on the NE edges of a window.

    east[x, y] is the time of edge (x,y)->(x+1,y) for 0<=x<W, 0<=y<=H;
    north[x, y] is the time of (x,y)->(x,y+1) for 0<=x<=W, 0<=y<H.
    The field is a pure function of its provenance.
    """

    grid: GridSpec
    east: np.ndarray
    north: np.ndarray
    provenance: tuple[str, int, int]  # (dist_id, master_seed, replicate)

    def __post_init__(self):
        W, H = self.grid.width, self.grid.height
        if self.east.shape != (W, H + 1) or self.north.shape != (W + 1, H):
            raise ValueError("edge array shapes do not match the grid")


def edge_uniforms(grid: GridSpec, master_seed: int, replicate: int) -> tuple[np.ndarray, np.ndarray]:
    """The per-edge uniforms, keyed by coordinates so windows nest."""
    W, H = grid.width, grid.height
    ex = np.arange(W)[:, None]
    ey = np.arange(H + 1)[None, :]
    u_east = uniform_array(master_seed, replicate, DOMAIN_FPP, ex, ey, 0)
    nx = np.arange(W + 1)[:, None]
    ny = np.arange(H)[None, :]
    u_north = uniform_array(master_seed, replicate, DOMAIN_FPP, nx, ny, 1)
    return u_east, u_north


def generate_field(
    grid: GridSpec,
    dist: dists.EdgeTimeDistribution,
    master_seed: int,
    replicate: int,
) -> EdgeField:
    u_east, u_north = edge_uniforms(grid, master_seed, replicate)
    east = dists.sample_array(dist, u_east)
    north = dists.sample_array(dist, u_north)
    return EdgeField(
        grid=grid,
        east=east,
        north=north,
        provenance=(dists.dist_id(dist), master_seed, replicate),
    )


def dump_field(field: EdgeField, path) -> None:
    """Debug dump: header + row-major east then north, little-endian f64."""
    dist_id, seed, replicate = field.provenance
    payload = dist_id.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(
            struct.pack(
                "<IIqiI",
                field.grid.width,
                field.grid.height,
                seed,
                replicate,
                len(payload),
            )
        )
        fh.write(payload)
        fh.write(field.east.astype("<f8").tobytes(order="C"))
        fh.write(field.north.astype("<f8").tobytes(order="C"))


def load_field(path) -> EdgeField:
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValueError("not a field dump")
        W, H, seed, replicate, idlen = struct.unpack("<IIqiI", fh.read(24))
        dist_id = fh.read(idlen).decode("utf-8")
        east = np.frombuffer(fh.read(W * (H + 1) * 8), dtype="<f8").reshape(W, H + 1)
        north = np.frombuffer(fh.read((W + 1) * H * 8), dtype="<f8").reshape(W + 1, H)
    return EdgeField(
        grid=GridSpec(W, H),
        east=east.astype(np.float64),
        north=north.astype(np.float64),
        provenance=(dist_id, seed, replicate),
    )
