"""Oriented 2D grid graphs with separate horizontal and vertical edge sets.

Vertices are numbered row-major: vertex (r, c) has id r*width + c.
Every lattice edge appears exactly once, in one of the two directed
edge sets; orientation flags say which way each edge points.  Products
with the adjacency matrix are evaluated as neighbour-gather shifts, so
no dense n×n matrix is ever formed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DIRECTIONS = ("horizontal", "vertical")


@dataclass(frozen=True)
class GridGraph:
    """H×W lattice with per-edge direction flags.

    `horizontal_forward[r, c]` is True when the edge between (r, c) and
    (r, c+1) points left→right; `vertical_forward[r, c]` is True when
    the edge between (r, c) and (r+1, c) points top→down.
    """

    height: int
    width: int
    horizontal_forward: np.ndarray
    vertical_forward: np.ndarray

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError(f"grid dimensions must be >= 1, got {self.height}x{self.width}")
        hf = np.ascontiguousarray(self.horizontal_forward, dtype=bool)
        vf = np.ascontiguousarray(self.vertical_forward, dtype=bool)
        if hf.shape != (self.height, self.width - 1):
            raise ValueError(f"horizontal flags must have shape {(self.height, self.width - 1)}, got {hf.shape}")
        if vf.shape != (self.height - 1, self.width):
            raise ValueError(f"vertical flags must have shape {(self.height - 1, self.width)}, got {vf.shape}")
        hf.setflags(write=False)
        vf.setflags(write=False)
        object.__setattr__(self, "horizontal_forward", hf)
        object.__setattr__(self, "vertical_forward", vf)

    @property
    def num_vertices(self) -> int:
        return self.height * self.width

    def vertex_id(self, row: int, col: int) -> int:
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise ValueError(f"vertex ({row}, {col}) outside {self.height}x{self.width} grid")
        return row * self.width + col

    def edges(self, direction: str) -> np.ndarray:
        """Directed edges of one direction as an (E, 2) array of (i, j) ids."""
        _check_direction(direction)
        ids = np.arange(self.num_vertices).reshape(self.height, self.width)
        if direction == "horizontal":
            a = ids[:, :-1].ravel()
            b = ids[:, 1:].ravel()
            fwd = self.horizontal_forward.ravel()
        else:
            a = ids[:-1, :].ravel()
            b = ids[1:, :].ravel()
            fwd = self.vertical_forward.ravel()
        src = np.where(fwd, a, b)
        dst = np.where(fwd, b, a)
        return np.stack([src, dst], axis=1)

    def reverse(self) -> "GridGraph":
        """Same lattice with every edge orientation flipped."""
        return GridGraph(self.height, self.width,
                         ~self.horizontal_forward, ~self.vertical_forward)


@dataclass(frozen=True)
class PatchSupport:
    """Clipped k×k window around a center vertex.

    `cells[m]` is the vertex id at relative offset `offsets[m]`; both are
    ordered row-major over the template window, out-of-grid cells dropped.
    """

    center: int
    cells: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=int)
        offsets = np.ascontiguousarray(self.offsets, dtype=int)
        cells.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "offsets", offsets)


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def make_grid(height: int, width: int, orientation="canonical", seed=None) -> GridGraph:
    """Build an oriented grid graph.

    `orientation` is "canonical" (all edges left→right and top→down),
    "random" (per-edge coin flips from `seed`), or an explicit pair of
    flag arrays with shapes (H, W-1) and (H-1, W).
    """
    if height < 1 or width < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {height}x{width}")
    hshape = (height, width - 1)
    vshape = (height - 1, width)
    if isinstance(orientation, str):
        if orientation == "canonical":
            hf = np.ones(hshape, dtype=bool)
            vf = np.ones(vshape, dtype=bool)
        elif orientation == "random":
            rng = np.random.default_rng(seed)
            hf = rng.random(hshape) < 0.5
            vf = rng.random(vshape) < 0.5
        else:
            raise ValueError(f"unknown orientation spec {orientation!r}")
    else:
        hf, vf = orientation
        hf = np.asarray(hf, dtype=bool)
        vf = np.asarray(vf, dtype=bool)
    return GridGraph(height, width, hf, vf)


def patch_support(graph: GridGraph, vertex: int, side: int) -> PatchSupport:
    """The k×k window centered at `vertex`, clipped to the grid."""
    if side < 1 or side % 2 == 0:
        raise ValueError(f"patch side must be odd and positive, got {side}")
    if not (0 <= vertex < graph.num_vertices):
        raise ValueError(f"vertex {vertex} outside grid with {graph.num_vertices} vertices")
    radius = side // 2
    row, col = divmod(vertex, graph.width)
    offsets = []
    cells = []
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            r, c = row + dr, col + dc
            if 0 <= r < graph.height and 0 <= c < graph.width:
                offsets.append((dr, dc))
                cells.append(r * graph.width + c)
    return PatchSupport(center=vertex, cells=np.array(cells, dtype=int),
                        offsets=np.array(offsets, dtype=int))


def apply_adjacency(graph: GridGraph, direction: str, transpose: bool, X) -> np.ndarray:
    """Multiply X by one directed adjacency matrix (or its transpose).

    Row i of the result is the sum of X over the out-neighbours of i
    (in-neighbours when `transpose`), identical to the dense product
    A·X but evaluated as shifts over the lattice.
    """
    _check_direction(direction)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != graph.num_vertices:
        raise ValueError(f"X must have shape ({graph.num_vertices}, m), got {X.shape}")
    m = X.shape[1]
    grid = X.reshape(graph.height, graph.width, m)
    out = np.zeros_like(grid)
    if direction == "horizontal":
        fwd = graph.horizontal_forward
        if transpose:
            fwd = ~fwd
        mask = fwd[..., None]
        if graph.width > 1:
            out[:, :-1] += np.where(mask, grid[:, 1:], 0.0)
            out[:, 1:] += np.where(~mask, grid[:, :-1], 0.0)
    else:
        fwd = graph.vertical_forward
        if transpose:
            fwd = ~fwd
        mask = fwd[..., None]
        if graph.height > 1:
            out[:-1, :] += np.where(mask, grid[1:, :], 0.0)
            out[1:, :] += np.where(~mask, grid[:-1, :], 0.0)
    return out.reshape(graph.num_vertices, m)
