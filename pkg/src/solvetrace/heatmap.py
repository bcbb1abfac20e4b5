"""Heat grids: accumulate positional events on a W x H grid, Gaussian-smooth.

Grid cell (i, j) covers x in [i/W, (i+1)/W) and y in [j/H, (j+1)/H); points
at exactly 1.0 fall in the last cell.  Cells are stored as a (H, W) float
array indexed [j, i], so the flat row-major export is j*W + i.

Smoothing uses a truncated Gaussian (radius ceil(3*sigma)) with the kernel
renormalized around each source cell so that mass leaving the grid at the
boundary is redistributed, keeping total_mass exactly conserved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.ndimage import convolve1d

from .events import POSITIONAL_TYPES, PointSet, RawEvent

__all__ = [
    "HeatGrid",
    "accumulate_grid",
    "smooth_grid",
    "normalize_grid",
    "grid_to_json",
    "grid_to_pgm",
    "point_cells",
    "mass_near_polyline",
]

DEFAULT_RESOLUTION = 64
DEFAULT_SIGMA = 1.5


@dataclass(frozen=True)
class HeatGrid:
    """Non-negative intensity grid over the normalized canvas."""

    width: int
    height: int
    cells: np.ndarray  # shape (height, width), float64
    sigma: float = 0.0  # smoothing bandwidth in cell units, 0 = unsmoothed

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.width}x{self.height}")
        if self.cells.shape != (self.height, self.width):
            raise ValueError(
                f"cells shape {self.cells.shape} != (height={self.height}, width={self.width})"
            )
        self.cells.setflags(write=False)

    @property
    def total_mass(self) -> float:
        return float(self.cells.sum())

    @property
    def max_value(self) -> float:
        return float(self.cells.max())


def point_cells(xs: np.ndarray, ys: np.ndarray, width: int, height: int
                ) -> tuple[np.ndarray, np.ndarray]:
    """Map normalized coordinates to (column, row) cell indices."""
    ix = np.minimum((xs * width).astype(np.int64), width - 1)
    iy = np.minimum((ys * height).astype(np.int64), height - 1)
    return ix, iy


def _positional_arrays(events: Union[Sequence[RawEvent], PointSet]
                       ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Extract xs, ys, t_ms, session boundary starts from either input form."""
    if isinstance(events, PointSet):
        return events.xs, events.ys, events.t_ms, events.session_starts
    xs, ys, tm = [], [], []
    session_order: dict[str, list[int]] = {}
    for ev in events:
        if ev.event_type in POSITIONAL_TYPES:
            session_order.setdefault(ev.session_id, []).append(len(xs))
            xs.append(ev.x)
            ys.append(ev.y)
            tm.append(ev.t_ms)
    # Synthesize per-session grouping for dwell weighting; order of sessions
    # does not matter, only which points share one.
    starts = [0]
    perm: list[int] = []
    for idxs in session_order.values():
        perm.extend(idxs)
        starts.append(len(perm))
    xs_a = np.asarray(xs, dtype=np.float64)
    ys_a = np.asarray(ys, dtype=np.float64)
    tm_a = np.asarray(tm, dtype=np.int64)
    p = np.asarray(perm, dtype=np.int64)
    if len(p):
        xs_a, ys_a, tm_a = xs_a[p], ys_a[p], tm_a[p]
    return xs_a, ys_a, tm_a, np.asarray(starts, dtype=np.int64)


def accumulate_grid(events: Union[Sequence[RawEvent], PointSet], width: int, height: int,
                    dwell_weight: bool = False) -> HeatGrid:
    """Bin positional events into a fresh unsmoothed grid.

    Each positional event adds 1 to its cell; non-positional events are
    ignored.  With ``dwell_weight`` each sample instead adds the time in ms
    until the next event of the same session (0 for the session's last
    sample), weighting hover over flight.
    """
    if width < 1 or height < 1:
        raise ValueError(f"grid must be at least 1x1, got {width}x{height}")
    xs, ys, t_ms, starts = _positional_arrays(events)
    cells = np.zeros((height, width), dtype=np.float64)
    if len(xs):
        ix, iy = point_cells(xs, ys, width, height)
        if dwell_weight:
            weights = np.zeros(len(xs), dtype=np.float64)
            for s, e in zip(starts[:-1], starts[1:]):
                if e - s >= 2:
                    weights[s : e - 1] = np.diff(t_ms[s:e]).astype(np.float64)
            np.add.at(cells, (iy, ix), weights)
        else:
            np.add.at(cells, (iy, ix), 1.0)
    return HeatGrid(width=width, height=height, cells=cells, sigma=0.0)


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    return kernel / kernel.sum()


def smooth_grid(grid: HeatGrid, sigma: float) -> HeatGrid:
    """Convolve with a truncated, boundary-renormalized Gaussian.

    The kernel is separable; dividing by the in-bounds kernel weight of each
    source cell before convolving makes every cell spread exactly its own
    mass, so total_mass is conserved to float precision for any sigma.
    sigma = 0 returns the input unchanged.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return grid
    kernel = _gaussian_kernel(sigma)
    weight_x = convolve1d(np.ones(grid.width), kernel, mode="constant", cval=0.0)
    weight_y = convolve1d(np.ones(grid.height), kernel, mode="constant", cval=0.0)
    seeded = grid.cells / np.outer(weight_y, weight_x)
    out = convolve1d(seeded, kernel, axis=1, mode="constant", cval=0.0)
    out = convolve1d(out, kernel, axis=0, mode="constant", cval=0.0)
    return HeatGrid(width=grid.width, height=grid.height, cells=out, sigma=sigma)


def normalize_grid(grid: HeatGrid) -> HeatGrid:
    """Rescale so the maximum cell is 1; an all-zero grid passes through."""
    peak = grid.max_value
    if peak == 0.0:
        return grid
    return HeatGrid(
        width=grid.width, height=grid.height, cells=grid.cells / peak, sigma=grid.sigma
    )


def grid_to_json(grid: HeatGrid) -> str:
    """JSON export: width, height, sigma, flat row-major cells."""
    return json.dumps(
        {
            "width": grid.width,
            "height": grid.height,
            "sigma": grid.sigma,
            "cells": grid.cells.ravel().tolist(),
        },
        separators=(",", ":"),
    )


def grid_to_pgm(grid: HeatGrid) -> bytes:
    """Binary P5 graymap of the max-normalized grid, value = round(255*cell)."""
    normalized = normalize_grid(grid)
    pixels = np.rint(normalized.cells * 255.0).astype(np.uint8)
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + pixels.tobytes()


def mass_near_polyline(grid: HeatGrid, points: Sequence[tuple[float, float]],
                       tol: float) -> float:
    """Total mass of cells whose centers lie within ``tol`` of the polyline.

    Distance is the minimum over segments of the point-to-segment distance
    in normalized coordinates; a single point degenerates to point distance.
    """
    if not points:
        raise ValueError("polyline needs at least one point")
    cx = (np.arange(grid.width) + 0.5) / grid.width
    cy = (np.arange(grid.height) + 0.5) / grid.height
    gx, gy = np.meshgrid(cx, cy)  # shape (height, width)
    best = np.full(gx.shape, np.inf)
    pts = list(points)
    if len(pts) == 1:
        pts = pts * 2
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        dx, dy = x1 - x0, y1 - y0
        seg_len2 = dx * dx + dy * dy
        if seg_len2 == 0.0:
            dist = np.hypot(gx - x0, gy - y0)
        else:
            t = np.clip(((gx - x0) * dx + (gy - y0) * dy) / seg_len2, 0.0, 1.0)
            dist = np.hypot(gx - (x0 + t * dx), gy - (y0 + t * dy))
        np.minimum(best, dist, out=best)
    return float(grid.cells[best <= tol].sum())
