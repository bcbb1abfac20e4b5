"""Region-of-interest extraction from a smoothed heat grid.

The procedure, in order:

1. keep cells with value >= tau * max(grid);
2. label 8-connected components of the kept mask;
3. agglomeratively merge the closest pair of components while their
   density-weighted centroid distance is <= merge_radius (ties go to the
   lexicographically smallest id pair), recomputing centroids as it goes;
4. assign each positional event to the region owning its grid cell;
5. drop regions with fewer than min_events assigned events;
6. histogram each region's events into time_bins by t_norm;
7. number regions by descending event count, ties by centroid x then y.

The merge radius is the user-facing "region size" control: a larger radius
produces fewer, bigger regions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .events import EVENT_TYPE_ORDER, PointSet
from .heatmap import HeatGrid, point_cells

__all__ = [
    "Roi",
    "RoiParams",
    "extract_rois",
    "roi_count_curve",
    "rois_to_json",
    "roi_to_dict",
    "build_label_grid",
]

DEFAULT_TAU = 0.25
DEFAULT_MIN_EVENTS = 5
DEFAULT_TIME_BINS = 5


@dataclass(frozen=True)
class RoiParams:
    """Extraction knobs; defaults suit a 64x64 grid of desk-scale logs."""

    tau: float = DEFAULT_TAU
    merge_radius: float = 0.0
    min_events: int = DEFAULT_MIN_EVENTS
    time_bins: int = DEFAULT_TIME_BINS

    def __post_init__(self) -> None:
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        if self.merge_radius < 0:
            raise ValueError(f"merge_radius must be >= 0, got {self.merge_radius}")
        if self.min_events < 0:
            raise ValueError(f"min_events must be >= 0, got {self.min_events}")
        if self.time_bins < 1:
            raise ValueError(f"time_bins must be >= 1, got {self.time_bins}")


@dataclass(frozen=True)
class Roi:
    """A dense-interaction region: its cells, shape, and assigned events."""

    roi_id: int
    cells: frozenset[tuple[int, int]]  # (column, row) grid indices
    centroid: tuple[float, float]  # normalized, density-weighted
    bbox: tuple[float, float, float, float]  # x0, y0, x1, y1 normalized
    event_count: int
    type_counts: dict[str, int]
    time_hist: tuple[int, ...]
    grid_width: int
    grid_height: int


@dataclass
class _Component:
    comp_id: int
    cells: list[tuple[int, int]] = field(default_factory=list)
    weight: float = 0.0
    wx: float = 0.0  # weight-scaled centroid sums
    wy: float = 0.0

    @property
    def centroid(self) -> tuple[float, float]:
        return self.wx / self.weight, self.wy / self.weight


_NEIGHBORS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _threshold_components(grid: HeatGrid, tau: float) -> list[_Component]:
    """Steps 1-2: threshold at tau * max and flood-fill 8-connected blobs."""
    peak = grid.max_value
    if peak <= 0.0:
        return []
    mask = grid.cells >= tau * peak
    h, w = mask.shape
    labels = np.full((h, w), -1, dtype=np.int32)
    comps: list[_Component] = []
    for j in range(h):
        row = mask[j]
        for i in range(w):
            if not row[i] or labels[j, i] != -1:
                continue
            comp = _Component(comp_id=len(comps))
            stack = [(i, j)]
            labels[j, i] = comp.comp_id
            while stack:
                ci, cj = stack.pop()
                value = float(grid.cells[cj, ci])
                comp.cells.append((ci, cj))
                comp.weight += value
                comp.wx += value * (ci + 0.5) / w
                comp.wy += value * (cj + 0.5) / h
                for dj, di in _NEIGHBORS_8:
                    ni, nj = ci + di, cj + dj
                    if 0 <= ni < w and 0 <= nj < h and mask[nj, ni] and labels[nj, ni] == -1:
                        labels[nj, ni] = comp.comp_id
                        stack.append((ni, nj))
            comps.append(comp)
    return comps


def _merge_components(comps: list[_Component], radius: float) -> list[_Component]:
    """Step 3: greedy closest-pair agglomeration up to the merge radius."""
    if radius <= 0 or len(comps) < 2:
        return comps
    active = {c.comp_id: c for c in comps}
    while len(active) > 1:
        ids = sorted(active)
        pts = np.array([active[k].centroid for k in ids])
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        n = len(ids)
        dist[np.tril_indices(n)] = np.inf
        best = dist.min()
        if best > radius:
            break
        # argmin over the row-major upper triangle lands on the smallest id
        # pair among exact ties.
        a, b = np.unravel_index(int(dist.argmin()), dist.shape)
        keep, drop = active[ids[a]], active[ids[b]]
        keep.cells.extend(drop.cells)
        keep.weight += drop.weight
        keep.wx += drop.wx
        keep.wy += drop.wy
        del active[ids[b]]
    return [active[k] for k in sorted(active)]


def build_label_grid(rois: Sequence[Roi], width: int, height: int) -> np.ndarray:
    """(height, width) array mapping each cell to its roi_id, -1 outside."""
    labels = np.full((height, width), -1, dtype=np.int32)
    for roi in rois:
        for i, j in roi.cells:
            labels[j, i] = roi.roi_id
    return labels


def _assign_events(comps: list[_Component], grid: HeatGrid, points: PointSet
                   ) -> np.ndarray:
    """Step 4: per-point component index (-1 when outside every component)."""
    labels = np.full((grid.height, grid.width), -1, dtype=np.int32)
    for idx, comp in enumerate(comps):
        for i, j in comp.cells:
            labels[j, i] = idx
    if len(points) == 0:
        return np.empty(0, dtype=np.int32)
    ix, iy = point_cells(points.xs, points.ys, grid.width, grid.height)
    return labels[iy, ix]


def extract_rois(grid: HeatGrid, points: PointSet, params: RoiParams) -> list[Roi]:
    """Extract regions of interest from a smoothed grid.

    ``points`` must be the positional events the grid was accumulated from
    (with t_norm filled); an all-zero grid yields no regions.
    """
    comps = _merge_components(_threshold_components(grid, params.tau), params.merge_radius)
    if not comps:
        return []
    assignment = _assign_events(comps, grid, points)

    rois: list[Roi] = []
    for idx, comp in enumerate(comps):
        point_idx = np.nonzero(assignment == idx)[0]
        count = len(point_idx)
        if count < params.min_events:
            continue
        type_counts: dict[str, int] = {}
        codes, code_counts = np.unique(points.type_codes[point_idx], return_counts=True)
        for code, c in zip(codes, code_counts):
            type_counts[EVENT_TYPE_ORDER[int(code)].value] = int(c)
        bins = np.minimum(
            (points.t_norm[point_idx] * params.time_bins).astype(np.int64),
            params.time_bins - 1,
        )
        hist = np.bincount(bins, minlength=params.time_bins)
        cols = np.array([c[0] for c in comp.cells])
        rows = np.array([c[1] for c in comp.cells])
        bbox = (
            float(cols.min()) / grid.width,
            float(rows.min()) / grid.height,
            float(cols.max() + 1) / grid.width,
            float(rows.max() + 1) / grid.height,
        )
        rois.append(
            Roi(
                roi_id=-1,
                cells=frozenset(comp.cells),
                centroid=comp.centroid,
                bbox=bbox,
                event_count=count,
                type_counts=type_counts,
                time_hist=tuple(int(v) for v in hist),
                grid_width=grid.width,
                grid_height=grid.height,
            )
        )

    rois.sort(key=lambda r: (-r.event_count, r.centroid[0], r.centroid[1]))
    return [
        Roi(
            roi_id=rank,
            cells=r.cells,
            centroid=r.centroid,
            bbox=r.bbox,
            event_count=r.event_count,
            type_counts=r.type_counts,
            time_hist=r.time_hist,
            grid_width=r.grid_width,
            grid_height=r.grid_height,
        )
        for rank, r in enumerate(rois)
    ]


def roi_count_curve(grid: HeatGrid, points: PointSet, tau: float, min_events: int,
                    radii: Sequence[float]) -> list[tuple[float, int]]:
    """Region count per merge radius; radii must be sorted ascending.

    Backs a size-slider preview: merging only ever reduces or preserves the
    number of regions, so the curve is non-increasing.
    """
    if list(radii) != sorted(radii):
        raise ValueError("radii must be sorted ascending")
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    base = _threshold_components(grid, tau)
    curve: list[tuple[float, int]] = []
    for r in radii:
        if r < 0:
            raise ValueError(f"merge radius must be >= 0, got {r}")
        comps = _merge_components([_copy_component(c) for c in base], r)
        if not comps:
            curve.append((float(r), 0))
            continue
        assignment = _assign_events(comps, grid, points)
        kept = 0
        for idx in range(len(comps)):
            if int((assignment == idx).sum()) >= min_events:
                kept += 1
        curve.append((float(r), kept))
    return curve


def _copy_component(comp: _Component) -> _Component:
    return _Component(comp.comp_id, list(comp.cells), comp.weight, comp.wx, comp.wy)


def roi_to_dict(roi: Roi) -> dict:
    return {
        "roi_id": roi.roi_id,
        "centroid": [roi.centroid[0], roi.centroid[1]],
        "bbox": list(roi.bbox),
        "event_count": roi.event_count,
        "type_counts": dict(sorted(roi.type_counts.items())),
        "time_hist": list(roi.time_hist),
    }


def rois_to_json(rois: Iterable[Roi]) -> str:
    return json.dumps([roi_to_dict(r) for r in rois], separators=(",", ":"))
