"""Directed transition maps over regions of interest, per cohort.

A session's positional events are mapped to regions, consecutive repeats
are collapsed into runs, and each adjacent pair of distinct runs becomes
one transition whose time is the normalized timestamp of entering the
destination run.  Aggregated over a cohort this gives the arc structure of
the region graph: edge count is arc thickness, mean entry time is arc
color.

The ordering score condenses a cohort's map into one number: the rank
correlation between each region's horizontal position and its mean
first-visit time.  +1 means regions are first visited strictly left to
right, -1 strictly right to left.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analytics import _pearson_unchecked, average_ranks
from .events import CohortSpec, Session, collect_points, normalized_outcome
from .heatmap import point_cells
from .roi import Roi, build_label_grid, roi_to_dict

__all__ = [
    "TransitionEdge",
    "TransitionMap",
    "CohortDiff",
    "build_transition_map",
    "ordering_score",
    "compare_cohorts",
    "transition_map_to_dict",
    "transition_map_to_json",
    "transition_map_to_dot",
]

DEFAULT_MIN_EDGE_COUNT = 2


def _stable_mean(values: list[float]) -> float:
    return float(np.sort(np.asarray(values)).sum()) / len(values)


@dataclass(frozen=True)
class TransitionEdge:
    from_roi: int
    to_roi: int
    count: int
    mean_time: float  # mean t_norm at entry into the destination run


@dataclass(frozen=True)
class TransitionMap:
    cohort: CohortSpec
    rois: tuple[Roi, ...]
    edges: tuple[TransitionEdge, ...]
    session_count: int
    roi_first_visit: dict[int, float]  # roi_id -> mean first-arrival t_norm


@dataclass(frozen=True)
class CohortDiff:
    """Per-region first-visit deltas plus both cohorts' ordering scores."""

    shared_roi_ids: tuple[int, ...]
    first_visit_delta: dict[int, float]  # a minus b, over regions visited in both
    unvisited: dict[int, str]  # roi_id -> "a" | "b" | "both"
    ordering_a: Optional[float]
    ordering_b: Optional[float]
    sign_relationship: str  # "opposite" | "same" | "zero" | "undefined"


def build_transition_map(sessions: Sequence[Session], rois: Sequence[Roi],
                         cohort: CohortSpec, min_edge_count: int = DEFAULT_MIN_EDGE_COUNT,
                         max_score: float = 1.0) -> TransitionMap:
    """Aggregate region transitions over the cohort's sessions.

    The cohort filter compares each session's outcome normalized by
    ``max_score``; sessions without an outcome only qualify under ``all``.
    Edges seen fewer than ``min_edge_count`` times are dropped.
    """
    if min_edge_count < 0:
        raise ValueError(f"min_edge_count must be >= 0, got {min_edge_count}")
    qualifying = [s for s in sessions if cohort.matches(normalized_outcome(s, max_score))]

    # Aggregate into lists and sum them sorted, so results are identical
    # regardless of session list order (float addition is not associative).
    edge_times: dict[tuple[int, int], list[float]] = {}
    visit_times: dict[int, list[float]] = {}

    if rois and qualifying:
        labels = build_label_grid(rois, rois[0].grid_width, rois[0].grid_height)
        points = collect_points(qualifying)
        if len(points):
            ix, iy = point_cells(points.xs, points.ys, rois[0].grid_width, rois[0].grid_height)
            roi_ids = labels[iy, ix]
        else:
            roi_ids = np.empty(0, dtype=np.int32)
        starts = points.session_starts
        for k in range(points.n_sessions):
            seq = roi_ids[starts[k] : starts[k + 1]]
            times = points.t_norm[starts[k] : starts[k + 1]]
            inside = seq >= 0
            seq = seq[inside]
            times = times[inside]
            if len(seq) == 0:
                continue
            run_start = np.concatenate(([0], np.nonzero(np.diff(seq) != 0)[0] + 1))
            run_ids = seq[run_start]
            run_times = times[run_start]
            seen: set[int] = set()
            for rid, t in zip(run_ids, run_times):
                rid = int(rid)
                if rid not in seen:
                    seen.add(rid)
                    visit_times.setdefault(rid, []).append(float(t))
            for a, b, t in zip(run_ids[:-1], run_ids[1:], run_times[1:]):
                edge_times.setdefault((int(a), int(b)), []).append(float(t))

    edges = tuple(
        TransitionEdge(a, b, len(times), _stable_mean(times))
        for (a, b), times in sorted(edge_times.items())
        if len(times) >= min_edge_count
    )
    first_visit = {rid: _stable_mean(visit_times[rid]) for rid in sorted(visit_times)}
    return TransitionMap(
        cohort=cohort,
        rois=tuple(rois),
        edges=edges,
        session_count=len(qualifying),
        roi_first_visit=first_visit,
    )


def ordering_score(tmap: TransitionMap) -> float:
    """Rank correlation of region centroid x versus mean first-visit time.

    +1 when regions are first reached strictly left to right, -1 for the
    reverse.  Undefined (ValueError) with fewer than 2 visited regions or
    when either quantity has no variation.
    """
    by_id = {r.roi_id: r for r in tmap.rois}
    visited = [rid for rid in sorted(tmap.roi_first_visit) if rid in by_id]
    if len(visited) < 2:
        raise ValueError(f"ordering score needs >= 2 visited regions, got {len(visited)}")
    xs = np.array([by_id[rid].centroid[0] for rid in visited])
    times = np.array([tmap.roi_first_visit[rid] for rid in visited])
    return _pearson_unchecked(average_ranks(xs), average_ranks(times))


def compare_cohorts(a: TransitionMap, b: TransitionMap) -> CohortDiff:
    """Contrast two cohorts' maps built over the same region list."""
    ids_a = {r.roi_id for r in a.rois}
    ids_b = {r.roi_id for r in b.rois}
    shared = sorted(ids_a & ids_b)
    if not shared:
        raise ValueError("cohort maps share no regions; extract ROIs once for both")

    delta: dict[int, float] = {}
    unvisited: dict[int, str] = {}
    for rid in shared:
        in_a = rid in a.roi_first_visit
        in_b = rid in b.roi_first_visit
        if in_a and in_b:
            delta[rid] = a.roi_first_visit[rid] - b.roi_first_visit[rid]
        elif in_a:
            unvisited[rid] = "b"
        elif in_b:
            unvisited[rid] = "a"
        else:
            unvisited[rid] = "both"

    score_a = _try_ordering(a)
    score_b = _try_ordering(b)
    if score_a is None or score_b is None:
        relation = "undefined"
    elif score_a * score_b < 0:
        relation = "opposite"
    elif score_a == 0 or score_b == 0:
        relation = "zero"
    else:
        relation = "same"
    return CohortDiff(
        shared_roi_ids=tuple(shared),
        first_visit_delta=delta,
        unvisited=unvisited,
        ordering_a=score_a,
        ordering_b=score_b,
        sign_relationship=relation,
    )


def _try_ordering(tmap: TransitionMap) -> Optional[float]:
    try:
        return ordering_score(tmap)
    except ValueError:
        return None


def transition_map_to_dict(tmap: TransitionMap, include_roi_details: bool = False) -> dict:
    score = _try_ordering(tmap)
    out = {
        "cohort": tmap.cohort.label(),
        "session_count": tmap.session_count,
        "rois": [r.roi_id for r in tmap.rois],
        "edges": [
            {"from": e.from_roi, "to": e.to_roi, "count": e.count, "mean_time": e.mean_time}
            for e in tmap.edges
        ],
        "roi_first_visit": {str(rid): t for rid, t in tmap.roi_first_visit.items()},
        "ordering_score": score,
    }
    if score is None:
        out["ordering_score_reason"] = "needs at least 2 visited regions with varying position and time"
    if include_roi_details:
        out["roi_details"] = [roi_to_dict(r) for r in tmap.rois]
    return out


def transition_map_to_json(tmap: TransitionMap, include_roi_details: bool = False) -> str:
    return json.dumps(transition_map_to_dict(tmap, include_roi_details), separators=(",", ":"))


def transition_map_to_dot(tmap: TransitionMap) -> str:
    """Graphviz digraph: nodes carry event counts, edges carry count and time."""
    lines = ["digraph transitions {"]
    for r in tmap.rois:
        lines.append(
            f'  r{r.roi_id} [label="roi {r.roi_id}\\n{r.event_count} events", '
            f'pos="{r.centroid[0]:.4f},{r.centroid[1]:.4f}!"];'
        )
    for e in tmap.edges:
        lines.append(
            f'  r{e.from_roi} -> r{e.to_roi} [weight={e.count}, '
            f'label="{e.count} @ t={e.mean_time:.3f}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
