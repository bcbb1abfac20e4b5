"""HTTP JSON API over an immutable dataset snapshot.

Every GET endpoint is a pure function of (snapshot, query parameters), so
repeated calls return byte-identical bodies.  A reload (startup or POST
/api/ingest) swaps the whole snapshot atomically; in-flight requests keep
the snapshot they started with.

Errors are uniform: ``{"error": {"code": ..., "message": ...}}`` with
status 400 (invalid argument), 404 (unknown question), 409 (failed
precondition), or 503 (no dataset loaded).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .analytics import compute_question_stats, difficulty_report, report_to_dict
from .events import (
    CohortSpec,
    EventType,
    QuestionMeta,
    Session,
    collect_points,
    group_sessions,
    normalized_outcome,
    parse_event_log,
)
from .heatmap import DEFAULT_RESOLUTION, DEFAULT_SIGMA, accumulate_grid, smooth_grid
from .roi import RoiParams, extract_rois
from .transition import build_transition_map, transition_map_to_dict

__all__ = ["ApiError", "DatasetSnapshot", "ServiceState", "create_app", "load_snapshot"]

MIN_RESOLUTION = 8
MAX_RESOLUTION = 512


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _invalid(message: str) -> ApiError:
    return ApiError(400, "invalid_argument", message)


@dataclass(frozen=True)
class DatasetSnapshot:
    """Immutable published view of one ingested dataset."""

    snapshot_id: int
    sessions: tuple[Session, ...]
    metas: tuple[QuestionMeta, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_meta_by_id", {m.question_id: m for m in self.metas})
        by_q: dict[str, list[Session]] = {}
        for s in self.sessions:
            by_q.setdefault(s.question_id, []).append(s)
        object.__setattr__(self, "_sessions_by_question", by_q)

    def meta(self, question_id: str) -> Optional[QuestionMeta]:
        return self._meta_by_id.get(question_id)  # type: ignore[attr-defined]

    def question_sessions(self, question_id: str) -> list[Session]:
        return self._sessions_by_question.get(question_id, [])  # type: ignore[attr-defined]


def _synthesize_metas(sessions: Sequence[Session],
                      metas: Sequence[QuestionMeta]) -> tuple[QuestionMeta, ...]:
    """Fill in metadata for questions seen only in the event stream.

    Unknown questions get difficulty 1 and max_score = highest submitted
    score observed (1.0 if none), so cohort filters stay usable.
    """
    known = {m.question_id for m in metas}
    max_seen: dict[str, float] = {}
    order: list[str] = []
    for s in sessions:
        if s.question_id in known:
            continue
        if s.question_id not in max_seen:
            max_seen[s.question_id] = 0.0
            order.append(s.question_id)
        for ev in s.events:
            if ev.event_type is EventType.SUBMIT and ev.score is not None:
                max_seen[s.question_id] = max(max_seen[s.question_id], ev.score)
    extra = tuple(
        QuestionMeta(question_id=qid, difficulty_label=1,
                     max_score=max_seen[qid] if max_seen[qid] > 0 else 1.0)
        for qid in order
    )
    return tuple(metas) + extra


class ServiceState:
    """Holds the current snapshot; replace() publishes a new one atomically."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._snapshot: Optional[DatasetSnapshot] = None
        self._next_id = 1

    @property
    def snapshot(self) -> Optional[DatasetSnapshot]:
        return self._snapshot

    def replace(self, sessions: Sequence[Session], metas: Sequence[QuestionMeta]
                ) -> DatasetSnapshot:
        with self._lock:
            snap = DatasetSnapshot(
                snapshot_id=self._next_id,
                sessions=tuple(sessions),
                metas=_synthesize_metas(sessions, metas),
            )
            self._next_id += 1
            self._snapshot = snap
            return snap


def load_snapshot(state: ServiceState, events_path: Path,
                  meta_path: Optional[Path] = None,
                  canvas: Optional[tuple[float, float]] = None) -> DatasetSnapshot:
    """Parse log + metadata files and publish them as the current snapshot."""
    from .events import parse_question_meta

    with open(events_path, "r", encoding="utf-8") as fh:
        result = parse_event_log(fh, canvas=canvas)
    metas: list[QuestionMeta] = []
    if meta_path is not None:
        metas = parse_question_meta(Path(meta_path).read_text(encoding="utf-8"))
    return state.replace(group_sessions(result.events), metas)


def _parse_int(raw: str, name: str, lo: Optional[int] = None,
               hi: Optional[int] = None) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise _invalid(f"{name} must be an integer, got {raw!r}") from None
    if lo is not None and value < lo:
        raise _invalid(f"{name} must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        raise _invalid(f"{name} must be <= {hi}, got {value}")
    return value


def _parse_float(raw: str, name: str, lo: Optional[float] = None) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise _invalid(f"{name} must be a number, got {raw!r}") from None
    if lo is not None and value < lo:
        raise _invalid(f"{name} must be >= {lo}, got {value}")
    return value


def _parse_cohort(raw: str) -> CohortSpec:
    try:
        return CohortSpec.parse(raw)
    except ValueError as exc:
        raise _invalid(str(exc)) from None


def _json_response(payload: object, status: int = 200) -> Response:
    return Response(
        content=json.dumps(payload, separators=(",", ":")),
        status_code=status,
        media_type="application/json",
    )


def create_app(state: Optional[ServiceState] = None,
               ui_dir: Optional[Path] = None) -> FastAPI:
    """Build the API app around a (possibly not yet loaded) service state."""
    state = state or ServiceState()
    app = FastAPI(title="solvetrace", docs_url=None, redoc_url=None)
    app.state.service = state

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    def _snapshot() -> DatasetSnapshot:
        snap = state.snapshot
        if snap is None:
            raise ApiError(503, "unavailable", "no dataset loaded")
        return snap

    def _question(snap: DatasetSnapshot, question_id: str) -> QuestionMeta:
        meta = snap.meta(question_id)
        if meta is None:
            raise ApiError(404, "not_found", f"unknown question {question_id!r}")
        return meta

    @app.get("/api/questions")
    def questions() -> Response:
        snap = _snapshot()
        stats = compute_question_stats(snap.sessions, snap.metas)
        return _json_response(
            [
                {
                    "question_id": s.question_id,
                    "title": snap.meta(s.question_id).title,  # type: ignore[union-attr]
                    "difficulty": s.difficulty_label,
                    "n_sessions": s.n_sessions,
                    "mean_score_norm": s.mean_score_norm,
                }
                for s in stats
            ]
        )

    def _cohort_sessions(snap: DatasetSnapshot, meta: QuestionMeta,
                         cohort: CohortSpec) -> list[Session]:
        return [
            s
            for s in snap.question_sessions(meta.question_id)
            if cohort.matches(normalized_outcome(s, meta.max_score))
        ]

    @app.get("/api/questions/{question_id}/heatmap")
    def heatmap(question_id: str, res: str = str(DEFAULT_RESOLUTION),
                sigma: str = str(DEFAULT_SIGMA), cohort: str = "all") -> Response:
        snap = _snapshot()
        meta = _question(snap, question_id)
        res_v = _parse_int(res, "res", MIN_RESOLUTION, MAX_RESOLUTION)
        sigma_v = _parse_float(sigma, "sigma", 0.0)
        cohort_spec = _parse_cohort(cohort)
        sessions = _cohort_sessions(snap, meta, cohort_spec)
        grid = smooth_grid(accumulate_grid(collect_points(sessions), res_v, res_v), sigma_v)
        return _json_response(
            {
                "width": grid.width,
                "height": grid.height,
                "sigma": grid.sigma,
                "cells": grid.cells.ravel().tolist(),
                "total_mass": grid.total_mass,
                "params": {
                    "question_id": question_id,
                    "res": res_v,
                    "sigma": sigma_v,
                    "cohort": cohort_spec.label(),
                },
            }
        )

    @app.get("/api/questions/{question_id}/transitions")
    def transitions(question_id: str, roi_size: str = "0.0", tau: str = "0.25",
                    min_events: str = "5", bins: str = "5", min_edge: str = "2",
                    cohort: str = "all", res: str = str(DEFAULT_RESOLUTION),
                    sigma: str = str(DEFAULT_SIGMA)) -> Response:
        snap = _snapshot()
        meta = _question(snap, question_id)
        roi_size_v = _parse_float(roi_size, "roi_size", 0.0)
        tau_v = _parse_float(tau, "tau")
        if not 0.0 < tau_v <= 1.0:
            raise _invalid(f"tau must be in (0, 1], got {tau_v}")
        min_events_v = _parse_int(min_events, "min_events", 0)
        bins_v = _parse_int(bins, "bins", 1)
        min_edge_v = _parse_int(min_edge, "min_edge", 0)
        res_v = _parse_int(res, "res", MIN_RESOLUTION, MAX_RESOLUTION)
        sigma_v = _parse_float(sigma, "sigma", 0.0)
        cohort_spec = _parse_cohort(cohort)

        sessions = _cohort_sessions(snap, meta, cohort_spec)
        points = collect_points(sessions)
        grid = smooth_grid(accumulate_grid(points, res_v, res_v), sigma_v)
        params = RoiParams(tau=tau_v, merge_radius=roi_size_v,
                           min_events=min_events_v, time_bins=bins_v)
        rois = extract_rois(grid, points, params)
        tmap = build_transition_map(sessions, rois, cohort_spec,
                                    min_edge_count=min_edge_v, max_score=meta.max_score)
        payload = transition_map_to_dict(tmap, include_roi_details=True)
        payload["params"] = {
            "question_id": question_id,
            "roi_size": roi_size_v,
            "tau": tau_v,
            "min_events": min_events_v,
            "bins": bins_v,
            "min_edge": min_edge_v,
            "cohort": cohort_spec.label(),
            "res": res_v,
            "sigma": sigma_v,
        }
        return _json_response(payload)

    @app.get("/api/correlation")
    def correlation(k: str = "2.0") -> Response:
        snap = _snapshot()
        k_v = _parse_float(k, "k")
        if k_v <= 0:
            raise _invalid(f"k must be > 0, got {k_v}")
        stats = compute_question_stats(snap.sessions, snap.metas)
        try:
            report = difficulty_report(stats, k_sigma=k_v)
        except ValueError as exc:
            raise ApiError(409, "failed_precondition", str(exc)) from None
        return _json_response(report_to_dict(report))

    @app.post("/api/ingest")
    async def ingest(request: Request) -> Response:
        body = await request.body()
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            raise _invalid("request body must be UTF-8 JSON-lines") from None
        result = parse_event_log(text.splitlines())
        old = state.snapshot
        metas: Sequence[QuestionMeta] = old.metas if old is not None else ()
        snap = state.replace(group_sessions(result.events), metas)
        return _json_response(
            {
                "snapshot_id": snap.snapshot_id,
                "n_events": len(result.events),
                "n_sessions": len(snap.sessions),
                "n_errors": len(result.errors),
                "errors": [
                    {"line": e.line_no, "reason": e.reason} for e in result.errors[:50]
                ],
            }
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
