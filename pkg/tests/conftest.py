from __future__ import annotations

import numpy as np
import pytest

from solvetrace.events import EventType, PointSet, RawEvent


def ev(sid: str = "s1", etype: str = "move", t: int = 0, x=None, y=None,
       score=None, student: str = "u1", question: str = "q1") -> RawEvent:
    return RawEvent(
        session_id=sid,
        student_id=student,
        question_id=question,
        event_type=EventType(etype),
        t_ms=t,
        x=x,
        y=y,
        score=score,
    )


def pointset(xy: np.ndarray, t_norm=None, session_starts=None) -> PointSet:
    """PointSet of bare move events, one session unless starts are given."""
    xy = np.asarray(xy, dtype=np.float64)
    n = len(xy)
    if t_norm is None:
        t_norm = np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(n)
    if session_starts is None:
        session_starts = np.array([0, n], dtype=np.int64)
    return PointSet(
        xs=xy[:, 0].copy(),
        ys=xy[:, 1].copy(),
        t_norm=np.asarray(t_norm, dtype=np.float64),
        t_ms=np.arange(n, dtype=np.int64),
        type_codes=np.zeros(n, dtype=np.int32),
        session_starts=np.asarray(session_starts, dtype=np.int64),
    )


def two_cluster_points(rng: np.random.Generator, n_each: int = 100,
                       centers=((0.2, 0.5), (0.8, 0.5)), jitter: float = 0.02
                       ) -> np.ndarray:
    parts = [
        np.clip(rng.normal(0.0, jitter, size=(n_each, 2)) + np.asarray(c), 0.0, 1.0)
        for c in centers
    ]
    return np.concatenate(parts)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
