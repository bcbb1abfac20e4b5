"""Event model: raw interaction records, session grouping, time normalization.

The canonical input is a JSON-lines log, one interaction per line::

    {"session_id": "s1", "student_id": "u1", "question_id": "q1",
     "type": "move", "t": 1000, "x": 0.5, "y": 0.5}

Coordinates are normalized to the unit square at ingestion; out-of-range
values are clamped (and reported as warnings), malformed lines are reported
without aborting the batch.  Everything downstream (heat grids, ROIs,
transition maps) consumes the types defined here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

__all__ = [
    "EventType",
    "POSITIONAL_TYPES",
    "RawEvent",
    "LineError",
    "ParseResult",
    "Session",
    "QuestionMeta",
    "CohortKind",
    "CohortSpec",
    "PointSet",
    "parse_event_log",
    "serialize_events",
    "group_sessions",
    "normalize_time",
    "parse_question_meta",
    "collect_points",
    "normalized_outcome",
]


class EventType(str, Enum):
    MOVE = "move"
    CLICK = "click"
    DRAG_START = "drag_start"
    DRAG = "drag"
    DRAG_END = "drag_end"
    ANSWER_CHANGE = "answer_change"
    SUBMIT = "submit"


#: Event types that carry a cursor position and feed the heat grid.
POSITIONAL_TYPES = frozenset(
    {
        EventType.MOVE,
        EventType.CLICK,
        EventType.DRAG_START,
        EventType.DRAG,
        EventType.DRAG_END,
    }
)

_TYPE_BY_NAME = {t.value: t for t in EventType}


class RawEvent(NamedTuple):
    """One timestamped interaction record.

    ``x``/``y`` are normalized to [0, 1] and always present for positional
    types; ``score`` is present exactly on ``submit`` events.
    """

    session_id: str
    student_id: str
    question_id: str
    event_type: EventType
    t_ms: int
    x: Optional[float] = None
    y: Optional[float] = None
    score: Optional[float] = None

    @property
    def is_positional(self) -> bool:
        return self.event_type in POSITIONAL_TYPES


class LineError(NamedTuple):
    line_no: int
    reason: str


@dataclass(frozen=True)
class ParseResult:
    """Outcome of one ingestion pass.

    ``errors`` are lines that produced no event; ``warnings`` are lines that
    were ingested after repair (currently: coordinate clamping).
    """

    events: tuple[RawEvent, ...]
    errors: tuple[LineError, ...]
    warnings: tuple[LineError, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class Session:
    """Time-ordered events of one student on one question.

    ``t_norm[i]`` rescales event ``i``'s timestamp to [0, 1] within the
    session (0 for single-event or constant-time sessions); ``outcome`` is
    the score of the last submit, or None if the student never submitted.
    """

    session_id: str
    student_id: str
    question_id: str
    events: tuple[RawEvent, ...]
    outcome: Optional[float] = None
    t_norm: tuple[float, ...] = ()


@dataclass(frozen=True)
class QuestionMeta:
    question_id: str
    difficulty_label: int
    max_score: float
    title: Optional[str] = None
    background_image: Optional[str] = None

    def __post_init__(self) -> None:
        if self.difficulty_label < 1:
            raise ValueError(f"difficulty_label must be >= 1, got {self.difficulty_label}")
        if not self.max_score > 0:
            raise ValueError(f"max_score must be > 0, got {self.max_score}")


class CohortKind(str, Enum):
    ALL = "all"
    FULL_MARKS = "full_marks"
    WRONG = "wrong"
    SCORE_RANGE = "score_range"


@dataclass(frozen=True)
class CohortSpec:
    """Session filter by normalized outcome.

    ``full_marks`` keeps sessions with normalized score exactly 1, ``wrong``
    those below 1, ``score_range`` those with lo <= score <= hi.  Sessions
    without an outcome qualify only under ``all``.
    """

    kind: CohortKind = CohortKind.ALL
    lo: Optional[float] = None
    hi: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind is CohortKind.SCORE_RANGE:
            if self.lo is None or self.hi is None:
                raise ValueError("score_range cohort requires lo and hi")
            if not (0.0 <= self.lo <= self.hi <= 1.0):
                raise ValueError(
                    f"score_range requires 0 <= lo <= hi <= 1, got lo={self.lo} hi={self.hi}"
                )

    @classmethod
    def parse(cls, text: str) -> "CohortSpec":
        """Parse the ``all | full | wrong | range:lo-hi`` grammar."""
        text = text.strip().lower()
        if text == "all":
            return cls(CohortKind.ALL)
        if text in ("full", "full_marks"):
            return cls(CohortKind.FULL_MARKS)
        if text == "wrong":
            return cls(CohortKind.WRONG)
        if text.startswith("range:"):
            body = text[len("range:") :]
            lo_s, sep, hi_s = body.partition("-")
            if not sep:
                raise ValueError(f"bad cohort range {text!r}, expected range:lo-hi")
            try:
                lo, hi = float(lo_s), float(hi_s)
            except ValueError:
                raise ValueError(f"bad cohort range {text!r}, expected numeric lo-hi") from None
            return cls(CohortKind.SCORE_RANGE, lo=lo, hi=hi)
        raise ValueError(f"unknown cohort {text!r}, expected all|full|wrong|range:lo-hi")

    def matches(self, score_norm: Optional[float]) -> bool:
        if self.kind is CohortKind.ALL:
            return True
        if score_norm is None:
            return False
        if self.kind is CohortKind.FULL_MARKS:
            return score_norm == 1.0
        if self.kind is CohortKind.WRONG:
            return score_norm < 1.0
        return self.lo <= score_norm <= self.hi  # type: ignore[operator]

    def label(self) -> str:
        if self.kind is CohortKind.SCORE_RANGE:
            return f"range:{self.lo}-{self.hi}"
        return {"all": "all", "full_marks": "full", "wrong": "wrong"}[self.kind.value]


def normalized_outcome(session: Session, max_score: float) -> Optional[float]:
    """Session outcome rescaled by the question's max score, clamped to [0, 1]."""
    if session.outcome is None:
        return None
    return min(max(session.outcome / max_score, 0.0), 1.0)


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)


def _parse_line(obj: dict, line_no: int, canvas: Optional[tuple[float, float]],
                warnings: list[LineError]) -> RawEvent:
    """Turn one decoded JSON object into a RawEvent or raise ValueError."""
    try:
        session_id = obj["session_id"]
        student_id = obj["student_id"]
        question_id = obj["question_id"]
        type_name = obj["type"]
        t_raw = obj["t"]
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r}") from None

    if not isinstance(session_id, str) or not isinstance(student_id, str) \
            or not isinstance(question_id, str):
        raise ValueError("session_id, student_id, question_id must be strings")

    event_type = _TYPE_BY_NAME.get(type_name)
    if event_type is None:
        raise ValueError(f"unknown event type {type_name!r}")

    if isinstance(t_raw, bool) or not isinstance(t_raw, (int, float)):
        raise ValueError(f"t must be integer milliseconds, got {t_raw!r}")
    if isinstance(t_raw, float):
        if not t_raw.is_integer():
            raise ValueError(f"t must be integer milliseconds, got {t_raw!r}")
        t_raw = int(t_raw)
    if t_raw < 0:
        raise ValueError(f"t must be >= 0, got {t_raw}")

    x = obj.get("x")
    y = obj.get("y")
    positional = event_type in POSITIONAL_TYPES
    if positional and (x is None or y is None):
        raise ValueError(f"{event_type.value} event requires x and y")
    for name, v in (("x", x), ("y", y)):
        if v is not None and (isinstance(v, bool) or not isinstance(v, (int, float))):
            raise ValueError(f"{name} must be a number, got {v!r}")

    if canvas is not None:
        if x is not None:
            x = x / canvas[0]
        if y is not None:
            y = y / canvas[1]
    if x is not None and not 0.0 <= x <= 1.0:
        warnings.append(LineError(line_no, f"x={x:g} clamped to [0,1]"))
        x = _clamp01(float(x))
    if y is not None and not 0.0 <= y <= 1.0:
        warnings.append(LineError(line_no, f"y={y:g} clamped to [0,1]"))
        y = _clamp01(float(y))

    score = obj.get("score")
    if event_type is EventType.SUBMIT:
        if score is None:
            raise ValueError("submit event requires score")
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise ValueError(f"score must be a number, got {score!r}")
        if score < 0:
            raise ValueError(f"score must be >= 0, got {score}")
        score = float(score)
    elif score is not None:
        raise ValueError(f"score is only valid on submit events, not {event_type.value}")

    return RawEvent(
        session_id=session_id,
        student_id=student_id,
        question_id=question_id,
        event_type=event_type,
        t_ms=t_raw,
        x=None if x is None else float(x),
        y=None if y is None else float(y),
        score=score,
    )


def parse_event_log(lines: Iterable[str],
                    canvas: Optional[tuple[float, float]] = None) -> ParseResult:
    """Parse a JSON-lines event log.

    Args:
        lines: iterable of text lines (a file object works).
        canvas: optional (width, height) in pixels; when given, raw pixel
            x/y are divided by it before validation.

    Returns:
        ParseResult with events in input order.  Malformed lines become
        errors, clamped coordinates become warnings; neither aborts the pass.
    """
    if canvas is not None and (canvas[0] <= 0 or canvas[1] <= 0):
        raise ValueError(f"canvas dimensions must be positive, got {canvas}")
    events: list[RawEvent] = []
    errors: list[LineError] = []
    warnings: list[LineError] = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            errors.append(LineError(line_no, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            errors.append(LineError(line_no, "line is not a JSON object"))
            continue
        try:
            events.append(_parse_line(obj, line_no, canvas, warnings))
        except ValueError as exc:
            errors.append(LineError(line_no, str(exc)))
    return ParseResult(tuple(events), tuple(errors), tuple(warnings))


def serialize_events(events: Iterable[RawEvent]) -> str:
    """Serialize events back to the JSON-lines log format.

    Round-trips through :func:`parse_event_log` to an identical event list.
    """
    out = []
    for ev in events:
        obj: dict = {
            "session_id": ev.session_id,
            "student_id": ev.student_id,
            "question_id": ev.question_id,
            "type": ev.event_type.value,
            "t": ev.t_ms,
        }
        if ev.x is not None:
            obj["x"] = ev.x
        if ev.y is not None:
            obj["y"] = ev.y
        if ev.score is not None:
            obj["score"] = ev.score
        out.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(out) + ("\n" if out else "")


def normalize_time(session: Session) -> Session:
    """Fill ``t_norm``: per-event time rescaled to [0, 1] within the session.

    All-equal timestamps (including single-event sessions) map to all zeros.
    Raises ValueError on an empty session.
    """
    if not session.events:
        raise ValueError(f"session {session.session_id!r} has no events")
    t0 = session.events[0].t_ms
    t1 = session.events[-1].t_ms
    span = t1 - t0
    if span <= 0:
        t_norm = (0.0,) * len(session.events)
    else:
        t_norm = tuple((ev.t_ms - t0) / span for ev in session.events)
    return replace(session, t_norm=t_norm)


def group_sessions(events: Sequence[RawEvent]) -> list[Session]:
    """Partition events by session_id into normalized sessions.

    Within a session, events are sorted by t_ms (stable, so duplicate
    timestamps keep input order).  The outcome is the score of the last
    submit event, if any.  Sessions are ordered by first event time, ties
    by first appearance in the input.
    """
    buckets: dict[str, list[RawEvent]] = {}
    for ev in events:
        buckets.setdefault(ev.session_id, []).append(ev)

    sessions = []
    for order, (sid, evs) in enumerate(buckets.items()):
        evs.sort(key=lambda e: e.t_ms)
        outcome = None
        for ev in reversed(evs):
            if ev.event_type is EventType.SUBMIT:
                outcome = ev.score
                break
        sessions.append(
            (
                evs[0].t_ms,
                order,
                Session(
                    session_id=sid,
                    student_id=evs[0].student_id,
                    question_id=evs[0].question_id,
                    events=tuple(evs),
                    outcome=outcome,
                ),
            )
        )
    sessions.sort(key=lambda item: (item[0], item[1]))
    return [normalize_time(s) for _, _, s in sessions]


def parse_question_meta(text: str) -> list[QuestionMeta]:
    """Parse question metadata: a JSON array of per-question objects.

    Unlike the event log, metadata is a single curated document, so any
    invalid entry raises ValueError.
    """
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("question metadata must be a JSON array")
    metas: list[QuestionMeta] = []
    seen: set[str] = set()
    for idx, obj in enumerate(data):
        if not isinstance(obj, dict):
            raise ValueError(f"metadata entry {idx} is not an object")
        try:
            qid = obj["question_id"]
            difficulty = obj["difficulty"]
            max_score = obj["max_score"]
        except KeyError as exc:
            raise ValueError(f"metadata entry {idx}: missing field {exc.args[0]!r}") from None
        if not isinstance(qid, str):
            raise ValueError(f"metadata entry {idx}: question_id must be a string")
        if isinstance(difficulty, bool) or not isinstance(difficulty, int):
            raise ValueError(f"metadata entry {idx}: difficulty must be an integer")
        if isinstance(max_score, bool) or not isinstance(max_score, (int, float)):
            raise ValueError(f"metadata entry {idx}: max_score must be a number")
        if qid in seen:
            raise ValueError(f"duplicate question_id {qid!r} in metadata")
        seen.add(qid)
        metas.append(
            QuestionMeta(
                question_id=qid,
                difficulty_label=difficulty,
                max_score=float(max_score),
                title=obj.get("title"),
                background_image=obj.get("background_image"),
            )
        )
    return metas


@dataclass(frozen=True)
class PointSet:
    """Columnar view of positional events with their session context.

    Arrays are parallel, one entry per positional event, in session order
    (sessions in list order, events in time order).  ``session_starts``
    holds the offset of each session's first point plus a trailing sentinel,
    so session ``k`` owns slice ``[session_starts[k], session_starts[k+1])``.
    """

    xs: np.ndarray
    ys: np.ndarray
    t_norm: np.ndarray
    t_ms: np.ndarray
    type_codes: np.ndarray  # index into EVENT_TYPE_ORDER
    session_starts: np.ndarray

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def n_sessions(self) -> int:
        return len(self.session_starts) - 1


#: Fixed order used for PointSet.type_codes.
EVENT_TYPE_ORDER = tuple(EventType)
_TYPE_CODE = {t: i for i, t in enumerate(EVENT_TYPE_ORDER)}


def collect_points(sessions: Sequence[Session]) -> PointSet:
    """Flatten sessions into a PointSet of their positional events."""
    xs: list[float] = []
    ys: list[float] = []
    tn: list[float] = []
    tm: list[int] = []
    codes: list[int] = []
    starts: list[int] = [0]
    for session in sessions:
        for ev, t in zip(session.events, session.t_norm):
            if ev.event_type in POSITIONAL_TYPES:
                xs.append(ev.x)  # type: ignore[arg-type]
                ys.append(ev.y)  # type: ignore[arg-type]
                tn.append(t)
                tm.append(ev.t_ms)
                codes.append(_TYPE_CODE[ev.event_type])
        starts.append(len(xs))
    return PointSet(
        xs=np.asarray(xs, dtype=np.float64),
        ys=np.asarray(ys, dtype=np.float64),
        t_norm=np.asarray(tn, dtype=np.float64),
        t_ms=np.asarray(tm, dtype=np.int64),
        type_codes=np.asarray(codes, dtype=np.int32),
        session_starts=np.asarray(starts, dtype=np.int64),
    )
