"""Seeded generator of synthetic question-solving sessions.

Produces datasets with planted structure so every downstream claim can be
checked against known ground truth: waypoint trajectories (solving paths
that favor one direction, or pin at an alternative answer), per-cohort
outcome rules (full marks vs. wrong), and per-question score models with
optional difficulty-label inversions.

Everything is a pure function of the seed.  Per-session seeds are derived
with :func:`mix_seed`, a splitmix64 hash of (seed, session index), so
sessions are independent and could be generated in any order or in
parallel without changing the output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .events import (
    EventType,
    QuestionMeta,
    RawEvent,
    Session,
    group_sessions,
    serialize_events,
)

__all__ = [
    "PatternKind",
    "PatternSpec",
    "OutcomeRule",
    "SessionIds",
    "QuestionConfig",
    "CohortConfig",
    "ScoreModel",
    "DatasetConfig",
    "GeneratedDataset",
    "mix_seed",
    "gen_session",
    "gen_dataset",
    "config_from_json",
    "config_to_json",
    "HORIZONTAL_PATH",
    "VERTICAL_PATH",
    "SUBTRACTIVE_PIN",
]


class PatternKind(str, Enum):
    WAYPOINT_PATH = "waypoint_path"
    ADDITIVE_HORIZONTAL = "additive_horizontal"
    ADDITIVE_VERTICAL = "additive_vertical"
    SUBTRACTIVE = "subtractive"


#: Canonical planted geometry.  The additive strategies share a start point
#: and extend the shape sideways or upward; the subtractive strategy pins
#: at a separate spot, far from both reference segments.
HORIZONTAL_PATH: tuple[tuple[float, float], ...] = ((0.25, 0.5), (0.85, 0.5))
VERTICAL_PATH: tuple[tuple[float, float], ...] = ((0.25, 0.5), (0.25, 0.9))
SUBTRACTIVE_PIN: tuple[tuple[float, float], ...] = ((0.6, 0.8), (0.7, 0.85))

_DEFAULT_WAYPOINTS = {
    PatternKind.ADDITIVE_HORIZONTAL: HORIZONTAL_PATH,
    PatternKind.ADDITIVE_VERTICAL: VERTICAL_PATH,
    PatternKind.SUBTRACTIVE: SUBTRACTIVE_PIN,
}


@dataclass(frozen=True)
class PatternSpec:
    """A family of trajectories: anchors, noise, and sampling cadence.

    ``hover_samples`` adds extra samples pinned at each waypoint, creating
    the interaction hot spots that region extraction picks up; the
    ``samples_per_leg`` interpolated samples in between stay sparse enough
    to remain below the density threshold.
    """

    kind: PatternKind
    waypoints: tuple[tuple[float, float], ...] = ()
    jitter_sigma: float = 0.02
    samples_per_leg: int = 5
    dwell_ms: float = 40.0
    hover_samples: int = 0

    def __post_init__(self) -> None:
        if self.jitter_sigma < 0:
            raise ValueError(f"jitter_sigma must be >= 0, got {self.jitter_sigma}")
        if self.samples_per_leg < 1:
            raise ValueError(f"samples_per_leg must be >= 1, got {self.samples_per_leg}")
        if self.dwell_ms <= 0:
            raise ValueError(f"dwell_ms must be > 0, got {self.dwell_ms}")
        if self.hover_samples < 0:
            raise ValueError(f"hover_samples must be >= 0, got {self.hover_samples}")
        for x, y in self.waypoints:
            if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                raise ValueError(f"waypoint ({x}, {y}) outside the unit square")

    def resolved_waypoints(self) -> tuple[tuple[float, float], ...]:
        if self.waypoints:
            return self.waypoints
        default = _DEFAULT_WAYPOINTS.get(self.kind)
        if default is None:
            raise ValueError("waypoint_path pattern requires explicit waypoints")
        return default


@dataclass(frozen=True)
class OutcomeRule:
    """Submit-score rule: a constant fraction or a Bernoulli mix of two."""

    kind: str = "constant"  # "constant" | "bernoulli"
    value: float = 1.0
    p: float = 0.5
    hi: float = 1.0
    lo: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "bernoulli"):
            raise ValueError(f"unknown outcome rule kind {self.kind!r}")
        if self.kind == "bernoulli" and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"bernoulli p must be in [0, 1], got {self.p}")

    def draw(self, rng: np.random.Generator) -> float:
        if self.kind == "constant":
            return self.value
        return self.hi if rng.random() < self.p else self.lo


class SessionIds(NamedTuple):
    session_id: str
    student_id: str
    question_id: str


_MASK64 = (1 << 64) - 1


def mix_seed(seed: int, index: int) -> int:
    """splitmix64 of (seed, index): the documented per-session seed derivation."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def gen_session(spec: PatternSpec, ids: SessionIds, seed: int,
                outcome: OutcomeRule = OutcomeRule(), max_score: float = 1.0,
                start_ms: int = 0) -> Session:
    """One synthetic session: jittered waypoint trajectory plus a submit.

    Moves interpolate the waypoints in order (``samples_per_leg`` per leg,
    plus ``hover_samples`` pinned at each waypoint), each perturbed by
    Gaussian jitter and clamped to the canvas.  Timestamps advance by
    exponential gaps with mean ``dwell_ms`` (at least 1 ms, so strictly
    increasing).  Identical (spec, ids, seed) give an identical session.
    """
    waypoints = spec.resolved_waypoints()
    rng = np.random.default_rng(seed)

    path: list[tuple[float, float]] = [waypoints[0]]
    path.extend([waypoints[0]] * spec.hover_samples)
    for (x0, y0), (x1, y1) in zip(waypoints[:-1], waypoints[1:]):
        for k in range(1, spec.samples_per_leg + 1):
            f = k / spec.samples_per_leg
            path.append((x0 + f * (x1 - x0), y0 + f * (y1 - y0)))
        path.extend([(x1, y1)] * spec.hover_samples)

    n = len(path)
    if spec.jitter_sigma > 0:
        noise = rng.normal(0.0, spec.jitter_sigma, size=(n, 2))
    else:
        noise = np.zeros((n, 2))
    coords = np.clip(np.asarray(path) + noise, 0.0, 1.0)
    gaps = np.maximum(np.rint(rng.exponential(spec.dwell_ms, size=n + 1)), 1.0).astype(np.int64)
    times = start_ms + np.cumsum(gaps)

    events = [
        RawEvent(ids.session_id, ids.student_id, ids.question_id, EventType.MOVE,
                 int(times[i]), float(coords[i, 0]), float(coords[i, 1]))
        for i in range(n)
    ]
    score = outcome.draw(rng) * max_score
    events.append(
        RawEvent(ids.session_id, ids.student_id, ids.question_id, EventType.SUBMIT,
                 int(times[n]), score=float(score))
    )
    return group_sessions(events)[0]


@dataclass(frozen=True)
class ScoreModel:
    """Per-question mean score fraction: base + slope * difficulty + noise."""

    base: float = 0.95
    slope: float = -0.10
    noise_sigma: float = 0.03


@dataclass(frozen=True)
class QuestionConfig:
    meta: QuestionMeta
    score_model: Optional[ScoreModel] = None


@dataclass(frozen=True)
class CohortConfig:
    """A behavior group: its trajectory pattern, size, and outcome rule.

    When ``outcome`` is None, sessions score the question's model mean,
    making per-question score statistics follow the planted line exactly.
    """

    name: str
    pattern: PatternSpec
    sessions_per_question: int
    outcome: Optional[OutcomeRule] = None

    def __post_init__(self) -> None:
        if self.sessions_per_question < 0:
            raise ValueError(f"sessions_per_question must be >= 0, got {self.sessions_per_question}")


@dataclass(frozen=True)
class DatasetConfig:
    questions: tuple[QuestionConfig, ...]
    cohorts: tuple[CohortConfig, ...]
    seed: int
    planted_mislabels: tuple[str, ...] = ()


@dataclass(frozen=True)
class GeneratedDataset:
    events_path: Path
    meta_path: Path
    truth_path: Path
    n_events: int
    n_sessions: int


def _inverted_label(label: int, lo: int, hi: int) -> int:
    return lo + hi - label


def gen_dataset(config: DatasetConfig, out_dir: Path) -> GeneratedDataset:
    """Write events.jsonl, meta.json, and truth.json under ``out_dir``.

    Planted mislabels keep their true difficulty for score generation but
    appear in meta.json with the label inverted across the dataset's label
    range; truth.json records everything a test needs to verify recovery.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    known = {q.meta.question_id for q in config.questions}
    for qid in config.planted_mislabels:
        if qid not in known:
            raise ValueError(f"planted mislabel {qid!r} is not a configured question")

    rng = np.random.default_rng(config.seed)
    question_means: dict[str, float] = {}
    for q in config.questions:
        if q.score_model is not None:
            m = q.score_model
            mean = m.base + m.slope * q.meta.difficulty_label + rng.normal(0.0, m.noise_sigma)
            question_means[q.meta.question_id] = float(np.clip(mean, 0.0, 1.0))

    all_events: list[RawEvent] = []
    cohort_sessions: dict[str, list[str]] = {c.name: [] for c in config.cohorts}
    session_index = 0
    for q in config.questions:
        qid = q.meta.question_id
        for cohort in config.cohorts:
            for _ in range(cohort.sessions_per_question):
                sid = f"s{session_index:06d}"
                ids = SessionIds(sid, f"u{session_index:06d}", qid)
                if cohort.outcome is not None:
                    rule = cohort.outcome
                elif qid in question_means:
                    rule = OutcomeRule(kind="constant", value=question_means[qid])
                else:
                    rule = OutcomeRule(kind="constant", value=1.0)
                session = gen_session(
                    cohort.pattern, ids, mix_seed(config.seed, session_index),
                    outcome=rule, max_score=q.meta.max_score,
                    start_ms=session_index * 1_000_000,
                )
                all_events.extend(session.events)
                cohort_sessions[cohort.name].append(sid)
                session_index += 1

    labels = [q.meta.difficulty_label for q in config.questions]
    lo, hi = (min(labels), max(labels)) if labels else (1, 1)
    meta_out = []
    for q in config.questions:
        label = q.meta.difficulty_label
        if q.meta.question_id in config.planted_mislabels:
            label = _inverted_label(label, lo, hi)
        entry: dict = {
            "question_id": q.meta.question_id,
            "difficulty": label,
            "max_score": q.meta.max_score,
        }
        if q.meta.title is not None:
            entry["title"] = q.meta.title
        if q.meta.background_image is not None:
            entry["background_image"] = q.meta.background_image
        meta_out.append(entry)

    truth = {
        "seed": config.seed,
        "planted_mislabels": sorted(config.planted_mislabels),
        "true_difficulty": {q.meta.question_id: q.meta.difficulty_label
                            for q in config.questions},
        "question_mean_fraction": {k: question_means[k] for k in sorted(question_means)},
        "cohort_sessions": cohort_sessions,
        "cohort_waypoints": {
            c.name: [list(p) for p in c.pattern.resolved_waypoints()] for c in config.cohorts
        },
    }

    events_path = out_dir / "events.jsonl"
    meta_path = out_dir / "meta.json"
    truth_path = out_dir / "truth.json"
    events_path.write_text(serialize_events(all_events), encoding="utf-8")
    meta_path.write_text(json.dumps(meta_out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    truth_path.write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return GeneratedDataset(
        events_path=events_path,
        meta_path=meta_path,
        truth_path=truth_path,
        n_events=len(all_events),
        n_sessions=session_index,
    )


def config_from_json(text: str) -> DatasetConfig:
    """Parse the JSON mirror of DatasetConfig (see README for the schema)."""
    data = json.loads(text)
    questions = []
    for q in data["questions"]:
        model = None
        if q.get("score_model") is not None:
            sm = q["score_model"]
            model = ScoreModel(
                base=float(sm.get("base", 0.95)),
                slope=float(sm.get("slope", -0.10)),
                noise_sigma=float(sm.get("noise_sigma", 0.03)),
            )
        questions.append(
            QuestionConfig(
                meta=QuestionMeta(
                    question_id=q["question_id"],
                    difficulty_label=int(q["difficulty"]),
                    max_score=float(q.get("max_score", 1.0)),
                    title=q.get("title"),
                    background_image=q.get("background_image"),
                ),
                score_model=model,
            )
        )
    cohorts = []
    for c in data["cohorts"]:
        p = c["pattern"]
        pattern = PatternSpec(
            kind=PatternKind(p["kind"]),
            waypoints=tuple((float(x), float(y)) for x, y in p.get("waypoints", [])),
            jitter_sigma=float(p.get("jitter_sigma", 0.02)),
            samples_per_leg=int(p.get("samples_per_leg", 5)),
            dwell_ms=float(p.get("dwell_ms", 40.0)),
            hover_samples=int(p.get("hover_samples", 0)),
        )
        rule = None
        if c.get("outcome") is not None:
            o = c["outcome"]
            rule = OutcomeRule(
                kind=o.get("kind", "constant"),
                value=float(o.get("value", 1.0)),
                p=float(o.get("p", 0.5)),
                hi=float(o.get("hi", 1.0)),
                lo=float(o.get("lo", 0.0)),
            )
        cohorts.append(
            CohortConfig(
                name=c["name"],
                pattern=pattern,
                sessions_per_question=int(c["sessions_per_question"]),
                outcome=rule,
            )
        )
    return DatasetConfig(
        questions=tuple(questions),
        cohorts=tuple(cohorts),
        seed=int(data["seed"]),
        planted_mislabels=tuple(data.get("planted_mislabels", [])),
    )


def config_to_json(config: DatasetConfig) -> str:
    out = {
        "seed": config.seed,
        "planted_mislabels": list(config.planted_mislabels),
        "questions": [],
        "cohorts": [],
    }
    for q in config.questions:
        entry: dict = {
            "question_id": q.meta.question_id,
            "difficulty": q.meta.difficulty_label,
            "max_score": q.meta.max_score,
        }
        if q.meta.title is not None:
            entry["title"] = q.meta.title
        if q.score_model is not None:
            entry["score_model"] = {
                "base": q.score_model.base,
                "slope": q.score_model.slope,
                "noise_sigma": q.score_model.noise_sigma,
            }
        out["questions"].append(entry)
    for c in config.cohorts:
        centry: dict = {
            "name": c.name,
            "sessions_per_question": c.sessions_per_question,
            "pattern": {
                "kind": c.pattern.kind.value,
                "waypoints": [list(w) for w in c.pattern.waypoints],
                "jitter_sigma": c.pattern.jitter_sigma,
                "samples_per_leg": c.pattern.samples_per_leg,
                "dwell_ms": c.pattern.dwell_ms,
                "hover_samples": c.pattern.hover_samples,
            },
        }
        if c.outcome is not None:
            centry["outcome"] = {
                "kind": c.outcome.kind,
                "value": c.outcome.value,
                "p": c.outcome.p,
                "hi": c.outcome.hi,
                "lo": c.outcome.lo,
            }
        out["cohorts"].append(centry)
    return json.dumps(out, indent=2, sort_keys=True) + "\n"
