"""Score statistics and the difficulty-vs-score audit.

Questions carry an ordinal difficulty label assigned by the designer; this
module correlates those labels with observed mean scores and flags the
questions whose scores sit far off the fitted trend, i.e. the ones whose
labels deserve a second look.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .events import QuestionMeta, Session, normalized_outcome

__all__ = [
    "QuestionStats",
    "FlaggedQuestion",
    "CorrelationReport",
    "pearson",
    "spearman",
    "average_ranks",
    "compute_question_stats",
    "difficulty_report",
    "report_to_json",
    "report_to_csv",
]

EASIER_THAN_LABELED = "easier_than_labeled"
HARDER_THAN_LABELED = "harder_than_labeled"

DEFAULT_K_SIGMA = 2.0


@dataclass(frozen=True)
class QuestionStats:
    """Per-question mean normalized score over scored sessions."""

    question_id: str
    n_sessions: int
    mean_score_norm: Optional[float]  # None when no session carried a score
    difficulty_label: int


@dataclass(frozen=True)
class FlaggedQuestion:
    question_id: str
    residual: float
    direction: str  # EASIER_THAN_LABELED or HARDER_THAN_LABELED


@dataclass(frozen=True)
class CorrelationReport:
    pearson_r: float
    spearman_rho: float
    per_question: tuple[QuestionStats, ...]
    flagged: tuple[FlaggedQuestion, ...]
    k_sigma: float
    intercept: float
    slope: float
    residual_sigma: float
    unscored: tuple[QuestionStats, ...] = ()


def _pearson_unchecked(xs: np.ndarray, ys: np.ndarray) -> float:
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined: zero variance input")
    return float(np.dot(dx, dy) / np.sqrt(sxx * syy))


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation; requires n >= 3 and nonzero variances."""
    xa = np.asarray(xs, dtype=np.float64)
    ya = np.asarray(ys, dtype=np.float64)
    if xa.ndim != 1 or xa.shape != ya.shape:
        raise ValueError(f"inputs must be equal-length vectors, got {xa.shape} and {ya.shape}")
    if len(xa) < 3:
        raise ValueError(f"need at least 3 observations, got {len(xa)}")
    return _pearson_unchecked(xa, ya)


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values receive the mean of their rank range."""
    a = np.asarray(values, dtype=np.float64)
    order = np.argsort(a, kind="stable")
    ranks = np.empty(len(a), dtype=np.float64)
    i = 0
    while i < len(a):
        j = i
        while j + 1 < len(a) and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rho: Pearson correlation of average ranks, ties averaged."""
    xa = np.asarray(xs, dtype=np.float64)
    ya = np.asarray(ys, dtype=np.float64)
    if xa.ndim != 1 or xa.shape != ya.shape:
        raise ValueError(f"inputs must be equal-length vectors, got {xa.shape} and {ya.shape}")
    if len(xa) < 3:
        raise ValueError(f"need at least 3 observations, got {len(xa)}")
    return _pearson_unchecked(average_ranks(xa), average_ranks(ya))


def compute_question_stats(sessions: Sequence[Session],
                           metas: Sequence[QuestionMeta]) -> list[QuestionStats]:
    """Aggregate mean normalized score per metadata question.

    Only sessions with an outcome count toward n_sessions and the mean;
    normalized scores are clamped to [0, 1] against dirty inputs.
    """
    by_question: dict[str, list[float]] = {}
    meta_by_id = {m.question_id: m for m in metas}
    for session in sessions:
        meta = meta_by_id.get(session.question_id)
        if meta is None:
            continue
        score = normalized_outcome(session, meta.max_score)
        if score is not None:
            by_question.setdefault(session.question_id, []).append(score)
    stats = []
    for meta in metas:
        scores = by_question.get(meta.question_id, [])
        stats.append(
            QuestionStats(
                question_id=meta.question_id,
                n_sessions=len(scores),
                mean_score_norm=float(np.mean(scores)) if scores else None,
                difficulty_label=meta.difficulty_label,
            )
        )
    return stats


def difficulty_report(stats: Sequence[QuestionStats],
                      k_sigma: float = DEFAULT_K_SIGMA) -> CorrelationReport:
    """Audit difficulty labels against observed mean scores.

    Fits mean_score = a + b * difficulty by least squares and flags any
    question whose residual exceeds k_sigma times the residual standard
    deviation.  A negative residual means the question scored lower than
    its label predicts (harder than labeled), positive means easier.
    """
    if k_sigma <= 0:
        raise ValueError(f"k_sigma must be > 0, got {k_sigma}")
    scored = [s for s in stats if s.n_sessions >= 1 and s.mean_score_norm is not None]
    unscored = tuple(s for s in stats if s.n_sessions == 0)
    if len(scored) < 3:
        raise ValueError(f"need at least 3 questions with sessions, got {len(scored)}")
    labels = np.array([s.difficulty_label for s in scored], dtype=np.float64)
    means = np.array([s.mean_score_norm for s in scored], dtype=np.float64)
    if np.all(labels == labels[0]):
        raise ValueError("difficulty labels are all equal; nothing to correlate")

    dx = labels - labels.mean()
    slope = float(np.dot(dx, means - means.mean()) / np.dot(dx, dx))
    intercept = float(means.mean() - slope * labels.mean())
    residuals = means - (intercept + slope * labels)
    sigma = float(residuals.std())

    # Scores live in [0, 1]; residuals at float-rounding scale are noise
    # from an exact fit, never outliers.
    threshold = max(k_sigma * sigma, 1e-12)
    flagged = []
    for s, r in zip(scored, residuals):
        if abs(r) > threshold:
            direction = HARDER_THAN_LABELED if r < 0 else EASIER_THAN_LABELED
            flagged.append(FlaggedQuestion(s.question_id, float(r), direction))

    return CorrelationReport(
        pearson_r=pearson(labels, means),
        spearman_rho=spearman(labels, means),
        per_question=tuple(scored),
        flagged=tuple(flagged),
        k_sigma=k_sigma,
        intercept=intercept,
        slope=slope,
        residual_sigma=sigma,
        unscored=unscored,
    )


def report_to_dict(report: CorrelationReport) -> dict:
    residual_by_id = {f.question_id: f for f in report.flagged}
    per_question = []
    labels = np.array([s.difficulty_label for s in report.per_question], dtype=np.float64)
    means = np.array([s.mean_score_norm for s in report.per_question], dtype=np.float64)
    residuals = means - (report.intercept + report.slope * labels)
    for s, r in zip(report.per_question, residuals):
        per_question.append(
            {
                "question_id": s.question_id,
                "difficulty": s.difficulty_label,
                "n_sessions": s.n_sessions,
                "mean_score_norm": s.mean_score_norm,
                "residual": float(r),
                "flagged": s.question_id in residual_by_id,
            }
        )
    return {
        "pearson_r": report.pearson_r,
        "spearman_rho": report.spearman_rho,
        "k_sigma": report.k_sigma,
        "intercept": report.intercept,
        "slope": report.slope,
        "residual_sigma": report.residual_sigma,
        "per_question": per_question,
        "flagged": [
            {"question_id": f.question_id, "residual": f.residual, "direction": f.direction}
            for f in report.flagged
        ],
        "unscored": [
            {"question_id": s.question_id, "difficulty": s.difficulty_label}
            for s in report.unscored
        ],
    }


def report_to_json(report: CorrelationReport) -> str:
    return json.dumps(report_to_dict(report), separators=(",", ":"))


def report_to_csv(report: CorrelationReport) -> str:
    """One row per question: question_id, difficulty, n, mean_score, residual, flagged."""
    lines = ["question_id,difficulty,n,mean_score,residual,flagged"]
    for row in report_to_dict(report)["per_question"]:
        lines.append(
            f"{row['question_id']},{row['difficulty']},{row['n_sessions']},"
            f"{row['mean_score_norm']:.12g},{row['residual']:.12g},{str(row['flagged']).lower()}"
        )
    for s in report.unscored:
        lines.append(f"{s.question_id},{s.difficulty_label},0,,,false")
    return "\n".join(lines) + "\n"
