"""
Auditing difficulty labels against observed scores
==================================================

Mean scores should fall as labeled difficulty rises.  Questions that sit
far off that trend probably carry the wrong label.  Generate a question
bank where three labels were deliberately inverted, then catch them.
"""

import tempfile
from pathlib import Path

from solvetrace import (
    QuestionMeta,
    compute_question_stats,
    difficulty_report,
    group_sessions,
    parse_event_log,
    parse_question_meta,
)
from solvetrace.synthgen import (
    CohortConfig,
    DatasetConfig,
    PatternKind,
    PatternSpec,
    QuestionConfig,
    ScoreModel,
    gen_dataset,
)

PLANTED = ("q00", "q04", "q09")

config = DatasetConfig(
    questions=tuple(
        QuestionConfig(QuestionMeta(f"q{k:02d}", k % 5 + 1, max_score=1.0),
                       ScoreModel(base=0.95, slope=-0.10, noise_sigma=0.03))
        for k in range(30)
    ),
    cohorts=(CohortConfig(
        "students",
        PatternSpec(kind=PatternKind.ADDITIVE_HORIZONTAL, samples_per_leg=2),
        sessions_per_question=5,
    ),),
    seed=360,
    planted_mislabels=PLANTED,
)

with tempfile.TemporaryDirectory() as tmp:
    out = gen_dataset(config, Path(tmp))
    events = parse_event_log(out.events_path.read_text().splitlines()).events
    metas = parse_question_meta(out.meta_path.read_text())

stats = compute_question_stats(group_sessions(events), metas)
report = difficulty_report(stats, k_sigma=2.0)

print(f"pearson r = {report.pearson_r:+.3f}, spearman rho = {report.spearman_rho:+.3f}")
print(f"fit: mean_score = {report.intercept:.3f} {report.slope:+.3f} * difficulty, "
      f"residual sigma = {report.residual_sigma:.3f}")
print(f"\nflagged at k = {report.k_sigma}:")
for f in report.flagged:
    marker = "planted" if f.question_id in PLANTED else "FALSE POSITIVE"
    print(f"  {f.question_id}: residual {f.residual:+.3f} -> {f.direction}  [{marker}]")
missed = set(PLANTED) - {f.question_id for f in report.flagged}
print(f"\nmissed: {sorted(missed) if missed else 'none'}")
