"""
Do full-mark students work in a different order?
================================================

Plant it and recover it: one cohort visits four targets left to right and
submits full marks, the other goes right to left and scores zero.  The
ordering score (rank correlation of region position vs. first-visit time)
separates the cohorts with opposite signs.
"""

from solvetrace import (
    CohortSpec,
    RoiParams,
    accumulate_grid,
    build_transition_map,
    collect_points,
    compare_cohorts,
    extract_rois,
    ordering_score,
    smooth_grid,
)
from solvetrace.synthgen import (
    OutcomeRule,
    PatternKind,
    PatternSpec,
    SessionIds,
    gen_session,
    mix_seed,
)

ANCHORS = ((0.2, 0.5), (0.4, 0.5), (0.6, 0.5), (0.8, 0.5))
lr = PatternSpec(kind=PatternKind.WAYPOINT_PATH, waypoints=ANCHORS,
                 jitter_sigma=0.02, samples_per_leg=3, hover_samples=12)
rl = PatternSpec(kind=PatternKind.WAYPOINT_PATH, waypoints=ANCHORS[::-1],
                 jitter_sigma=0.02, samples_per_leg=3, hover_samples=12)

sessions = []
for i in range(150):
    sessions.append(gen_session(lr, SessionIds(f"L{i}", f"u{i}", "q"), mix_seed(5, i),
                                OutcomeRule("constant", 1.0), start_ms=i * 1_000_000))
    sessions.append(gen_session(rl, SessionIds(f"R{i}", f"v{i}", "q"),
                                mix_seed(5, 50_000 + i), OutcomeRule("constant", 0.0),
                                start_ms=(50_000 + i) * 1_000_000))

points = collect_points(sessions)
grid = smooth_grid(accumulate_grid(points, 64, 64), 1.5)
rois = extract_rois(grid, points, RoiParams(tau=0.25, merge_radius=0.05, min_events=5))

full = build_transition_map(sessions, rois, CohortSpec.parse("full"))
wrong = build_transition_map(sessions, rois, CohortSpec.parse("wrong"))

print(f"recovered {len(rois)} regions")
print(f"full-marks cohort:  {full.session_count} sessions, "
      f"ordering score {ordering_score(full):+.2f}")
print(f"wrong-answer cohort: {wrong.session_count} sessions, "
      f"ordering score {ordering_score(wrong):+.2f}")

diff = compare_cohorts(full, wrong)
print(f"cohort scores are {diff.sign_relationship}")
print("per-region first-visit delta (full minus wrong):")
for rid in diff.shared_roi_ids:
    if rid in diff.first_visit_delta:
        print(f"  region {rid}: {diff.first_visit_delta[rid]:+.2f}")
