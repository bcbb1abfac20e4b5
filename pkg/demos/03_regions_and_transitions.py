"""
From density to regions to a transition graph
=============================================

Regions of interest are carved out of the smoothed heat grid by
thresholding and merging; the merge radius is the user-facing "region
size" knob (a larger radius fuses nearby hot spots).  Once regions exist,
each session's path through them becomes a directed edge stream.
"""

from solvetrace import (
    CohortSpec,
    RoiParams,
    accumulate_grid,
    build_transition_map,
    collect_points,
    extract_rois,
    roi_count_curve,
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
spec = PatternSpec(kind=PatternKind.WAYPOINT_PATH, waypoints=ANCHORS,
                   jitter_sigma=0.02, samples_per_leg=3, hover_samples=12)

sessions = [
    gen_session(spec, SessionIds(f"s{i}", f"u{i}", "sort-people"), mix_seed(7, i),
                OutcomeRule("constant", 1.0), start_ms=i * 1_000_000)
    for i in range(100)
]
points = collect_points(sessions)
grid = smooth_grid(accumulate_grid(points, 64, 64), sigma=1.5)

# The size slider in one picture: region count per merge radius.
radii = [0.0, 0.05, 0.1, 0.2, 0.3, 0.5]
print("merge radius -> region count")
for r, count in roi_count_curve(grid, points, tau=0.25, min_events=5, radii=radii):
    print(f"  {r:4.2f} -> {count}")

rois = extract_rois(grid, points, RoiParams(tau=0.25, merge_radius=0.05, min_events=5))
print("\nregions (id, centroid x, events):")
for roi in rois:
    print(f"  {roi.roi_id}: x={roi.centroid[0]:.2f} events={roi.event_count} "
          f"time_hist={list(roi.time_hist)}")

tmap = build_transition_map(sessions, rois, CohortSpec.parse("all"))
print("\ntransitions (thicker = more traffic, later mean time = darker arc):")
for edge in tmap.edges:
    print(f"  {edge.from_roi} -> {edge.to_roi}: count={edge.count} "
          f"mean_time={edge.mean_time:.2f}")
