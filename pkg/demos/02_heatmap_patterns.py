"""
Heat maps reveal competing solving strategies
=============================================

A drag-the-dot area problem can be solved by extending the shape
horizontally, extending it vertically, or cutting it down from elsewhere.
Simulate a class where most students go horizontal and a minority pins at
the subtractive answer, then read the strategy split straight off the heat
grid.
"""

from pathlib import Path

from solvetrace import accumulate_grid, collect_points, grid_to_pgm, mass_near_polyline
from solvetrace.synthgen import (
    HORIZONTAL_PATH,
    VERTICAL_PATH,
    OutcomeRule,
    PatternKind,
    PatternSpec,
    SessionIds,
    gen_session,
    mix_seed,
)

SEED = 2024

horizontal = PatternSpec(kind=PatternKind.ADDITIVE_HORIZONTAL,
                         jitter_sigma=0.02, samples_per_leg=8)
subtractive = PatternSpec(kind=PatternKind.SUBTRACTIVE,
                          jitter_sigma=0.02, samples_per_leg=8)

sessions = []
for i in range(80):
    sessions.append(gen_session(horizontal, SessionIds(f"h{i}", f"u{i}", "area-6"),
                                mix_seed(SEED, i), OutcomeRule("constant", 1.0),
                                start_ms=i * 1_000_000))
for i in range(20):
    sessions.append(gen_session(subtractive, SessionIds(f"c{i}", f"v{i}", "area-6"),
                                mix_seed(SEED, 9000 + i), OutcomeRule("constant", 1.0),
                                start_ms=(9000 + i) * 1_000_000))

grid = accumulate_grid(collect_points(sessions), 64, 64)

h_mass = mass_near_polyline(grid, HORIZONTAL_PATH, tol=0.06)
v_mass = mass_near_polyline(grid, VERTICAL_PATH, tol=0.06)
print(f"total positional events: {grid.total_mass:.0f}")
print(f"mass near the horizontal route: {h_mass:.0f}")
print(f"mass near the vertical route:   {v_mass:.0f}")
print(f"horizontal dominates by {h_mass / v_mass:.1f}x "
      "- the class prefers extending sideways")

out = Path(__file__).with_suffix(".pgm")
out.write_bytes(grid_to_pgm(grid))
print(f"wrote {out.name} (view with any PGM-capable image viewer)")
