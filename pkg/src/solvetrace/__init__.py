"""solvetrace: mouse-interaction analytics for question-solving sessions.

Turns raw interaction logs into heat grids, regions of interest, directed
transition maps with cohort comparison, and difficulty-vs-score audits,
plus a seeded synthetic-session generator and an HTTP API for the explorer
UI.
"""

from .analytics import (
    CorrelationReport,
    FlaggedQuestion,
    QuestionStats,
    compute_question_stats,
    difficulty_report,
    pearson,
    spearman,
)
from .events import (
    CohortKind,
    CohortSpec,
    EventType,
    LineError,
    ParseResult,
    PointSet,
    QuestionMeta,
    RawEvent,
    Session,
    collect_points,
    group_sessions,
    normalize_time,
    parse_event_log,
    parse_question_meta,
    serialize_events,
)
from .heatmap import (
    HeatGrid,
    accumulate_grid,
    grid_to_json,
    grid_to_pgm,
    mass_near_polyline,
    normalize_grid,
    smooth_grid,
)
from .roi import Roi, RoiParams, extract_rois, roi_count_curve, rois_to_json
from .synthgen import (
    CohortConfig,
    DatasetConfig,
    OutcomeRule,
    PatternKind,
    PatternSpec,
    QuestionConfig,
    ScoreModel,
    SessionIds,
    gen_dataset,
    gen_session,
    mix_seed,
)
from .transition import (
    CohortDiff,
    TransitionEdge,
    TransitionMap,
    build_transition_map,
    compare_cohorts,
    ordering_score,
    transition_map_to_json,
)

__version__ = "0.1.0"
