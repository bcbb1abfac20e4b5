"""Command-line entry points.

Subcommands: validate, heatmap, transitions, correlate, generate, serve.
Exit codes: 0 success, 1 domain error (bad question id, bad cohort, too few
questions, malformed lines found), 2 I/O or usage error.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path
from typing import Optional, Sequence

from .analytics import (
    compute_question_stats,
    difficulty_report,
    report_to_csv,
    report_to_json,
)
from .events import (
    CohortSpec,
    ParseResult,
    QuestionMeta,
    Session,
    collect_points,
    group_sessions,
    normalized_outcome,
    parse_event_log,
    parse_question_meta,
)
from .heatmap import (
    DEFAULT_RESOLUTION,
    DEFAULT_SIGMA,
    accumulate_grid,
    grid_to_json,
    grid_to_pgm,
    smooth_grid,
)
from .roi import DEFAULT_MIN_EVENTS, DEFAULT_TAU, DEFAULT_TIME_BINS, RoiParams, extract_rois
from .synthgen import config_from_json, gen_dataset
from .transition import (
    DEFAULT_MIN_EDGE_COUNT,
    build_transition_map,
    transition_map_to_dot,
    transition_map_to_json,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


def _parse_canvas(raw: Optional[str]) -> Optional[tuple[float, float]]:
    if raw is None:
        return None
    w_s, sep, h_s = raw.partition("x")
    if not sep:
        raise ValueError(f"canvas must look like 1920x1080, got {raw!r}")
    w, h = float(w_s), float(h_s)
    if w <= 0 or h <= 0:
        raise ValueError(f"canvas dimensions must be positive, got {raw!r}")
    return (w, h)


def _read_events(path: str, canvas: Optional[str] = None) -> ParseResult:
    canvas_wh = _parse_canvas(canvas)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_event_log(fh, canvas=canvas_wh)


def _read_metas(path: Optional[str]) -> list[QuestionMeta]:
    if path is None:
        return []
    return parse_question_meta(Path(path).read_text(encoding="utf-8"))


def _question_sessions(result: ParseResult, question_id: str) -> list[Session]:
    sessions = [s for s in group_sessions(result.events) if s.question_id == question_id]
    if not sessions:
        raise ValueError(f"unknown question id {question_id!r} (no events)")
    return sessions


def _max_score_for(metas: Sequence[QuestionMeta], question_id: str) -> float:
    for m in metas:
        if m.question_id == question_id:
            return m.max_score
    return 1.0


def _filter_cohort(sessions: Sequence[Session], cohort: CohortSpec,
                   max_score: float) -> list[Session]:
    return [s for s in sessions if cohort.matches(normalized_outcome(s, max_score))]


def cmd_validate(args: argparse.Namespace) -> int:
    result = _read_events(args.events, args.canvas)
    sessions = group_sessions(result.events)
    type_counts: dict[str, int] = {}
    for ev in result.events:
        type_counts[ev.event_type.value] = type_counts.get(ev.event_type.value, 0) + 1
    print(f"events: {len(result.events)}")
    print(f"sessions: {len(sessions)}")
    for name in sorted(type_counts):
        print(f"  {name}: {type_counts[name]}")
    for warn in result.warnings:
        print(f"warning line {warn.line_no}: {warn.reason}")
    for err in result.errors:
        print(f"error line {err.line_no}: {err.reason}")
    print(f"errors: {len(result.errors)}, warnings: {len(result.warnings)}")
    return EXIT_OK if result.ok else EXIT_DOMAIN


def cmd_heatmap(args: argparse.Namespace) -> int:
    result = _read_events(args.events)
    sessions = _question_sessions(result, args.question)
    cohort = CohortSpec.parse(args.cohort)
    max_score = _max_score_for(_read_metas(args.meta), args.question)
    cohort_sessions = _filter_cohort(sessions, cohort, max_score)
    grid = accumulate_grid(collect_points(cohort_sessions), args.res, args.res)
    grid = smooth_grid(grid, args.sigma)
    Path(args.out + ".json").write_text(grid_to_json(grid) + "\n", encoding="utf-8")
    Path(args.out + ".pgm").write_bytes(grid_to_pgm(grid))
    print(f"wrote {args.out}.json and {args.out}.pgm "
          f"(total_mass={grid.total_mass:g}, sessions={len(cohort_sessions)})")
    return EXIT_OK


def cmd_transitions(args: argparse.Namespace) -> int:
    result = _read_events(args.events)
    sessions = _question_sessions(result, args.question)
    cohort = CohortSpec.parse(args.cohort)
    max_score = _max_score_for(_read_metas(args.meta), args.question)
    cohort_sessions = _filter_cohort(sessions, cohort, max_score)
    points = collect_points(cohort_sessions)
    grid = smooth_grid(accumulate_grid(points, args.res, args.res), args.sigma)
    params = RoiParams(tau=args.tau, merge_radius=args.roi_size,
                       min_events=args.min_events, time_bins=args.bins)
    rois = extract_rois(grid, points, params)
    tmap = build_transition_map(cohort_sessions, rois, cohort,
                                min_edge_count=args.min_edge, max_score=max_score)
    Path(args.out + ".json").write_text(transition_map_to_json(tmap) + "\n", encoding="utf-8")
    Path(args.out + ".dot").write_text(transition_map_to_dot(tmap), encoding="utf-8")
    print(f"wrote {args.out}.json and {args.out}.dot "
          f"(rois={len(rois)}, edges={len(tmap.edges)}, sessions={tmap.session_count})")
    return EXIT_OK


def cmd_correlate(args: argparse.Namespace) -> int:
    result = _read_events(args.events)
    metas = _read_metas(args.meta)
    stats = compute_question_stats(group_sessions(result.events), metas)
    report = difficulty_report(stats, k_sigma=args.k)
    Path(args.out + ".json").write_text(report_to_json(report) + "\n", encoding="utf-8")
    Path(args.out + ".csv").write_text(report_to_csv(report), encoding="utf-8")
    print(f"wrote {args.out}.json and {args.out}.csv "
          f"(questions={len(report.per_question)}, flagged={len(report.flagged)}, "
          f"pearson={report.pearson_r:.4f}, spearman={report.spearman_rho:.4f})")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    config = config_from_json(Path(args.config).read_text(encoding="utf-8"))
    dataset = gen_dataset(config, Path(args.out))
    print(f"wrote {dataset.events_path}, {dataset.meta_path}, {dataset.truth_path} "
          f"({dataset.n_events} events, {dataset.n_sessions} sessions)")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceState, create_app, load_snapshot

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.host, args.port))
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        probe.close()

    state = ServiceState()
    if args.data is not None:
        snap = load_snapshot(state, Path(args.data),
                             Path(args.meta) if args.meta else None)
        print(f"loaded {len(snap.sessions)} sessions, {len(snap.metas)} questions")
    ui_dir = Path(args.ui_dir) if args.ui_dir else None
    app = create_app(state, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solvetrace",
        description="Mouse-interaction analytics: heat grids, region transition maps, "
                    "difficulty audits, synthetic datasets, HTTP service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse an event log and report problems")
    p.add_argument("--events", required=True, help="JSON-lines event log")
    p.add_argument("--canvas", help="pixel canvas WxH to normalize raw coordinates")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("heatmap", help="export a heat grid as JSON and PGM")
    p.add_argument("--events", required=True)
    p.add_argument("--question", required=True, help="question id")
    p.add_argument("--res", type=int, default=DEFAULT_RESOLUTION, help="grid resolution")
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA, help="smoothing in cells")
    p.add_argument("--cohort", default="all", help="all | full | wrong | range:lo-hi")
    p.add_argument("--meta", help="question metadata JSON (for cohort score normalization)")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("transitions", help="export a region transition map")
    p.add_argument("--events", required=True)
    p.add_argument("--question", required=True)
    p.add_argument("--roi-size", dest="roi_size", type=float, default=0.0,
                   help="region merge radius (normalized)")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU, help="density threshold fraction")
    p.add_argument("--bins", type=int, default=DEFAULT_TIME_BINS, help="time histogram bins")
    p.add_argument("--min-events", dest="min_events", type=int, default=DEFAULT_MIN_EVENTS)
    p.add_argument("--min-edge", dest="min_edge", type=int, default=DEFAULT_MIN_EDGE_COUNT)
    p.add_argument("--res", type=int, default=DEFAULT_RESOLUTION)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    p.add_argument("--cohort", default="all")
    p.add_argument("--meta", help="question metadata JSON")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("correlate", help="difficulty-vs-score report (JSON + CSV)")
    p.add_argument("--events", required=True)
    p.add_argument("--meta", required=True)
    p.add_argument("--k", type=float, default=2.0, help="flag threshold in residual sigmas")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("generate", help="generate a synthetic dataset from a config")
    p.add_argument("--config", required=True, help="dataset config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="start the HTTP API (and UI, if built)")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data", help="event log to load at startup")
    p.add_argument("--meta", help="question metadata JSON")
    p.add_argument("--ui-dir", dest="ui_dir", help="directory of built UI assets")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
