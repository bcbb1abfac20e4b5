"""
Ingesting an interaction log
============================

Event logs arrive as JSON lines, one interaction per line.  Parsing never
aborts on dirty data: malformed lines become per-line errors, out-of-range
coordinates are clamped and recorded as warnings, and everything else goes
through.
"""

from solvetrace import group_sessions, parse_event_log

LOG = """\
{"session_id": "s1", "student_id": "amy", "question_id": "area-6", "type": "move", "t": 0, "x": 0.31, "y": 0.52}
{"session_id": "s1", "student_id": "amy", "question_id": "area-6", "type": "drag_start", "t": 180, "x": 0.33, "y": 0.52}
{"session_id": "s1", "student_id": "amy", "question_id": "area-6", "type": "drag", "t": 560, "x": 0.61, "y": 0.50}
{"session_id": "s1", "student_id": "amy", "question_id": "area-6", "type": "drag_end", "t": 900, "x": 0.80, "y": 1.07}
{"session_id": "s1", "student_id": "amy", "question_id": "area-6", "type": "submit", "t": 2400, "score": 1.0}
{"session_id": "s2", "student_id": "ben", "question_id": "area-6", "type": "move", "t": 50, "x": 0.30, "y": 0.55}
this line is not JSON at all
{"session_id": "s2", "student_id": "ben", "question_id": "area-6", "type": "submit", "t": 1700, "score": 0.0}
"""

result = parse_event_log(LOG.splitlines())
print(f"parsed {len(result.events)} events")
for warning in result.warnings:
    print(f"  warning on line {warning.line_no}: {warning.reason}")
for error in result.errors:
    print(f"  error on line {error.line_no}: {error.reason}")

# Sessions group the stream per student/question attempt, sort by time, and
# normalize each event's position in its session to t_norm in [0, 1].
sessions = group_sessions(result.events)
for session in sessions:
    print(f"session {session.session_id}: {len(session.events)} events, "
          f"outcome={session.outcome}, t_norm={[round(t, 2) for t in session.t_norm]}")
