from __future__ import annotations

import json
import socket
import subprocess
import sys
import time
import urllib.request

import numpy as np
import pytest

from solvetrace.cli import main
from solvetrace.synthgen import config_to_json

from .test_service import _mislabel_config, _ordering_config


@pytest.fixture(scope="module")
def ordering_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_ordering")
    config_path = root / "config.json"
    config_path.write_text(config_to_json(_ordering_config(seed=21)))
    assert main(["generate", "--config", str(config_path), "--out", str(root)]) == 0
    return root


@pytest.fixture(scope="module")
def mislabel_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_mislabel")
    config_path = root / "config.json"
    config_path.write_text(config_to_json(_mislabel_config(seed=87)))
    assert main(["generate", "--config", str(config_path), "--out", str(root)]) == 0
    return root


def test_validate_clean_file(ordering_dir, capsys):
    rc = main(["validate", "--events", str(ordering_dir / "events.jsonl")])
    out = capsys.readouterr().out
    assert rc == 0
    # 60 sessions, each: 1 + 3*3 + 4*10 moves + 1 submit
    assert "sessions: 60" in out
    assert f"events: {60 * (1 + 9 + 40 + 1)}" in out
    assert "submit: 60" in out
    assert "errors: 0" in out


def test_validate_reports_malformed_line(tmp_path, capsys):
    path = tmp_path / "events.jsonl"
    path.write_text(
        '{"session_id":"s","student_id":"u","question_id":"q","type":"move",'
        '"t":1,"x":0.5,"y":0.5}\n'
        "garbage\n"
    )
    rc = main(["validate", "--events", str(path)])
    out = capsys.readouterr().out
    assert rc == 1
    assert "error line 2" in out


def test_validate_missing_file():
    assert main(["validate", "--events", "/nonexistent/events.jsonl"]) == 2


def test_validate_canvas_scaling(tmp_path, capsys):
    path = tmp_path / "pixels.jsonl"
    path.write_text(
        '{"session_id":"s","student_id":"u","question_id":"q","type":"move",'
        '"t":1,"x":960,"y":540}\n'
    )
    rc = main(["validate", "--events", str(path), "--canvas", "1920x1080"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "warnings: 0" in out


def test_heatmap_outputs_and_determinism(ordering_dir, tmp_path, capsys):
    args = ["heatmap", "--events", str(ordering_dir / "events.jsonl"),
            "--question", "q1", "--res", "32", "--sigma", "1.0"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5\n32 32\n255\n")


def test_heatmap_sigma_zero_mass_matches_validate_count(ordering_dir, tmp_path, capsys):
    rc = main(["heatmap", "--events", str(ordering_dir / "events.jsonl"),
               "--question", "q1", "--sigma", "0", "--out", str(tmp_path / "grid")])
    assert rc == 0
    data = json.loads((tmp_path / "grid.json").read_text())
    assert sum(data["cells"]) == 60 * (1 + 9 + 40)  # positional events only


def test_heatmap_unknown_question(ordering_dir, tmp_path, capsys):
    rc = main(["heatmap", "--events", str(ordering_dir / "events.jsonl"),
               "--question", "nope", "--out", str(tmp_path / "x")])
    assert rc == 1


def test_heatmap_horizontal_band_dominates(tmp_path, capsys):
    # 80% additive-horizontal, 20% subtractive: the planted horizontal band
    # must out-mass any equally tall vertical band.
    config = {
        "seed": 5,
        "questions": [{"question_id": "q1", "difficulty": 1, "max_score": 1.0}],
        "cohorts": [
            {"name": "horizontal", "sessions_per_question": 80,
             "pattern": {"kind": "additive_horizontal", "jitter_sigma": 0.02,
                         "samples_per_leg": 8}},
            {"name": "subtractive", "sessions_per_question": 20,
             "pattern": {"kind": "subtractive", "jitter_sigma": 0.02,
                         "samples_per_leg": 8}},
        ],
    }
    (tmp_path / "config.json").write_text(json.dumps(config))
    assert main(["generate", "--config", str(tmp_path / "config.json"),
                 "--out", str(tmp_path)]) == 0
    assert main(["heatmap", "--events", str(tmp_path / "events.jsonl"),
                 "--question", "q1", "--sigma", "0",
                 "--out", str(tmp_path / "grid")]) == 0
    data = json.loads((tmp_path / "grid.json").read_text())
    cells = np.array(data["cells"]).reshape(data["height"], data["width"])
    res = data["width"]
    band = int(0.12 * res)  # matches the planted 2 * 0.06 corridor
    y_center = int(0.5 * res)
    row_mass = cells[y_center - band // 2 : y_center + band // 2 + 1, :].sum()
    col_masses = [
        cells[:, i : i + band + 1].sum() for i in range(res - band)
    ]
    assert row_mass > max(col_masses)


def test_transitions_cohorts_have_opposite_scores(ordering_dir, tmp_path, capsys):
    base = ["transitions", "--events", str(ordering_dir / "events.jsonl"),
            "--question", "q1", "--roi-size", "0.05",
            "--meta", str(ordering_dir / "meta.json")]
    assert main(base + ["--cohort", "full", "--out", str(tmp_path / "full")]) == 0
    assert main(base + ["--cohort", "wrong", "--out", str(tmp_path / "wrong")]) == 0
    full = json.loads((tmp_path / "full.json").read_text())
    wrong = json.loads((tmp_path / "wrong.json").read_text())
    assert full["ordering_score"] >= 0.9
    assert wrong["ordering_score"] <= -0.9
    dot = (tmp_path / "full.dot").read_text()
    assert dot.startswith("digraph") and "->" in dot


def test_transitions_empty_cohort_ok(ordering_dir, tmp_path, capsys):
    rc = main(["transitions", "--events", str(ordering_dir / "events.jsonl"),
               "--question", "q1", "--cohort", "range:0.4-0.6",
               "--meta", str(ordering_dir / "meta.json"),
               "--out", str(tmp_path / "empty")])
    assert rc == 0
    data = json.loads((tmp_path / "empty.json").read_text())
    assert data["edges"] == [] and data["session_count"] == 0


def test_transitions_invalid_cohort(ordering_dir, tmp_path, capsys):
    rc = main(["transitions", "--events", str(ordering_dir / "events.jsonl"),
               "--question", "q1", "--cohort", "sometimes",
               "--out", str(tmp_path / "x")])
    assert rc == 1


def test_transitions_deterministic(ordering_dir, tmp_path, capsys):
    base = ["transitions", "--events", str(ordering_dir / "events.jsonl"),
            "--question", "q1", "--roi-size", "0.05"]
    assert main(base + ["--out", str(tmp_path / "a")]) == 0
    assert main(base + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.dot").read_bytes() == (tmp_path / "b.dot").read_bytes()


def test_correlate_end_to_end_flags_planted(mislabel_dir, tmp_path, capsys):
    rc = main(["correlate", "--events", str(mislabel_dir / "events.jsonl"),
               "--meta", str(mislabel_dir / "meta.json"),
               "--out", str(tmp_path / "report")])
    assert rc == 0
    report = json.loads((tmp_path / "report.json").read_text())
    flagged = {f["question_id"] for f in report["flagged"]}
    truth = json.loads((mislabel_dir / "truth.json").read_text())
    assert flagged == set(truth["planted_mislabels"])
    csv = (tmp_path / "report.csv").read_text()
    assert csv.startswith("question_id,difficulty,n,mean_score,residual,flagged")
    assert len(csv.strip().split("\n")) == 31


def test_correlate_two_questions_fails(tmp_path, capsys):
    events = tmp_path / "events.jsonl"
    lines = []
    for k, q in enumerate(("q1", "q2")):
        lines.append(json.dumps({"session_id": f"s{k}", "student_id": "u",
                                 "question_id": q, "type": "submit", "t": 1,
                                 "score": 0.5}))
    events.write_text("\n".join(lines) + "\n")
    meta = tmp_path / "meta.json"
    meta.write_text(json.dumps([
        {"question_id": "q1", "difficulty": 1, "max_score": 1},
        {"question_id": "q2", "difficulty": 2, "max_score": 1},
    ]))
    rc = main(["correlate", "--events", str(events), "--meta", str(meta),
               "--out", str(tmp_path / "r")])
    assert rc == 1


def test_generate_missing_config():
    assert main(["generate", "--config", "/nonexistent.json", "--out", "/tmp/x"]) == 2


def test_serve_rejects_occupied_port(ordering_dir):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        proc = subprocess.run(
            [sys.executable, "-m", "solvetrace.cli", "serve",
             "--port", str(port),
             "--data", str(ordering_dir / "events.jsonl")],
            capture_output=True, text=True, timeout=30,
        )
        assert proc.returncode == 2
        assert "cannot bind" in proc.stderr
    finally:
        blocker.close()


def test_serve_end_to_end(ordering_dir):
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    proc = subprocess.Popen(
        [sys.executable, "-m", "solvetrace.cli", "serve",
         "--port", str(port),
         "--data", str(ordering_dir / "events.jsonl"),
         "--meta", str(ordering_dir / "meta.json")],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE,
    )
    try:
        deadline = time.time() + 20
        data = None
        while time.time() < deadline:
            try:
                with urllib.request.urlopen(
                    f"http://127.0.0.1:{port}/api/questions", timeout=2
                ) as resp:
                    data = json.loads(resp.read())
                break
            except Exception:
                if proc.poll() is not None:
                    raise AssertionError(proc.stderr.read().decode())
                time.sleep(0.2)
        assert data is not None, "server never came up"
        assert data[0]["question_id"] == "q1"
    finally:
        proc.terminate()
        proc.wait(timeout=10)
