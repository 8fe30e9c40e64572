import json
import subprocess
import sys
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "cocycle_persistence.cli", *args],
        capture_output=True,
        text=True,
    )


def test_validate_good_fixture_exits_zero():
    res = run_cli("validate", str(FIXTURES / "circle.json"))
    assert res.returncode == 0
    assert json.loads(res.stdout)["status"] == "ok"


def test_validate_bad_triangle_exits_one():
    res = run_cli("validate", str(FIXTURES / "badtriangle.json"))
    assert res.returncode == 1
    body = json.loads(res.stdout)
    assert body["diagnostics"]["cocycle_violations"] == [["a", "b", "c"]]


def test_sublevel_edge():
    res = run_cli("sublevel", str(FIXTURES / "edge.json"), "--check")
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert {"kind": "mu", "r": 0, "indices": [1, 1], "value": 1, "tau": None} in body["tables"]


def test_cocycle_circle_with_check():
    res = run_cli("cocycle", str(FIXTURES / "circle.json"), "--theta", "1/2", "--check")
    assert res.returncode == 0
    body = json.loads(res.stdout)
    assert {"kind": "l", "r": 0, "indices": [], "value": 1, "tau": None} in body["tables"]
    assert all(b["death_value"] == "inf" for b in body["bars"] if b["direction"] in ("up", "down"))


def test_missing_input_is_parse_error():
    res = run_cli("validate", str(FIXTURES / "nope.json"))
    assert res.returncode == 1
    assert "ParseError" in res.stderr


def test_vertex_on_level_exit_code():
    res = run_cli("cocycle", str(FIXTURES / "circle.json"), "--theta", "1")
    assert res.returncode == 1
    assert "VertexOnLevel" in res.stderr


def test_out_flag_writes_file(tmp_path):
    target = tmp_path / "out.json"
    res = run_cli("level", str(FIXTURES / "edge.json"), "--out", str(target))
    assert res.returncode == 0
    assert res.stdout == ""
    assert json.loads(target.read_text())["command"] == "level"


def test_byte_identical_outputs():
    commands = [
        ("validate", str(FIXTURES / "circle.json")),
        ("sublevel", str(FIXTURES / "edge.json")),
        ("sublevel", str(FIXTURES / "filled_triangle.json")),
        ("level", str(FIXTURES / "edge.json")),
        ("level", str(FIXTURES / "filled_triangle.json"), "--at", "1/2"),
        ("circle", str(FIXTURES / "two_circles.json"), "--theta", "1/2"),
        ("circle", str(FIXTURES / "arc.json"), "--theta", "2"),
        ("cocycle", str(FIXTURES / "circle.json"), "--theta", "1/2"),
        ("cocycle", str(FIXTURES / "filled_triangle.json"), "--theta", "1/2"),
    ]
    for cmd in commands:
        first = run_cli(*cmd)
        second = run_cli(*cmd)
        assert first.returncode == 0, (cmd, first.stderr)
        assert first.stdout == second.stdout and first.stdout


def test_max_copies_flag():
    res = run_cli("cocycle", str(FIXTURES / "circle.json"), "--theta", "1/2", "--max-copies", "2")
    assert res.returncode == 0
    assert json.loads(res.stdout)["parameters"]["budget"] == "2"


def test_oracle_mismatch_exits_two(monkeypatch):
    from cocycle_persistence import cli
    from cocycle_persistence.errors import Contradiction, OracleMismatch

    def fail_with(exc):
        def boom(args):
            raise exc("forced")

        return boom

    monkeypatch.setattr(cli, "_dispatch", fail_with(OracleMismatch))
    assert cli.main(["validate", str(FIXTURES / "circle.json")]) == 2
    monkeypatch.setattr(cli, "_dispatch", fail_with(Contradiction))
    assert cli.main(["validate", str(FIXTURES / "circle.json")]) == 2
