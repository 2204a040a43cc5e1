import json

import pytest

from main import main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in (
        "SEMIGROUP_ELEMENT_CAP",
        "SEMIGROUP_TABLE_MEMORY_MB",
        "SEMIGROUP_EXHAUSTIVE_LIMIT",
        "SEMIGROUP_SAMPLE_PAIRS",
        "SEMIGROUP_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)


def _builtin(tmp_path, name, *extra):
    path = tmp_path / f"{name}.json"
    assert main(["builtin", name, "--output", str(path), *extra]) == 0
    return path


def test_builtin_prints_generator_file(capsys):
    assert main(["builtin", "rook-2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["degree"] == 2
    assert data["name"] == "rook-2"
    assert data["generators"] == [[1, 0], [0, None]]


def test_unknown_builtin(capsys):
    assert main(["builtin", "cube-3"]) == 2
    assert "Unknown builtin" in capsys.readouterr().err


def test_analyze_r3(tmp_path, capsys):
    source = _builtin(tmp_path, "rook-3")
    output = tmp_path / "report.json"
    assert main(["analyze", "--input", str(source), "--output", str(output)]) == 0
    report = json.loads(output.read_text())
    assert report["table"]["size"] == 34
    assert report["conjugacy"]["counts"] == {"brute_force": 7, "structural": 7, "g_conjugacy": 10, "cycle_type": 7}
    assert report["conjugacy"]["partitions_agree"]
    assert report["conjugacy"]["group_class_sum"] == 7
    assert report["lift_count"] == 7
    assert report["representations"]["degree_square_sum"] == 34
    assert report["bijection_verdict"] == "PASS"
    assert "Bijection verdict: PASS" in capsys.readouterr().out


def test_reports_are_byte_identical(tmp_path):
    source = _builtin(tmp_path, "rook-2")
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["analyze", "--input", str(source), "--output", str(first)]) == 0
    assert main(["analyze", "--input", str(source), "--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_analyze_over_prime_field(tmp_path):
    source = _builtin(tmp_path, "rook-3")
    output = tmp_path / "report.json"
    assert main(["analyze", "--input", str(source), "--output", str(output), "--field", "fp:5"]) == 0
    report = json.loads(output.read_text())
    assert report["representations"]["field"] == "GF(5)"
    assert report["representations"]["degree_identity"] is None
    assert report["bijection_verdict"] == "PASS"


def test_skip_reps(tmp_path):
    source = _builtin(tmp_path, "sym-3")
    output = tmp_path / "report.json"
    assert main(["analyze", "--input", str(source), "--output", str(output), "--skip-reps"]) == 0
    report = json.loads(output.read_text())
    assert report["representations"] is None
    assert report["bijection_verdict"] == "SKIPPED"


def test_non_inverse_input_exits_3(tmp_path, capsys):
    source = _builtin(tmp_path, "chain-3")
    output = tmp_path / "error.json"
    assert main(["analyze", "--input", str(source), "--output", str(output)]) == 3
    error = json.loads(output.read_text())
    assert error["exit_code"] == 3
    assert error["error"] == "not an inverse semigroup"
    assert "not an inverse semigroup" in capsys.readouterr().err


def test_bad_characteristic_exits_3(tmp_path):
    source = _builtin(tmp_path, "rook-3")
    assert main(["analyze", "--input", str(source), "--field", "fp:2"]) == 3


def test_malformed_input_exits_2(tmp_path):
    source = tmp_path / "broken.json"
    source.write_text("{not json")
    assert main(["analyze", "--input", str(source)]) == 2
    missing = {"degree": 2}
    source.write_text(json.dumps(missing))
    assert main(["verify", "--input", str(source)]) == 2
    assert main(["verify", "--input", str(tmp_path / "absent.json")]) == 2
    assert main(["analyze", "--input", str(source), "--field", "fp:4"]) == 2


def test_element_cap_exits_4(tmp_path):
    source = _builtin(tmp_path, "rook-3")
    output = tmp_path / "error.json"
    assert main(["analyze", "--input", str(source), "--cap", "10", "--output", str(output)]) == 4
    assert json.loads(output.read_text())["error"] == "resource cap"


def test_verify_r2(tmp_path, capsys):
    source = _builtin(tmp_path, "rook-2")
    output = tmp_path / "verify.json"
    assert main(["verify", "--input", str(source), "--output", str(output)]) == 0
    report = json.loads(output.read_text())
    assert report["verdict"] == "PASS"
    assert report["size"] == 7
    statuses = {r["name"]: r["status"] for r in report["invariants"]}
    assert statuses["counterexample_check"] == "SKIPPED"
    assert "Verdict: PASS" in capsys.readouterr().out


def test_environment_configures_cap(tmp_path, monkeypatch):
    source = _builtin(tmp_path, "rook-3")
    monkeypatch.setenv("SEMIGROUP_ELEMENT_CAP", "20")
    assert main(["analyze", "--input", str(source), "--skip-reps"]) == 4
    monkeypatch.setenv("SEMIGROUP_ELEMENT_CAP", "many")
    assert main(["analyze", "--input", str(source)]) == 2


def test_table_memory_budget_exits_4(tmp_path, monkeypatch):
    source = _builtin(tmp_path, "rook-5")
    output = tmp_path / "error.json"
    monkeypatch.setenv("SEMIGROUP_TABLE_MEMORY_MB", "1")
    assert main(["analyze", "--input", str(source), "--output", str(output), "--skip-reps"]) == 4
    error = json.loads(output.read_text())
    assert error["error"] == "resource cap"
    assert "product table budget" in error["detail"]


def test_reports_echo_the_audit_seed(tmp_path):
    source = _builtin(tmp_path, "rook-2")
    output = tmp_path / "verify.json"
    assert main(["verify", "--input", str(source), "--output", str(output), "--seed", "7"]) == 0
    assert json.loads(output.read_text())["audit_seed"] == 7
    assert main(["analyze", "--input", str(source), "--output", str(output)]) == 0
    assert json.loads(output.read_text())["audit_seed"] == 0
