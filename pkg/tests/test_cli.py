"""Command-line driver tests: exit codes, report schema, byte stability."""

import json
import subprocess
import sys

import pytest

import hpdcalc
from hpdcalc.cli import main

PASSING = (
    "symbol e;\n"
    "category Gr25 over P(10) primitive [0, 0, 0, 0, 2];\n"
    "category Gr25g over P(10) primitive [0, 0, 0, 0, 2];\n"
    "intersect Gr25, Gr25g over P(10) = e;\n"
    "check main_theorem(Gr25, Gr25g);\n"
)

FAILING_DUAL = (
    "symbol c;\n"
    "category R over P(5) primitive [0, c];\n"
    "dual R primitive [0, 0, c + 1];\n"
    "check dual_profile(R);\n"
)

def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_passing_file_exits_zero_and_prints_the_identity(tmp_path, capsys):
    path = write(tmp_path, "ok.hpd", PASSING)
    assert main(["check", path]) == 0
    out = capsys.readouterr().out
    assert "check main_theorem: pass (lhs = rhs = e)" in out


def test_json_report_schema_and_byte_stability(tmp_path):
    path = write(tmp_path, "ok.hpd", PASSING)
    first = tmp_path / "r1.json"
    second = tmp_path / "r2.json"
    assert main(["check", path, "--json", str(first)]) == 0
    assert main(["check", path, "--json", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert list(report) == ["version", "input_digest", "checks", "sods", "warnings"]
    assert report["version"] == hpdcalc.__version__
    assert len(report["input_digest"]) == 64
    (row,) = report["checks"]
    assert list(row) == ["name", "lhs", "rhs", "status", "witness", "notes"]
    assert any("complement of the subset" in w for w in report["warnings"])


def test_failing_check_exits_one_with_witness(tmp_path, capsys):
    path = write(tmp_path, "bad.hpd", FAILING_DUAL)
    assert main(["check", path]) == 1
    assert "witness" in capsys.readouterr().out


def test_underdetermined_exits_three(tmp_path, capsys):
    source = (
        "category A over P(6) primitive [1, 1];\n"
        "category B over P(6) primitive [1];\n"
        "check main_theorem(A, B);\n"
    )
    path = write(tmp_path, "open.hpd", source)
    assert main(["check", path]) == 3
    assert "underdetermined" in capsys.readouterr().out


def test_failure_takes_precedence_over_underdetermined(tmp_path, capsys):
    source = FAILING_DUAL + (
        "category A over P(6) primitive [1, 1];\n"
        "category B over P(6) primitive [1];\n"
        "check main_theorem(A, B);\n"
    )
    path = write(tmp_path, "mixed.hpd", source)
    assert main(["check", path]) == 1
    out = capsys.readouterr().out
    assert "fail" in out and "underdetermined" in out


def test_invalid_file_exits_two_with_span(tmp_path, capsys):
    path = write(tmp_path, "broken.hpd", "category A over P(6 primitive [1];\n")
    assert main(["check", path]) == 2
    err = capsys.readouterr().err
    assert ":1:21:" in err


def test_missing_file_exits_four(capsys):
    assert main(["check", "/nonexistent/x.hpd"]) == 4
    assert "cannot read" in capsys.readouterr().err


def test_unwritable_report_exits_four(tmp_path, capsys):
    path = write(tmp_path, "ok.hpd", PASSING)
    assert main(["check", path, "--json", str(tmp_path / "no" / "dir.json")]) == 4


def test_allow_nonmoderate_gates_validation(tmp_path, capsys):
    path = write(tmp_path, "wide.hpd", "category X over P(2) primitive [1, 1];\n")
    assert main(["check", path]) == 2
    assert "length 2 >= ambient rank 2" in capsys.readouterr().err
    assert main(["check", path, "--allow-nonmoderate"]) == 0


def test_nonmoderate_duality_check_still_errors(tmp_path, capsys):
    source = (
        "category X over P(2) primitive [1, 1];\n"
        "check cone_part1(X, n2=1);\n"
    )
    path = write(tmp_path, "wide.hpd", source)
    assert main(["check", path, "--allow-nonmoderate"]) == 2
    assert "cone_part1" in capsys.readouterr().err


def test_catalog_all_and_single_case(tmp_path, capsys):
    assert main(["catalog"]) == 0
    assert main(["catalog", "gr25-join", "--json", str(tmp_path / "cat.json")]) == 0
    report = json.loads((tmp_path / "cat.json").read_text())
    assert [row["status"] for row in report["checks"]] == ["pass", "pass"]
    capsys.readouterr()


def test_catalog_unknown_name_exits_two(capsys):
    assert main(["catalog", "bogus"]) == 2
    assert "unknown catalog case" in capsys.readouterr().err


def test_prop_defaults_pass_and_reports_are_stable(tmp_path, capsys):
    first = tmp_path / "p1.json"
    second = tmp_path / "p2.json"
    assert main(["prop", "--seed", "3", "--cases", "40", "--json", str(first)]) == 0
    assert main(["prop", "--seed", "3", "--cases", "40", "--json", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    rows = json.loads(first.read_text())["checks"]
    assert [row["name"] for row in rows] == [
        "prop:conservation",
        "prop:join-laws",
        "prop:splitting",
    ]
    capsys.readouterr()


def test_prop_mutation_flag_fails_with_witness(tmp_path, capsys):
    report_path = tmp_path / "mut.json"
    code = main(
        ["prop", "--seed", "1", "--cases", "150", "--mutate-join-bound", "--json", str(report_path)]
    )
    assert code == 1
    rows = json.loads(report_path.read_text())["checks"]
    conservation = rows[0]
    assert conservation["status"] == "fail"
    assert conservation["witness"] is not None
    capsys.readouterr()


def test_prop_zero_cases_and_bad_bounds(capsys):
    assert main(["prop", "--cases", "0"]) == 0
    assert main(["prop", "--max-length", "9"]) == 2
    capsys.readouterr()


def test_console_script_is_installed():
    done = subprocess.run(
        [sys.executable, "-m", "hpdcalc.cli", "catalog", "points-line"],
        capture_output=True,
        text=True,
    )
    assert done.returncode == 0
    assert "points-line:golden: pass" in done.stdout
