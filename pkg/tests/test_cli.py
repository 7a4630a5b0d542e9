"""Command-line interface: exit codes, JSON reports, artifact output."""

import json

import pytest

from z22susy.cli import ACTION_NAMES, IRREP_CASES, main


def test_verify_algebra_passes(capsys):
    assert main(["verify-algebra"]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "[FAIL]" not in out


def test_corrupt_mode_fails(capsys):
    assert main(["verify-algebra", "--corrupt"]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["irreps", "nonsense-case"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_json_report_structure(capsys):
    assert main(["verify-algebra", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ok"] is True
    assert doc["counts"]["failed"] == 0
    assert all(c["status"] in ("pass", "flagged") for c in doc["checks"])


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main(["irreps", "i", "--json", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(target.read_text())
    assert doc["ok"] is True


def test_constrain_artifacts(capsys):
    assert main(["constrain", "--delta", "1,1", "--which", "z",
                 "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    arts = doc["checks"][0]["artifacts"]
    assert set(arts["multiplet"]["matrices"]) == {"H", "Z", "Q10", "Q01"}
    assert arts["superfield"]["delta"] == [1, 1]


def test_constrain_f011(capsys):
    assert main(["constrain", "--which", "f011"]) == 0


@pytest.mark.parametrize("case", IRREP_CASES)
def test_irreps_cases_pass(case, capsys):
    assert main(["irreps", case]) == 0
    capsys.readouterr()


@pytest.mark.parametrize("name", ACTION_NAMES)
def test_action_names_pass(name, capsys):
    assert main(["action", name]) == 0
    capsys.readouterr()


def test_action_reports_boundary(capsys):
    assert main(["action", "b11", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    certs = doc["checks"][0]["artifacts"]["certificates"]
    assert {c["charge"] for c in certs} == {"Q10", "Q01"}
    assert all(c["residue"] is None for c in certs)


def test_verify_all_small(capsys):
    assert main(["verify-all", "--instances", "50"]) == 0
    out = capsys.readouterr().out
    assert "[FAIL]" not in out


def test_bad_delta_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["constrain", "--delta", "banana"])
    assert exc.value.code == 2
