import json

import pytest

import cuspidal_tables
from cuspidal_tables.cli import json_report, main, parse_arguments, pretty
from cuspidal_tables.core.enums import ExitCode

QUIET = ["--no-color", "--log-file", ""]


def run(capsys, *argv):
    code = main([*argv, *QUIET])
    return code, capsys.readouterr().out


def test_parse_arguments():
    args = parse_arguments(["bfun", "F4,8s", "--s2", "1/2", "--roots-only"])
    assert args.command == "bfun"
    assert args.s2 == "1/2"
    assert args.s1 is None
    assert args.roots_only
    args = parse_arguments(["tables", "--jobs", "3", "--json"])
    assert args.jobs == 3 and args.json
    with pytest.raises(SystemExit):
        parse_arguments([])


@pytest.mark.parametrize("text,expected", [
    ("Phi1^3Phi2Phi6", "Φ1³Φ2Φ6"),
    ("mu5^2", "μ5²"),
    ("H_{G8,Phi1^3Phi2}", "H_{G8,Φ1³Φ2}"),
    ("G(4,1,2)", "G(4,1,2)"),
])
def test_pretty(text, expected):
    assert pretty(text) == expected


def test_list(capsys):
    code, out = run(capsys, "list")
    assert code == ExitCode.OK
    assert "E8,30s" in out
    assert "2E6,18s" in out


def test_bfun_g2(capsys):
    code, out = run(capsys, "bfun", "G2,3s", "--s1", "0")
    assert code == ExitCode.OK
    assert "b_exp = Φ1³Φ2Φ6" in out
    assert "matches the tabulated roots" in out


def test_bfun_roots_only(capsys):
    code, out = run(capsys, "bfun", "E8,20s", "--roots-only")
    assert code == ExitCode.OK
    assert "b_exp = Φ1⁹Φ2⁵Φ4Φ5" in out
    code, out = run(capsys, "bfun", "F4,8s", "--s2", "1/2", "--roots-only")
    assert code == ExitCode.OK
    assert "b_exp = Φ1⁵Φ2³" in out
    code, out = run(capsys, "bfun", "F4,8s", "--s", "0,1/2,0", "--roots-only")
    assert "b_exp = Φ1⁵Φ2³" in out


def test_bfun_usage_errors(capsys):
    code, out = run(capsys, "bfun", "E8,20s")
    assert code == ExitCode.USAGE
    assert "--roots-only" in out
    code, _ = run(capsys, "bfun", "G2,3s", "--s3", "1")
    assert code == ExitCode.USAGE
    code, _ = run(capsys, "bfun", "G2,3s", "--s", "0,0")
    assert code == ExitCode.USAGE
    code, _ = run(capsys, "bfun", "E8,5s")
    assert code == ExitCode.USAGE


def test_unknown_label(capsys):
    code, _ = run(capsys, "bfun", "E9,5s")
    assert code == ExitCode.USAGE
    code, _ = run(capsys, "analyze", "E9,5s")
    assert code == ExitCode.USAGE


def test_analyze_json(capsys):
    code, out = run(capsys, "analyze", "G2,6s", "--json")
    assert code == ExitCode.OK
    report = json.loads(out)
    assert set(report) == {"case", "computed", "expected", "verdicts"}
    assert report["case"] == "G2,6s"
    assert all(report["verdicts"].values())


def test_analyze_table(capsys):
    code, out = run(capsys, "analyze", "F4,4s")
    assert code == ExitCode.OK
    assert "|W| = 96" in out
    assert "W = G8" in out
    assert "Hecke algebra" in out
    assert "compared fields match" in out


def test_json_report_of_a_failure():
    failure = {"success": False, "case": "E9,5s", "error": "unknown case", "exit_code": 2}
    assert json_report(failure) == {"case": "E9,5s", "error": "unknown case",
                                    "error_type": None, "computed": {}}


def test_banner_carries_no_team_credit(capsys):
    code, out = run(capsys, "list")
    assert code == ExitCode.OK
    assert "Cuspidal Tables" in out
    assert "created by" not in out
    assert not hasattr(cuspidal_tables, "__author__")


def test_analyze_tags_rank_one_hecke_source(capsys):
    code, out = run(capsys, "analyze", "G2,3s")
    assert code == ExitCode.OK
    assert "source" in out
    assert "computed b-function" in out


@pytest.mark.slow
def test_tables_renders_rows_per_case(capsys):
    code, out = run(capsys, "tables", "--jobs", "1")
    assert code == ExitCode.OK
    assert "W_chi^0" in out and "Hecke algebra" in out
    assert "tabulated roots" in out
    assert "computed b-function" in out
    assert "37 of 37 cases match the catalog" in out
