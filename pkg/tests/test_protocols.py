import pytest

from cuspidal_tables.catalog import ExpectedRow
from cuspidal_tables.core.enums import ExitCode
from cuspidal_tables.core.hecke import parse_group_label, parse_hecke_notation
from cuspidal_tables.core.verifier import PROTOCOLS, CaseVerifier, exit_code_of
from cuspidal_tables.protocols import InvolutionProtocol, RankOneProtocol, ReflectionProtocol
from cuspidal_tables.protocols.base import AnalysisOptions, match_rows

QUICK = ["G2,2s", "G2,3s", "G2,6s", "F4,3s", "F4,4s", "F4,6s", "3D4,3s", "3D4,6s",
         "3D4,12s", "E6,6s"]
SLOW = ["E6,12s", "2E6,12s", "F4,2s", "F4,8s", "F4,12s", "E6,3s", "2E6,4s", "2E6,6s", "2E6,18s", "E7,6s",
        "E8,5s", "E8,10s", "E8,15s", "E8,30s"]


def assert_clean(report):
    assert report["success"], report.get("error")
    assert report["exit_code"] == int(ExitCode.OK), \
        [k for k, ok in report["verdicts"].items() if not ok]
    assert all(report["verdicts"].values())


@pytest.mark.parametrize("label", QUICK)
def test_catalog_case(analyzed, label):
    assert_clean(analyzed(label))


@pytest.mark.slow
@pytest.mark.parametrize("label", SLOW)
def test_catalog_case_slow(analyzed, label):
    assert_clean(analyzed(label))


def test_report_layout(analyzed):
    report = analyzed("F4,4s")
    assert report["case"] == "F4,4s"
    assert set(report) >= {"computed", "expected", "verdicts", "skipped", "cited", "exit_code"}
    assert report["computed"]["I_label"] == "mu2^2"
    assert report["verdicts"]["W.order"]
    assert report["computed"]["rows[0].orbit_size"] == 1
    assert report["computed"]["rows[1].orbit_size"] == 3


def test_rank_one_report(analyzed):
    report = analyzed("G2,3s")
    assert report["verdicts"]["rows[0].hecke"]
    assert "rows[1].hecke" in report["cited"]
    assert report["verdicts"]["b_function"]
    assert report["verdicts"]["semi_invariants"]
    assert report["computed"]["rows[0].hecke_source"] == "computed b-function"


def test_dispatch(catalog):
    verifier = CaseVerifier()
    for record in catalog:
        assert isinstance(verifier.protocol_for(record.label), PROTOCOLS[record.family])
    assert isinstance(verifier.protocol_for("G2,2s"), InvolutionProtocol)
    assert isinstance(verifier.protocol_for("F4,4s"), ReflectionProtocol)
    assert isinstance(verifier.protocol_for("E8,20s"), RankOneProtocol)


def test_unknown_case_is_a_usage_error():
    report = CaseVerifier().verify("E9,5s")
    assert not report["success"]
    assert report["exit_code"] == int(ExitCode.USAGE)


def test_prerequisites(record):
    protocol = ReflectionProtocol(record("F4,8s"))
    result = protocol.run()
    assert not result["success"]
    assert result["exit_code"] == int(ExitCode.USAGE)
    assert not InvolutionProtocol(record("F4,4s")).check_prerequisites()["success"]
    assert not RankOneProtocol(record("F4,4s")).check_prerequisites()["success"]


@pytest.mark.slow
def test_heavy_b_function_is_skipped(analyzed):
    report = analyzed("E6,9s")
    assert "b_function" in report["skipped"]
    assert report["computed"]["rows[0].hecke_source"] == "tabulated roots"


def test_exit_code_of():
    assert exit_code_of([]) is ExitCode.OK
    assert exit_code_of([{"exit_code": 0}, {"exit_code": 1}]) is ExitCode.MISMATCH
    assert exit_code_of([{"exit_code": 3}, {"exit_code": 2}]) is ExitCode.INCONSISTENT


def test_state_before_analysis(record):
    state = ReflectionProtocol(record("F4,4s"), AnalysisOptions(golden=False)).get_state()
    assert state["case"] == "F4,4s"
    assert state["family"] == "reflection"
    assert state["classes"] is None
    assert state["fields_checked"] == 0


def row(chi, order, hecke, count=1):
    return ExpectedRow(chi=chi, stabilizer_order=order, hecke=hecke, count=count)


def signature(order, hecke):
    h = parse_hecke_notation(hecke)
    return order, h.fingerprint, h.relation_set()


def test_match_rows_by_signature():
    rows = [row("chi0", 96, "H_{G8,Phi1^3Phi2}"), row("chi1", 32, "H^3G(4,1,2)")]
    signatures = [signature(32, "H^3G(4,1,2)"), signature(96, "H_{G8,Phi1^3Phi2}")]
    assigned = match_rows(signatures, rows)
    assert [r.chi for r in assigned] == ["chi1", "chi0"]


def test_match_rows_counts_and_pins():
    rows = [row("chi0", 6, "H_{mu6,Phi1^6}"), row("chi1", 6, "H_{mu6,Phi1^6}", count=2)]
    signatures = [signature(6, "H_{mu6,Phi1^6}")] * 4
    assigned = match_rows(signatures, rows, pins={2: "chi0"})
    assert [r.chi if r else None for r in assigned] == ["chi1", "chi1", "chi0", None]


def test_match_rows_falls_back_to_order():
    rows = [row("chi0", 12, "H_{W_G2,-1}")]
    assigned = match_rows([(12, parse_group_label("S3"), frozenset())], rows)
    assert assigned[0].chi == "chi0"


@pytest.mark.parametrize("label", ["3D4,6s", pytest.param("2E6,6s", marks=pytest.mark.slow)])
def test_order_six_rank_one_types(analyzed, label):
    report = analyzed(label)
    assert report["computed"]["rank_one_types"] == ["2A2,6s"]
    assert report["verdicts"]["rank_one_types"]
