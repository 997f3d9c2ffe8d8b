"""
Printed generator tables: gamma_k, class representatives, nu_i and t_i(gamma_k)
"""

import dataclasses

import pytest

from cuspidal_tables.catalog import load_catalog
from cuspidal_tables.core.verifier import CaseVerifier
from cuspidal_tables.protocols import ReflectionProtocol
from cuspidal_tables.protocols.base import AnalysisOptions

GOLDEN = [r.label for r in load_catalog() if r.golden]
QUICK = {"3D4,3s", "F4,3s", "F4,4s", "E6,6s"}


def golden_case(label):
    marks = [] if label in QUICK else [pytest.mark.slow]
    return pytest.param(label, marks=marks, id=label)


def golden_verdicts(report):
    return {k: ok for k, ok in report["verdicts"].items() if k.startswith("golden.")}


def test_golden_cases_are_reflection_cases(catalog):
    assert len(GOLDEN) == 11
    assert QUICK <= set(GOLDEN)
    for record in catalog:
        if record.golden:
            assert record.has_theta and record.grading.rank >= 2, record.label


@pytest.mark.parametrize("label", [golden_case(label) for label in GOLDEN])
def test_printed_tables(analyzed, label):
    report = analyzed(label)
    assert report["success"], report.get("error")
    verdicts = golden_verdicts(report)
    assert "golden.gamma" in verdicts
    assert "golden.beta" in verdicts
    assert all(verdicts.values()), [k for k, ok in verdicts.items() if not ok]


def test_f4_order_four_counts(analyzed):
    report = analyzed("F4,4s")
    computed, expected = report["computed"], report["expected"]
    # six classes, two printed local generators and t_i images on two gammas
    assert computed["golden.local"] == expected["golden.local"] == 6
    assert computed["golden.t_gamma"] == expected["golden.t_gamma"] == 12
    assert computed["golden.coroot_images"] == 4
    assert computed["golden.w_chi0"] == 1


@pytest.mark.slow
def test_e6_order_three_endoscopy_grid(analyzed):
    report = analyzed("E6,3s")
    assert report["verdicts"]["golden.endoscopy_grid"]
    assert report["computed"]["golden.endoscopy_special"] == \
        sorted(["010", "102", "112", "122", "020", "201", "221", "211"])


def test_golden_tables_can_be_switched_off():
    report = CaseVerifier(AnalysisOptions(golden=False)).verify("F4,4s")
    assert report["success"]
    assert not golden_verdicts(report)
    assert all(report["verdicts"].values())


def test_f4_order_three_misprinted_image_is_skipped(analyzed, record):
    report = analyzed("F4,3s")
    computed, expected = report["computed"], report["expected"]
    # two rows of eight images less t4(gamma1)
    assert computed["golden.t_gamma"] == expected["golden.t_gamma"] == 15
    assert record("F4,3s").golden["skip"] == {"t_gamma": [[1, 4]]}
    assert report["verdicts"]["golden.t_gamma"]


def test_without_the_skip_the_misprint_is_the_only_mismatch(record):
    source = record("F4,3s")
    golden = {k: v for k, v in source.golden.items() if k != "skip"}
    report = ReflectionProtocol(dataclasses.replace(source, golden=golden, errata=())).run()
    assert report["computed"]["golden.t_gamma"] == 15
    assert report["expected"]["golden.t_gamma"] == 16
    assert [k for k, ok in report["verdicts"].items() if not ok] == ["golden.t_gamma"]


@pytest.mark.slow
@pytest.mark.parametrize("label, field, count", [
    ("E6,3s", "golden.words", 8),
    ("E7,6s", "golden.local", 19),
    ("E8,4s", "golden.shared", 286),
    ("E8,5s", "golden.t_gamma", 23),
    ("E8,8s", "golden.w_images", 8),
    ("E8,3s", "golden.w_images", 8),
])
def test_corrected_and_skipped_entries(analyzed, label, field, count):
    report = analyzed(label)
    assert report["computed"][field] == report["expected"][field] == count
    assert report["verdicts"][field]


@pytest.mark.slow
def test_e8_order_three_reflections_on_nu(analyzed):
    report = analyzed("E8,3s")
    computed, expected = report["computed"], report["expected"]
    # rows are t39, t36, t40, t35 on all forty nu_i
    assert computed["golden.t_nu"] == expected["golden.t_nu"] == 160
    assert "golden.t_gamma" not in computed
    assert computed["golden.beta"] == {"classes": 40, "distinct": 40}
    assert report["exit_code"] == 0
