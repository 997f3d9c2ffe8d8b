import copy

import pytest

from cuspidal_tables.catalog import (case_labels, dump_catalog, get_case, load_catalog, load_identities,
                                     normalize_label, parse_catalog, raw_identities, validate_case)
from cuspidal_tables.core.enums import CaseFamily
from cuspidal_tables.core.exceptions import CatalogError
from cuspidal_tables.core.lattice import format_group


def test_catalog_size_and_families(catalog):
    assert len(catalog) == 37
    families = [r.family for r in catalog]
    assert families.count(CaseFamily.REFLECTION) == 17
    assert families.count(CaseFamily.INVOLUTION) == 5
    assert families.count(CaseFamily.RANK_ONE) == 15
    assert len(set(case_labels())) == 37


def test_identities_loaded():
    identities = load_identities()
    assert len(identities) == 4
    assert identities[0].name == "quadratic form and determinant"


@pytest.mark.parametrize("text", ["(E8, 5_s)", "E8 5s", "E8,5s", " E8,,5s "])
def test_normalize_label(text):
    assert normalize_label(text) == "E8,5s"


def test_twisted_labels():
    assert normalize_label("(²E6, 18_s)") == "2E6,18s"
    assert normalize_label("³D4 12s") == "3D4,12s"
    assert get_case("(²E6, 18_s)").grading.twist == 2


def test_unknown_case():
    with pytest.raises(CatalogError, match="unknown case"):
        get_case("E9,5s")


def test_unreadable_catalog(tmp_path):
    with pytest.raises(CatalogError):
        load_catalog(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(CatalogError):
        load_catalog(str(broken))


def test_every_row_count_matches_orbits(catalog):
    for record in catalog:
        assert len(record.expanded_rows()) == record.orbit_count, record.label
        assert record.rows[0].chi == "chi0"


def test_rank_one_records_have_prehomogeneous_data(catalog):
    for record in catalog:
        if record.family is CaseFamily.RANK_ONE:
            assert record.grading.rank == 1
            assert record.has_prehom, record.label
            assert record.prehom_case.k >= 1


def test_known_records(record):
    g2 = record("G2,3s")
    assert format_group(g2.invariant_factors) == "mu3"
    assert g2.orbit_count == 2
    assert g2.group["label"] == "mu6"
    assert g2.rows[1].cited
    f4 = record("F4,8s")
    assert not f4.has_theta
    assert f4.rows[1].exponents() == [0, 0.5, 0]
    assert f4.rows[1].endoscopy == "B4"
    assert record("E8,15s").s_fixed
    assert record("2E6,18s").marks == (2, 3, 2, 1)
    assert record("F4,12s").principal
    assert record("E6,12s").center["order"] == 3


def test_row_exponents(record):
    e8 = record("E8,15s")
    trivial = e8.rows[0]
    assert e8.row_exponents(trivial) == [0] * e8.prehom_case.k


def test_missing_prehomogeneous_data(record):
    with pytest.raises(CatalogError):
        record("E8,5s").prehom_case


def test_dump_is_a_fixed_point(catalog):
    document = dump_catalog(catalog, raw_identities())
    reparsed = parse_catalog(document)
    assert [r.to_dict() for r in reparsed] == document["cases"]
    assert [r.label for r in reparsed] == [r.label for r in catalog]


@pytest.fixture
def g2_case(record):
    return copy.deepcopy(record("G2,3s").to_dict())


def test_validate_accepts_catalog_case(g2_case):
    validate_case(g2_case, 1)


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d.pop("rows"), "missing keys"),
    (lambda d: d.update(type="H4"), "unknown type"),
    (lambda d: d.update(family="sporadic"), "unknown family"),
    (lambda d: d.update(orbits=5), "rows for 5 orbits"),
    (lambda d: d.update(rows=list(reversed(d["rows"]))), "trivial character"),
    (lambda d: d.update(theta={"frobenius": 1}), "bad theta"),
    (lambda d: d.update(w_generator={"word": [1], "coxeter": 1}), "bad W generator"),
    (lambda d: d["rows"][0].update(hecke="H_{mu6,Q7}"), "cannot parse"),
    (lambda d: d.pop("prehom"), "prehomogeneous data"),
])
def test_validate_rejects(g2_case, mutate, message):
    mutate(g2_case)
    with pytest.raises(CatalogError, match=message):
        validate_case(g2_case, 3)


def test_version_mismatch(catalog):
    document = dump_catalog(catalog)
    document["version"] = "0.1"
    with pytest.raises(CatalogError, match="version"):
        parse_catalog(document)


def test_duplicate_labels(catalog):
    document = dump_catalog([catalog[0], catalog[0]])
    with pytest.raises(CatalogError, match="duplicate"):
        parse_catalog(document)


def test_trivial_i_order_six_cases_have_unitary_rank_one_type(catalog):
    # I = 1 forces trivial local groups, so every A2 class gives (2A2, 6s)
    for record in catalog:
        if record.family is CaseFamily.REFLECTION and record.grading.m == 6 and not record.invariant_factors:
            assert record.rank_one_types == ("2A2,6s",), record.label


def test_errata_accompany_skipped_entries(catalog):
    for record in catalog:
        if record.golden and record.golden.get("skip"):
            assert record.errata, record.label
