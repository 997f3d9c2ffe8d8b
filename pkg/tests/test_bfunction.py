import itertools
from fractions import Fraction

import pytest
import sympy

from cuspidal_tables.catalog import load_identities
from cuspidal_tables.core.bfunction import (S, b_exp, b_function, classify_orbit_g2, grid_check,
                                            lattice_condition, leibniz_ratio, literal_ratio,
                                            orbit_dimensions, orbit_grid_census, rational_roots,
                                            restrict_psi, stated_b, stated_roots, verify_identity,
                                            verify_semi_invariants)
from cuspidal_tables.core.enums import CaseFamily, OrbitLabel
from cuspidal_tables.core.exceptions import (CatalogError, CuspidalTablesError, IncompleteCyclotomicError,
                                             LatticeConditionError, NotNilpotentError)
from cuspidal_tables.core.hecke import CycloFactorization, parse_hecke_notation
from cuspidal_tables.core.lattice import MultiPoly

P = CycloFactorization.parse


@pytest.fixture(scope="module")
def g2(record):
    return record("G2,3s").prehom_case


@pytest.fixture(scope="module")
def f4(record):
    return record("F4,8s").prehom_case


@pytest.mark.parametrize("roots,expected", [
    (["0", "0", "0", "1/2", "-1/6", "1/6"], "Phi1^3Phi2Phi6"),
    (["1/3", "2/3", "1"], "Phi1Phi3"),
    (["1/4", "3/4", "-1/4", "5/4"], "Phi4^2"),
    ([], "1"),
])
def test_b_exp(roots, expected):
    assert b_exp(roots) == P(expected)


def test_b_exp_needs_full_packets():
    with pytest.raises(IncompleteCyclotomicError):
        b_exp(["1/3"])
    with pytest.raises(IncompleteCyclotomicError):
        b_exp(["1/5", "2/5", "3/5", "4/5", "1/5"])


@pytest.mark.parametrize("s1,expected", [
    (0, ["-1/6", "0", "0", "0", "1/6", "1/2"]),
    (1, ["-1/6", "0", "0", "1/6", "1/2", "1"]),
    (2, ["-1/6", "0", "0", "1/6", "1", "3/2"]),
])
def test_g2_stated_roots(g2, s1, expected):
    assert sorted(stated_roots(g2, [s1])) == [Fraction(x) for x in expected]


@pytest.mark.parametrize("s,expected", [
    (["0", "0", "0"], "Phi1^5Phi2Phi4"),
    (["0", "1/2", "0"], "Phi1^5Phi2^3"),
])
def test_f4_relations_from_roots(f4, s, expected):
    assert b_exp(stated_roots(f4, s)) == P(expected)


def test_rank_one_rows_match_their_roots(catalog):
    for record in catalog:
        if record.family is not CaseFamily.RANK_ONE:
            continue
        case = record.prehom_case
        for row in record.rows:
            if row.cited:
                continue
            relation = b_exp(stated_roots(case, record.row_exponents(row)))
            expected = parse_hecke_notation(row.hecke)
            assert expected.relations == (relation,), f"{record.label} {row.chi}"
            assert relation.degree() == row.stabilizer_order, f"{record.label} {row.chi}"


def test_principal_degrees(record):
    for label, degree in (("F4,12s", 12), ("E8,30s", 30), ("G2,6s", 6)):
        case = record(label).prehom_case
        assert case.degree == degree
        assert len(case.roots) == degree


def test_lattice_condition(f4):
    assert lattice_condition(f4, ["0", "1/2", "0"])
    assert not lattice_condition(f4, ["0", "1/3", "0"])
    assert not lattice_condition(f4, ["1/2", "0", "0"])
    with pytest.raises(LatticeConditionError):
        lattice_condition(f4, ["0"])


def test_restrict_psi(f4):
    assert restrict_psi(f4, ["0", "0", "0"]).is_trivial
    chi = restrict_psi(f4, ["0", "1/2", "0"])
    assert chi.coords == (1,)
    assert not chi.is_trivial
    with pytest.raises(LatticeConditionError):
        restrict_psi(f4, ["0", "1/3", "0"])


@pytest.mark.parametrize("label", ["G2,3s", "F4,8s"])
def test_semi_invariants(record, label):
    report = verify_semi_invariants(record(label).prehom_case)
    assert report.ok, report.failures
    assert report.checks


def test_leibniz_laplacian_of_a_power():
    q = MultiPoly.from_expression("x^2 + y^2", ["x", "y"])
    laplacian = MultiPoly.from_expression("x^2 + y^2", ["x", "y"])
    ratio = leibniz_ratio([q], [1], laplacian, (Fraction(1), Fraction(2)))
    # Laplacian of (x^2+y^2)^s is 4 s^2 (x^2+y^2)^(s-1) in the plane
    z = sympy.Symbol("z0")
    assert sympy.expand(ratio.to_sympy([z]) - 4 * z ** 2) == 0


def test_g2_grid_check(g2):
    assert grid_check(g2) > 0


@pytest.mark.slow
def test_f4_grid_check_on_a_cube(f4):
    # s = 2 keeps every exponent at or above its multiplicity
    grid = [(2,) + offsets for offsets in itertools.product((-1, 0, 1), repeat=3)]
    assert grid_check(f4, grid=grid) == 27


def test_literal_ratio_is_proportional_to_b(g2):
    ratios = []
    for s, s1 in ((1, 0), (2, 0), (2, 1)):
        exponents = [s] + [f.multiplicity * s - s1 for f in g2.invariants[1:]]
        b = stated_b(g2, [s1]).subs(S, s)
        ratios.append(literal_ratio(g2, exponents) / Fraction(str(b)))
    assert len(set(ratios)) == 1
    assert ratios[0] != 0


@pytest.mark.parametrize("s1", [0, 1, 2])
def test_g2_b_function(g2, s1):
    b = b_function(g2, [s1])
    assert sympy.expand(b - stated_b(g2, [s1])) == 0
    assert rational_roots(b) == sorted(stated_roots(g2, [s1]))


def test_g2_b_function_symbolic(g2):
    assert sympy.expand(b_function(g2) - stated_b(g2)) == 0


@pytest.mark.slow
def test_f4_b_function(f4):
    b = b_function(f4)
    assert sympy.expand(b - stated_b(f4)) == 0
    for s in (["0", "0", "0"], ["0", "1/2", "0"]):
        assert rational_roots(b_function(f4, s)) == sorted(stated_roots(f4, s))


def test_heavy_cases_need_the_flag(record):
    case = record("E6,9s").prehom_case
    assert case.computable == "heavy"
    with pytest.raises(CatalogError):
        b_function(case)


def test_rational_roots_rejects_irrational():
    with pytest.raises(CuspidalTablesError):
        rational_roots(S ** 2 - 2)
    assert rational_roots(sympy.expand((S - sympy.Rational(1, 2)) ** 2 * S)) == \
        [Fraction(0), Fraction(1, 2), Fraction(1, 2)]


def test_composite_identities():
    identities = load_identities()
    assert identities
    for identity in identities:
        assert verify_identity(identity), identity.name


@pytest.mark.parametrize("y,label", [
    ((0, 0, 1, 1, 0), OrbitLabel.Z1),
    ((1, 0, 1, 0, 0), OrbitLabel.Z2),
    ((1, 1, 0, 0, 0), OrbitLabel.Z3),
    ((0, 0, 1, 0, 0), OrbitLabel.Z4),
    ((0, 1, 0, 0, 0), OrbitLabel.Z5),
    ((1, 0, 0, 0, 0), OrbitLabel.Z6),
    ((0, 0, 0, 0, 0), OrbitLabel.ZERO),
])
def test_classify_orbit_g2(y, label):
    assert classify_orbit_g2(y) is label


def test_classify_rejects_non_nilpotent():
    with pytest.raises(NotNilpotentError):
        classify_orbit_g2((1, 0, 1, 1, 0))
    with pytest.raises(ValueError):
        classify_orbit_g2((0, 0, 0))


def test_orbit_grid_census():
    census = orbit_grid_census()
    assert census.partition_ok
    assert sum(census.counts.values()) + census.non_nilpotent == 5 ** 5
    assert all(count > 0 for count in census.counts.values())
    assert census.counts[OrbitLabel.ZERO] == 1


def test_orbit_dimensions_over_f7():
    dims = orbit_dimensions(7)
    assert {label: dim for label, (_, dim) in dims.items()} == \
        {label: label.dimension for label in OrbitLabel}
    assert dims[OrbitLabel.ZERO] == (1, 0)
    assert dims[OrbitLabel.Z6] == (6, 1)
