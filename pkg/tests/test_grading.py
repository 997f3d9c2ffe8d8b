import pytest

from cuspidal_tables.catalog import load_catalog
from cuspidal_tables.core.exceptions import CatalogError, NonStableGradingError
from cuspidal_tables.core.grading import (GradingCase, build_theta, cartan_subspace,
                                          orbit_representatives, tau_character, theta_orbits,
                                          torus_fixed_points)
from cuspidal_tables.core.hecke import CycloFactorization

STATED = [r.label for r in load_catalog() if r.has_theta]
SEARCHED = {"E8,12s"}


def stated(label):
    marks = [pytest.mark.slow] if label in SEARCHED else []
    return pytest.param(label, marks=marks, id=label)


@pytest.fixture(scope="module")
def theta_of(record):
    cache = {}

    def get(label):
        if label not in cache:
            cache[label] = build_theta(record(label).grading)
        return cache[label]
    return get


@pytest.mark.parametrize("label", [stated(label) for label in STATED])
def test_stated_gradings(record, theta_of, label):
    rec = record(label)
    theta = theta_of(label)
    m = rec.grading.m
    assert theta.power(m).is_identity()
    if rec.grading.charpoly:
        assert theta.charpoly() == CycloFactorization.parse(rec.grading.charpoly)
    orbits = theta_orbits(theta)
    assert len(orbits) * m == theta.datum.num_roots
    group = torus_fixed_points(theta)
    assert group.factors == rec.invariant_factors
    cartan = cartan_subspace(theta, rec.grading.rank)
    assert cartan.dim == rec.grading.rank
    assert not any(tau_character(theta, group, orbits))


def test_every_catalog_grading_is_covered():
    assert "G2,3s" in STATED
    assert "2E6,12s" in STATED
    assert "F4,8s" not in STATED


def test_g2_order_three(theta_of):
    theta = theta_of("G2,3s")
    assert theta.charpoly() == CycloFactorization.parse("Phi3")
    orbits = theta_orbits(theta)
    assert len(orbits) == 4
    assert all(orbit[0] == min(orbit) for orbit in orbits)
    assert [o[0] for o in orbits] == sorted(o[0] for o in orbits)
    assert torus_fixed_points(theta).order == 3


def test_orbit_representatives_lie_in_their_orbits(theta_of):
    theta = theta_of("F4,12s")
    orbits = theta_orbits(theta)
    reps = orbit_representatives(theta, orbits)
    assert all(rep in orbit for rep, orbit in zip(reps, orbits))


@pytest.mark.parametrize("label", ["G2,6s", "F4,4s", "E6,12s"])
def test_theta_acts_by_zeta_on_the_cartan_subspace(theta_of, label):
    theta = theta_of(label)
    cartan = cartan_subspace(theta)
    restricted = cartan.restrict(theta.comatrix)
    for i in range(cartan.dim):
        for j in range(cartan.dim):
            assert restricted[i][j] == (theta.zeta if i == j else 0)


def test_minus_one_is_an_involution(theta_of):
    theta = theta_of("E7,2s")
    assert theta.element == theta.datum.minus_one()
    assert cartan_subspace(theta).dim == 7
    assert torus_fixed_points(theta).factors == (2,) * 7


def test_wrong_order_is_rejected():
    case = GradingCase("G2,2s", "G2", 1, 2, 1, {"word": [2, 1, 2, 1]})
    with pytest.raises(NonStableGradingError):
        build_theta(case)


def test_proper_divisor_order_is_rejected():
    case = GradingCase("G2,6s", "G2", 1, 6, 1, {"word": [2, 1, 2, 1]})
    with pytest.raises(NonStableGradingError):
        build_theta(case)


def test_non_elliptic_is_rejected():
    case = GradingCase("G2,2s", "G2", 1, 2, 1, {"word": [1]})
    with pytest.raises(NonStableGradingError, match="elliptic"):
        build_theta(case)


def test_wrong_charpoly_is_rejected():
    case = GradingCase("G2,3s", "G2", 1, 3, 1, {"word": [2, 1, 2, 1]}, charpoly="Phi6")
    with pytest.raises(NonStableGradingError, match="characteristic polynomial"):
        build_theta(case)


def test_missing_or_unknown_specification():
    with pytest.raises(CatalogError):
        build_theta(GradingCase("F4,8s", "F4", 1, 8, 2))
    with pytest.raises(CatalogError):
        build_theta(GradingCase("G2,3s", "G2", 1, 3, 1, {"frobenius": 1}))


def test_cartan_dimension_mismatch(theta_of):
    with pytest.raises(NonStableGradingError):
        cartan_subspace(theta_of("G2,3s"), rank=2)
