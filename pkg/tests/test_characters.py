from fractions import Fraction

import pytest

from cuspidal_tables.core.characters import (CharacterOfI, act, character_endoscopy,
                                             character_from_values, class_restriction, dual_orbits,
                                             endoscopic_subsystem, involution_stabilizer,
                                             reflection_class_count, stabilizer)
from cuspidal_tables.core.exceptions import CatalogError, NoLiftError
from cuspidal_tables.core.grading import build_theta, torus_fixed_points
from cuspidal_tables.core.hecke import (CycloFactorization, parse_group_label, parse_hecke_notation,
                                        untwisted_components)
from cuspidal_tables.core.rootsys import SubsystemType

P = CycloFactorization.parse


def reflection_orbits(lwg):
    group = lwg.group
    return dual_orbits(group, [group.endomorphism(t.element.comatrix) for t in lwg.reflections])


@pytest.fixture(scope="module")
def involution(record):
    theta = build_theta(record("G2,2s").grading)
    group = torus_fixed_points(theta)
    datum = theta.datum
    reflections = [datum.simple_reflection(i) for i in range(1, datum.rank + 1)]
    orbits = dual_orbits(group, [group.endomorphism(s.comatrix) for s in reflections])
    return theta, group, orbits


def test_character_values():
    chi = CharacterOfI((1, 0, 3), (2, 2, 4))
    assert chi.values == (Fraction(1, 2), Fraction(0), Fraction(3, 4))
    assert chi.order == 4
    assert not chi.is_trivial
    assert chi.render() == "(1/2, 0, 3/4)"
    assert CharacterOfI((0,), (3,)).is_trivial
    assert CharacterOfI((), ()).order == 1


def test_f4_order_four_orbits(little_weyl):
    orbits = reflection_orbits(little_weyl("F4,4s"))
    assert [o.size for o in orbits] == [1, 3]
    assert orbits[0].representative.is_trivial
    assert orbits[1].representative.coords == min(orbits[1].members)


def test_f4_order_four_stabilizers(little_weyl):
    lwg = little_weyl("F4,4s")
    trivial, other = [stabilizer(lwg, orbit) for orbit in reflection_orbits(lwg)]

    assert trivial.stabilizer_order == 96
    assert trivial.reflection_subgroup.fingerprint == parse_group_label("G8")
    assert trivial.reflection_subgroup.hecke.relation_set() == {P("Phi1^3Phi2")}
    assert trivial.quotient_order == 1
    for r in trivial.restrictions:
        assert (r.d, r.ell, r.e) == (1, 1, 1)
        assert r.reduced == P("Phi1^3Phi2")
        assert r.degree_ok

    assert other.stabilizer_order == 32
    expected = parse_hecke_notation("H^3G(4,1,2)")
    assert other.reflection_subgroup.fingerprint == expected.fingerprint
    assert other.reflection_subgroup.hecke.matches(expected)
    assert other.quotient_order == 1
    assert all(r.degree_ok is not False for r in other.restrictions)


def test_class_restriction_of_the_trivial_character(little_weyl):
    lwg = little_weyl("F4,6s")
    t = lwg.reflections[0]
    r = class_restriction(lwg.group, lwg.group.identity, t)
    assert (r.order, r.d, r.ell, r.e) == (3, 1, 1, 1)
    assert r.relation == P("Phi1^2Phi2")
    assert r.lifted == r.reduced == r.relation


def test_f4_order_four_endoscopy(little_weyl):
    lwg = little_weyl("F4,4s")
    orbits = reflection_orbits(lwg)
    trivial = character_endoscopy(lwg.theta, lwg.group, orbits[0].representative.coords)
    assert trivial.label == "F4"
    assert len(trivial.roots) == 48
    other = character_endoscopy(lwg.theta, lwg.group, orbits[1].representative.coords)
    assert untwisted_components(other.label) == ("B4",)
    assert other.stable


def test_act_by_the_identity(little_weyl):
    lwg = little_weyl("F4,4s")
    identity = lwg.theta.datum.identity()
    for x in lwg.group.elements():
        assert act(lwg.group, identity, x) == x


def test_involution_orbits_and_stabilizers(involution):
    theta, group, orbits = involution
    assert group.factors == (2, 2)
    assert [o.size for o in orbits] == [1, 3]
    trivial = involution_stabilizer(theta.datum, group, orbits[0])
    assert trivial.stabilizer_order == 12
    assert trivial.reflection_subgroup.fingerprint.order == 12
    assert trivial.reflection_subgroup.subsystem.label == "G2"
    other = involution_stabilizer(theta.datum, group, orbits[1])
    assert other.stabilizer_order == 4
    assert other.reflection_subgroup.label == "S2^2"
    assert other.reflection_subgroup.fingerprint == parse_group_label("S2^2")
    assert other.reflection_subgroup.hecke.relation_set() == {P("Phi1^2")}
    # one quadratic relation per factor of S2 x S2, two for the long and short roots of G2
    assert other.reflection_subgroup.hecke.relations == (P("Phi1^2"), P("Phi1^2"))
    assert other.reflection_subgroup.hecke.matches(parse_hecke_notation("H_{S2,-1}(x)H_{S2,-1}"))
    assert len(trivial.reflection_subgroup.hecke.relations) == 2
    assert other.reflection_subgroup.census_ok


def test_involution_endoscopy(involution):
    theta, group, orbits = involution
    endoscopic = character_endoscopy(theta, group, orbits[1].representative.coords)
    assert endoscopic.label == "A1^2"
    assert endoscopic.stable
    with pytest.raises(NoLiftError):
        endoscopic_subsystem(theta, (Fraction(1, 3), Fraction(0)))


def test_character_from_values(record):
    theta = build_theta(record("G2,3s").grading)
    group = torus_fixed_points(theta)
    assert group.factors == (3,)
    chi = character_from_values(group, [(1,)], [Fraction(1, 3)])
    assert chi.coords == (1,)
    assert character_from_values(group, [(1,)], [Fraction(0)]).is_trivial
    with pytest.raises(CatalogError):
        character_from_values(group, [(1,)], [Fraction(1, 2)])


@pytest.mark.parametrize("components, count", [
    ((), 0),
    ((("A", 1), ("A", 1)), 2),
    ((("G", 2),), 2),
    ((("B", 3), ("A", 1)), 3),
    ((("E", 7), ("A", 1)), 2),
    ((("C", 3), ("A", 1)), 3),
])
def test_reflection_class_count(components, count):
    assert reflection_class_count(SubsystemType(components)) == count
