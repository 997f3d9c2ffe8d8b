import pytest

from cuspidal_tables.config import COXETER_NUMBERS
from cuspidal_tables.core.exceptions import NotARootError, UnknownTypeError
from cuspidal_tables.core.rootsys import (SubsystemType, build_root_system, format_root, parse_root,
                                          weyl_component_order)


@pytest.mark.parametrize("label,count,highest", [
    ("G2", 12, (3, 2)),
    ("F4", 48, (2, 3, 4, 2)),
    ("D4", 24, (1, 2, 1, 1)),
    ("E6", 72, (1, 2, 2, 3, 2, 1)),
    ("E7", 126, (2, 2, 3, 4, 3, 2, 1)),
    ("E8", 240, (2, 3, 4, 6, 5, 4, 3, 2)),
])
def test_root_counts_and_highest_root(datum, label, count, highest):
    rs = datum(label)
    assert rs.num_roots == count
    assert rs.highest_root == highest
    # positive roots first, simple roots at the front
    assert all(sum(rs.roots[k]) > 0 for k in range(rs.num_positive))
    assert [tuple(rs.roots[i]) for i in range(rs.rank)] == \
        [tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank)]


@pytest.mark.parametrize("label", ["G2", "F4", "E6", "E7", "E8"])
def test_coxeter_element_order(datum, label):
    assert datum(label).coxeter_element().order() == COXETER_NUMBERS[label]


@pytest.mark.parametrize("label", ["G2", "F4", "E8"])
def test_half_coxeter_power_is_minus_one(datum, label):
    rs = datum(label)
    assert rs.coxeter_element() ** (COXETER_NUMBERS[label] // 2) == rs.minus_one()


def test_reflections(datum):
    rs = datum("F4")
    for a in range(rs.num_positive):
        s = rs.reflection(a)
        assert s.apply_root(a) == a + rs.num_positive
        assert (s * s).is_identity()
        assert s.matrix.det() == -1
    assert rs.simple_reflection(1) == rs.reflection((1, 0, 0, 0))
    with pytest.raises(NotARootError):
        rs.reflection((1, 0, 1, 0))


def test_word_and_inverse(datum):
    rs = datum("E6")
    w = rs.word([1, 3, 4, 2])
    assert (w * w.inverse()).is_identity()
    assert w.inverse() == rs.word([2, 4, 3, 1])
    assert w.matrix @ w.inverse().matrix == rs.identity().matrix
    assert w.commutes_with(rs.minus_one())


def test_diagram_automorphisms(datum):
    e6 = datum("E6")
    sigma = e6.diagram_automorphism(2)
    assert sigma.order() == 2
    assert sigma.image((1, 0, 0, 0, 0, 0)) == (0, 0, 0, 0, 0, 1)
    d4 = datum("D4")
    assert d4.diagram_automorphism(3).order() == 3
    with pytest.raises(UnknownTypeError):
        datum("F4").diagram_automorphism(2)


def test_comatrix_transports_coroots(datum):
    rs = datum("G2")
    w = rs.word([1, 2, 1])
    for k in range(rs.num_roots):
        image = w.apply_root(k)
        assert w.coimage(tuple(rs.coroots[k])) == tuple(int(x) for x in rs.coroots[image])
        assert w.image(tuple(rs.roots[k])) == tuple(int(x) for x in rs.roots[image])


def test_pairing_is_cartan_on_simple_roots(datum):
    rs = datum("G2")
    assert rs.pairing((0, 1), (1, 0)) == -3
    assert rs.pairing((1, 0), (0, 1)) == -1
    assert rs.pairing((1, 0), (1, 0)) == 2


def test_parse_and_format_root():
    assert parse_root("11221100") == (1, 1, 2, 2, 1, 1, 0, 0)
    assert parse_root("−0101") == (0, -1, 0, -1)
    assert format_root((0, -1, 0, -1)) == "-0101"
    assert format_root(parse_root("2342")) == "2342"


def test_e8_roots_from_e_coordinates(datum):
    e8 = datum("E8")
    root = e8.e8_root_from_e("e1+e2")
    e8.index(root)
    assert e8.e8_root_from_e("-e1-e2") == tuple(-x for x in root)
    with pytest.raises(UnknownTypeError):
        datum("E7").e8_root_from_e("e1+e2")


def test_dual_root_system(datum):
    g2 = datum("G2")
    dual = g2.dual
    assert dual.num_roots == 12
    assert dual.lengths == (3, 1)
    assert dual.cartan == g2.cartan.transpose()


def support_subsystem(rs, support):
    """Roots supported on the given simple roots (1-based)"""
    return [k for k in range(rs.num_roots)
            if all(rs.roots[k][i] == 0 for i in range(rs.rank) if i + 1 not in support)]


def test_subsystem_types(datum):
    e8 = datum("E8")
    assert e8.subsystem_type(range(e8.num_roots)).label == "E8"
    assert e8.subsystem_type(support_subsystem(e8, {1, 2, 3, 4, 5})).label == "D5"
    mixed = e8.subsystem_type(support_subsystem(e8, {1, 3, 5, 6, 8}))
    assert mixed.label == "A1xA2^2"
    assert mixed.weyl_label() == "S3^2xS2"
    assert mixed.weyl_order() == 72
    g2 = datum("G2")
    assert g2.subsystem_type([k for k in range(12) if g2.is_long(k)]).label == "A2"
    f4 = datum("F4")
    assert f4.subsystem_type([k for k in range(48) if f4.is_long(k)]).label == "D4"
    assert e8.subsystem_type([]).label == "1"
    with pytest.raises(NotARootError):
        e8.subsystem_type([0])


def test_weyl_labels():
    assert SubsystemType((("B", 3), ("A", 1))).weyl_label() == "W3xS2"
    assert SubsystemType((("D", 5),)).weyl_label() == "W5'"
    assert SubsystemType((("E", 6),)).weyl_label() == "W_E6"
    assert SubsystemType((("A", 2),) * 3).label == "A2^3"
    assert weyl_component_order("D", 4) == 192
    assert weyl_component_order("B", 4) == 384
    assert weyl_component_order("E", 7) == 2903040


def test_unknown_type():
    with pytest.raises(UnknownTypeError):
        build_root_system("H3")
