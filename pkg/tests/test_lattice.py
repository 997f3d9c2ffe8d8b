from fractions import Fraction

import pytest

from cuspidal_tables.core.exceptions import CuspidalTablesError, NotInGroupError
from cuspidal_tables.core.lattice import (Cyclotomic, FinAbGroup, IntMatrix, MultiPoly, format_group,
                                          matrix_rank, mod1, nullspace, parse_rational,
                                          row_echelon, smith_normal_form, solve_rational)

TRIALS = 1000


def random_nonsingular(rng, n, low=-4, high=4):
    while True:
        m = IntMatrix([[rng.randint(low, high) for _ in range(n)] for _ in range(n)])
        if m.det():
            return m


def test_mod1_and_parse_rational():
    assert mod1(Fraction(-1, 3)) == Fraction(2, 3)
    assert mod1(Fraction(7, 2)) == Fraction(1, 2)
    assert mod1(3) == 0
    assert parse_rational("−1/2") == Fraction(-1, 2)
    assert parse_rational(" 5/3 ") == Fraction(5, 3)
    assert parse_rational(4) == 4


def test_solve_and_rank():
    assert solve_rational([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]],
                          [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]
    assert matrix_rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    basis = nullspace([[Fraction(1), Fraction(1), Fraction(0)]], Fraction(1))
    assert len(basis) == 2
    assert all(v[0] + v[1] == 0 for v in basis)
    with pytest.raises(CuspidalTablesError):
        solve_rational([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]], [1, 2])


def test_solve_and_inverse_random(rng):
    for _ in range(TRIALS):
        a = random_nonsingular(rng, 3)
        rhs = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)]
        x = solve_rational([[Fraction(v) for v in row] for row in a.rows], rhs)
        assert [sum(c * v for c, v in zip(row, x)) for row in a.rows] == rhs
        inverse = a.rational_inverse()
        assert [[sum(a[i, k] * inverse[k][j] for k in range(3)) for j in range(3)]
                for i in range(3)] == [[int(i == j) for j in range(3)] for i in range(3)]


@pytest.mark.parametrize("rows,conductor,k", [
    ([[0, -1], [1, -1]], 6, 2),
    ([[0, -1], [1, 0]], 4, 1),
    ([[1, -1], [1, 0]], 6, 1),
])
def test_cyclotomic_eigenspace(rows, conductor, k):
    zeta = Cyclotomic.zeta(conductor, k)
    shifted = [[Cyclotomic.rational(conductor, rows[i][j]) - (zeta if i == j else 0)
                for j in range(2)] for i in range(2)]
    assert matrix_rank(shifted) == 1
    reduced, pivots = row_echelon(shifted)
    assert pivots == [0]
    assert all(isinstance(x, Cyclotomic) for row in reduced for x in row)
    basis = nullspace(shifted, Cyclotomic.rational(conductor, 1))
    assert len(basis) == 1
    v = basis[0]
    assert [sum(c * x for c, x in zip(row, v)) for row in rows] == [zeta * x for x in v]


def test_int_matrix_arithmetic():
    a = IntMatrix([[2, -1], [-1, 2]])
    assert a.det() == 3
    assert a.transpose() == a
    assert (a @ IntMatrix.identity(2)) == a
    assert a @ (1, 1) == (1, 1)
    assert a.charpoly() == [1, -4, 3]
    u = IntMatrix([[2, 1], [1, 1]])
    assert (u @ u.inverse()).is_identity()
    assert u.power(-2) == u.inverse() @ u.inverse()
    with pytest.raises(CuspidalTablesError):
        a.inverse()
    with pytest.raises(ValueError):
        IntMatrix([[1, 2]])


def test_smith_normal_form_random(rng):
    for _ in range(TRIALS):
        a = random_nonsingular(rng, 3)
        smith = smith_normal_form(a)
        assert smith.U @ a @ smith.V == smith.D
        assert abs(smith.U.det()) == 1 and abs(smith.V.det()) == 1
        d = smith.invariant_factors
        assert all(x > 0 for x in d)
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
        assert d[0] * d[1] * d[2] == abs(a.det())
        assert all(smith.D[i, j] == 0 for i in range(3) for j in range(3) if i != j)


def test_fin_ab_group_basics():
    group = FinAbGroup(IntMatrix([[2, 0], [0, 6]]))
    assert group.factors == (2, 6)
    assert group.order == 12
    assert len(set(group.elements())) == 12
    assert group.contains((Fraction(1, 2), Fraction(1, 3)))
    assert not group.contains((Fraction(1, 3), Fraction(0)))
    with pytest.raises(NotInGroupError):
        group.discrete_log((Fraction(1, 4), Fraction(0)))
    assert len(group.span([group.discrete_log((Fraction(0), Fraction(1, 3)))])) == 3
    assert group.element_order(group.discrete_log((Fraction(1, 2), Fraction(1, 3)))) == 6


def test_trivial_group():
    group = FinAbGroup(IntMatrix([[1, 1], [0, 1]]))
    assert group.factors == ()
    assert group.order == 1
    assert list(group.elements()) == [()]
    assert format_group(group.factors) == "1"


def test_singular_relations_rejected():
    with pytest.raises(CuspidalTablesError):
        FinAbGroup(IntMatrix([[1, 2], [2, 4]]))


def test_fin_ab_group_random_round_trip(rng):
    for _ in range(TRIALS):
        relations = random_nonsingular(rng, 3, -3, 3)
        group = FinAbGroup(relations)
        assert group.order == abs(relations.det())
        a = tuple(rng.randrange(d) for d in group.factors)
        q = group.realize(a)
        assert all(0 <= x < 1 for x in q)
        assert all(v.denominator == 1 for v in (relations @ q))
        assert group.discrete_log(q) == a


def test_characters_are_bilinear(rng):
    group = FinAbGroup(IntMatrix([[3, 0, 0], [0, 3, 0], [1, 1, 9]]))
    elements = list(group.elements())
    for _ in range(TRIALS):
        chi, a, b = (rng.choice(elements) for _ in range(3))
        assert group.character_value(chi, group.add(a, b)) == \
            mod1(group.character_value(chi, a) + group.character_value(chi, b))


def test_character_lift_evaluates_on_realizations():
    group = FinAbGroup(IntMatrix([[2, -1], [-1, 2]]))
    assert group.factors == (3,)
    for chi in group.elements():
        lam = group.character_lift(chi)
        for a in group.elements():
            q = group.realize(a)
            assert mod1(sum(l * x for l, x in zip(lam, q))) == group.character_value(chi, a)


def test_endomorphism_and_pull_back():
    group = FinAbGroup(IntMatrix([[2, -1], [-1, 2]]))
    swap = IntMatrix([[0, 1], [1, 0]])
    endo = group.endomorphism(swap)
    for a in group.elements():
        image = group.apply(endo, a)
        assert group.realize(image) == tuple(mod1(x) for x in swap @ group.realize(a))
    for chi in group.elements():
        pulled = group.pull_back_character(endo, chi)
        for a in group.elements():
            assert group.character_value(pulled, a) == group.character_value(chi, group.apply(endo, a))


def test_format_group():
    assert format_group([3, 3]) == "mu3^2"
    assert format_group([2, 6]) == "mu2xmu6"
    assert format_group([]) == "1"


def test_cyclotomic_field():
    z5 = Cyclotomic.zeta(10, 2)
    assert z5 ** 5 == 1
    assert z5 != 1
    assert 1 + z5 + z5 ** 2 + z5 ** 3 + z5 ** 4 == 0
    i = Cyclotomic.zeta(4)
    assert i ** 2 == -1
    assert i.inverse() == -i
    x = Cyclotomic(12, [1, 2, 0, -1])
    assert x * x.inverse() == 1
    assert (x / x) == 1
    assert Cyclotomic.rational(6, Fraction(1, 2)).is_rational()
    with pytest.raises(ZeroDivisionError):
        Cyclotomic(6).inverse()
    with pytest.raises(ValueError):
        Cyclotomic.zeta(6) + Cyclotomic.zeta(4)


def test_multipoly_calculus():
    f = MultiPoly.from_expression("x^2*y - 3*y + 2", ["x", "y"])
    assert f.degree() == 3
    assert not f.is_homogeneous()
    assert f.derivative(0) == MultiPoly.from_expression("2*x*y", ["x", "y"])
    assert f.evaluate([2, 1]) == 3
    assert f.shift([1, 0]).evaluate([1, 1]) == f.evaluate([2, 1])
    g = MultiPoly.from_expression("x*y", ["x", "y"])
    assert (g ** 3).coefficient((3, 3)) == 1
    assert (f - f).is_zero()
    with pytest.raises(ValueError):
        g ** -1
    assert MultiPoly.from_expression("z^2 - 1", ["z"]).univariate_coefficients() == [-1, 0, 1]
