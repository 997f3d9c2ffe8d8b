"""
Exact integer, rational and cyclotomic arithmetic
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices.domainmatrix import DomainMatrix

from cuspidal_tables.core.exceptions import CuspidalTablesError, NotInGroupError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


def mod1(x: Rational) -> Fraction:
    """Representative of x in [0, 1)"""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse a catalog rational such as "3/4", "-1/2" or "2"

    Args:
        text: String, integer or Fraction

    Returns:
        Fraction: The parsed value
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(text.strip().replace("−", "-"))


def _qq(x: Rational):
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


@lru_cache(maxsize=None)
def _cyclotomic_field(conductor: int):
    """Q(zeta_N) as a sympy algebraic field generated by exp(2 pi i / N)"""
    return QQ.algebraic_field(sympy.exp(2 * sympy.pi * sympy.I / conductor))


def _conductor(rows: Sequence[Sequence]) -> Optional[int]:
    return next((x.conductor for row in rows for x in row if isinstance(x, Cyclotomic)), None)


def _domain_matrix(rows: Sequence[Sequence], conductor: Optional[int]) -> DomainMatrix:
    """Rows as a DomainMatrix over QQ, or over Q(zeta_N) when a conductor is given"""
    shape = (len(rows), len(rows[0]))
    if conductor is None:
        return DomainMatrix([[_qq(x) for x in row] for row in rows], shape, QQ)
    field = _cyclotomic_field(conductor)

    def convert(x):
        if not isinstance(x, Cyclotomic):
            x = Cyclotomic.rational(conductor, x)
        # dense representation, leading coefficient first
        return field([_qq(c) for c in reversed(x.coeffs)])

    return DomainMatrix([[convert(x) for x in row] for row in rows], shape, field)


def _from_domain(value, conductor: Optional[int]):
    if conductor is None:
        return _fraction(value)
    return Cyclotomic(conductor, [_fraction(c) for c in reversed(value.to_list())])


def _entries(matrix: DomainMatrix, conductor: Optional[int]) -> List[List]:
    return [[_from_domain(x, conductor) for x in row] for row in matrix.to_ddm()]


def solve_rational(matrix: Sequence[Sequence], rhs: Sequence) -> List:
    """
    Solve a square nonsingular linear system over any exact field

    Entries may be Fractions or Cyclotomic numbers; the system is solved
    by sympy's LU decomposition over QQ or the matching cyclotomic field.

    Args:
        matrix: Square coefficient rows
        rhs: Right-hand side

    Returns:
        list: The unique solution
    """
    n = len(matrix)
    conductor = _conductor(list(matrix) + [list(rhs)])
    system = _domain_matrix(matrix, conductor)
    if system.rank() < n:
        raise CuspidalTablesError("singular linear system")
    solution = system.lu_solve(_domain_matrix([[b] for b in rhs], conductor))
    return [row[0] for row in _entries(solution, conductor)]


def row_echelon(rows: Sequence[Sequence]) -> Tuple[List[List], List[int]]:
    """
    Reduced row echelon form over an exact field

    Args:
        rows: Matrix rows (Fractions or Cyclotomic numbers)

    Returns:
        tuple: (nonzero reduced rows, pivot column indices)
    """
    if not rows:
        return [], []
    conductor = _conductor(rows)
    reduced, pivots = _domain_matrix(rows, conductor).rref()
    return _entries(reduced, conductor)[:len(pivots)], list(pivots)


def matrix_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return _domain_matrix(rows, _conductor(rows)).rank()


def nullspace(rows: Sequence[Sequence], one) -> List[List]:
    """
    Basis of the right kernel of a matrix, in echelon form

    The returned vectors have the identity on the free columns, so the
    free-column indices double as the pivot rows of the basis.

    Args:
        rows: Matrix rows
        one: The unit of the coefficient field

    Returns:
        list: Kernel basis vectors
    """
    reduced, pivots = row_echelon(rows)
    ncols = len(rows[0])
    zero = one - one
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


class IntMatrix:
    """Square integer matrix with exact big-integer arithmetic"""

    __slots__ = ("rows", "_key")

    def __init__(self, rows: Iterable[Iterable[int]]):
        self.rows = tuple(tuple(int(x) for x in row) for row in rows)
        if any(len(row) != len(self.rows) for row in self.rows):
            raise ValueError("IntMatrix must be square")
        self._key = None

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(zip(*columns))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.n)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.rows))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            cols = list(zip(*other.rows))
            return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in cols]
                              for row in self.rows])
        return tuple(sum(a * b for a, b in zip(row, other)) for row in self.rows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self.rows])

    def power(self, k: int) -> "IntMatrix":
        if k < 0:
            return self.inverse().power(-k)
        result, base = IntMatrix.identity(self.n), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(self.rows[i][j] == int(i == j) for i in range(self.n) for j in range(self.n))

    def det(self) -> int:
        if self.n == 0:
            return 1
        entries = [[ZZ(x) for x in row] for row in self.rows]
        return int(DomainMatrix(entries, (self.n, self.n), ZZ).det())

    def rational_inverse(self) -> List[List[Fraction]]:
        if not self.det():
            raise CuspidalTablesError("singular matrix")
        return _entries(_domain_matrix(self.rows, None).inv(), None)

    def inverse(self) -> "IntMatrix":
        """Inverse of a unimodular matrix"""
        if abs(self.det()) != 1:
            raise CuspidalTablesError("matrix is not unimodular")
        return IntMatrix([[int(x) for x in row] for row in self.rational_inverse()])

    def charpoly(self) -> List[int]:
        """Characteristic polynomial coefficients, leading coefficient first"""
        poly = sympy.Matrix(self.rows).charpoly(sympy.Symbol("z"))
        return [int(c) for c in poly.all_coeffs()]

    def key(self) -> bytes:
        if self._key is None:
            self._key = ",".join(str(x) for row in self.rows for x in row).encode()
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.rows]})"


@dataclass(frozen=True)
class SmithForm:
    """U·A·V = D with U, V unimodular and D diagonal"""
    U: IntMatrix
    V: IntMatrix
    D: IntMatrix

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(self.D.n))


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """
    Smith normal form of a square integer matrix

    Args:
        A: Square integer matrix

    Returns:
        SmithForm: U, V unimodular with U·A·V = D, d_1 | d_2 | ... and d_i >= 0
    """
    n = A.n
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(target, source, q):
        D[target] = [a + q * b for a, b in zip(D[target], D[source])]
        U[target] = [a + q * b for a, b in zip(U[target], U[source])]

    def add_col(target, source, q):
        for row in D:
            row[target] += q * row[source]
        for row in V:
            row[target] += q * row[source]

    for t in range(n):
        while True:
            candidates = [(abs(D[i][j]), i, j) for i in range(t, n) for j in range(t, n) if D[i][j]]
            if not candidates:
                break
            _, i, j = min(candidates)
            swap_rows(t, i)
            swap_cols(t, j)
            pivot = D[t][t]
            clean = True
            for i in range(t + 1, n):
                q = D[i][t] // pivot
                if q:
                    add_row(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // pivot
                if q:
                    add_col(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            offender = next((i for i in range(t + 1, n) for j in range(t + 1, n)
                             if D[i][j] % pivot), None)
            if offender is None:
                break
            add_row(t, offender, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(IntMatrix(U), IntMatrix(V), IntMatrix(D))


Element = Tuple[int, ...]


class FinAbGroup:
    """
    Finite abelian group {q in (Q/Z)^n : A·q in Z^n} for a nonsingular integer A

    Elements are coordinate vectors (a_1, ..., a_k) with a_i mod d_i over the
    invariant factors d_i > 1 of A. The realization of an element is a vector
    in (Q/Z)^n over the ambient basis (coroots for torus elements).
    """

    def __init__(self, relations: IntMatrix):
        smith = smith_normal_form(relations)
        d = smith.invariant_factors
        if 0 in d:
            raise CuspidalTablesError("relation matrix is singular, the group is infinite")
        self.ambient_dim = relations.n
        self._all_factors = d
        self._vinv = smith.V.inverse()
        kept = [i for i, di in enumerate(d) if di > 1]
        self._kept = tuple(kept)
        self.factors: Tuple[int, ...] = tuple(d[i] for i in kept)
        self.generators: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(mod1(Fraction(smith.V[r, i], d[i])) for r in range(self.ambient_dim))
            for i in kept
        )

    @property
    def order(self) -> int:
        result = 1
        for d in self.factors:
            result *= d
        return result

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def identity(self) -> Element:
        return tuple(0 for _ in self.factors)

    def elements(self) -> Iterator[Element]:
        return itertools.product(*(range(d) for d in self.factors))

    def realize(self, a: Sequence[int]) -> Tuple[Fraction, ...]:
        q = [Fraction(0)] * self.ambient_dim
        for coeff, gen in zip(a, self.generators):
            if coeff:
                q = [x + coeff * g for x, g in zip(q, gen)]
        return tuple(mod1(x) for x in q)

    def discrete_log(self, q: Sequence[Rational]) -> Element:
        """
        Coordinates of a realized element

        Args:
            q: Vector in (Q/Z)^n

        Returns:
            tuple: Invariant-factor coordinates

        Raises:
            NotInGroupError: q is not a member
        """
        p = [sum((Fraction(v) * Fraction(x) for v, x in zip(row, q)), Fraction(0))
             for row in self._vinv.rows]
        coords = []
        for i, (di, pi) in enumerate(zip(self._all_factors, p)):
            scaled = di * pi
            if scaled.denominator != 1:
                raise NotInGroupError(f"{tuple(str(x) for x in q)} is not in the group")
            if di > 1:
                coords.append(int(scaled) % di)
        return tuple(coords)

    def contains(self, q: Sequence[Rational]) -> bool:
        try:
            self.discrete_log(q)
        except NotInGroupError:
            return False
        return True

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def scale(self, a: Element, k: int) -> Element:
        return tuple((k * x) % d for x, d in zip(a, self.factors))

    def element_order(self, a: Element) -> int:
        order = 1
        for x, d in zip(a, self.factors):
            part = d // gcd(x, d)
            order = order * part // gcd(order, part)
        return order

    def span(self, generators: Iterable[Element]) -> frozenset:
        """Subgroup generated by the given elements, as a set of coordinates"""
        gens = [g for g in generators if any(g)]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def endomorphism(self, matrix: IntMatrix) -> Tuple[Tuple[int, ...], ...]:
        """
        Coordinate matrix of an ambient lattice map preserving the group

        Column j is the discrete log of matrix·g_j for the j-th generator g_j.
        """
        columns = [self.discrete_log(matrix @ gen) for gen in self.generators]
        return tuple(zip(*columns)) if columns else ()

    def apply(self, endo: Sequence[Sequence[int]], a: Element) -> Element:
        return tuple(sum(endo[i][j] * a[j] for j in range(len(a))) % d
                     for i, d in enumerate(self.factors))

    def character_value(self, chi: Element, a: Element) -> Fraction:
        """Exponent of chi(a) as an element of [0, 1)"""
        return mod1(sum((Fraction(c * x, d) for c, x, d in zip(chi, a, self.factors)), Fraction(0)))

    def pull_back_character(self, endo: Sequence[Sequence[int]], chi: Element) -> Element:
        """Coordinates of the character chi∘endo"""
        k = len(self.factors)
        result = []
        for j, dj in enumerate(self.factors):
            value = sum((Fraction(chi[i] * endo[i][j] * dj, self.factors[i]) for i in range(k)),
                        Fraction(0))
            if value.denominator != 1:
                raise NotInGroupError("map does not preserve the group")
            result.append(int(value) % dj)
        return tuple(result)

    def character_lift(self, chi: Element) -> Tuple[int, ...]:
        """
        Integer vector lam with chi(q) = exp(2 pi i lam·q) on the group

        The generators are V e_j / d_j for the Smith form U·A·V = D, so
        lam = V^-T mu where mu carries chi on the kept invariant factors.
        """
        mu = [0] * self.ambient_dim
        for value, position in zip(chi, self._kept):
            mu[position] = value
        return self._vinv.transpose() @ mu

    def __repr__(self) -> str:
        return f"FinAbGroup(factors={self.factors})"


def format_group(factors: Sequence[int]) -> str:
    """Render invariant factors as a product of cyclic groups, e.g. mu3^2"""
    if not factors:
        return "1"
    counts: Dict[int, int] = {}
    for d in factors:
        counts[d] = counts.get(d, 0) + 1
    parts = []
    for d in sorted(counts):
        parts.append(f"mu{d}" + (f"^{counts[d]}" if counts[d] > 1 else ""))
    return "x".join(parts)


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> Tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first"""
    z = sympy.Symbol("z")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, z), z)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def cyclotomic_poly(d: int) -> "MultiPoly":
    """
    The d-th cyclotomic polynomial as a univariate MultiPoly

    Args:
        d: Positive index

    Returns:
        MultiPoly: Phi_d in one variable
    """
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    return MultiPoly(1, {(k,): c for k, c in enumerate(cyclotomic_coefficients(d))})


def cyclotomic_conductor(m: int) -> int:
    """Conductor of the field Q(zeta_m) in the even normalization"""
    return m if m % 2 == 0 else 2 * m


class Cyclotomic:
    """Element of Q(zeta_N) as a coefficient vector reduced modulo Phi_N"""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Iterable[Rational] = ()):
        self.conductor = conductor
        self.coeffs = self._reduce(conductor, [Fraction(c) for c in coeffs])

    @staticmethod
    def _reduce(conductor: int, coeffs: List[Fraction]) -> Tuple[Fraction, ...]:
        phi = cyclotomic_coefficients(conductor)
        deg = len(phi) - 1
        c = list(coeffs)
        for i in range(len(c) - 1, deg - 1, -1):
            t = c[i]
            if t:
                for j in range(deg + 1):
                    c[i - deg + j] -= t * phi[j]
        c = c[:deg] + [Fraction(0)] * (deg - len(c))
        return tuple(c)

    @classmethod
    def zeta(cls, conductor: int, k: int = 1) -> "Cyclotomic":
        k %= conductor
        return cls(conductor, [0] * k + [1])

    @classmethod
    def rational(cls, conductor: int, value: Rational) -> "Cyclotomic":
        return cls(conductor, [value])

    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.conductor != self.conductor:
                raise ValueError("mixed cyclotomic conductors")
            return other
        return Cyclotomic.rational(self.conductor, other)

    def __add__(self, other) -> "Cyclotomic":
        other = self._coerce(other)
        return Cyclotomic(self.conductor, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.conductor, [-a for a in self.coeffs])

    def __sub__(self, other) -> "Cyclotomic":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Cyclotomic":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Cyclotomic":
        if not isinstance(other, Cyclotomic):
            other = Fraction(other)
            return Cyclotomic(self.conductor, [a * other for a in self.coeffs])
        other = self._coerce(other)
        product = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[i + j] += a * b
        return Cyclotomic(self.conductor, product)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        deg = len(self.coeffs)
        columns = [(self * Cyclotomic.zeta(self.conductor, j)).coeffs for j in range(deg)]
        rows = [[columns[j][i] for j in range(deg)] for i in range(deg)]
        solution = solve_rational(rows, [Fraction(int(i == 0)) for i in range(deg)])
        return Cyclotomic(self.conductor, solution)

    def __truediv__(self, other) -> "Cyclotomic":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "Cyclotomic":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "Cyclotomic":
        base = self if k >= 0 else self.inverse()
        result = Cyclotomic.rational(self.conductor, 1)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(self.conductor, other)
        return isinstance(other, Cyclotomic) and self.conductor == other.conductor \
            and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.conductor, self.coeffs))

    def key(self) -> Tuple[Fraction, ...]:
        return self.coeffs

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __repr__(self) -> str:
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"Cyclotomic[{self.conductor}](" + (" + ".join(terms) or "0") + ")"


Monomial = Tuple[int, ...]


class MultiPoly:
    """Sparse multivariate polynomial with rational coefficients"""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Dict[Monomial, Rational]] = None):
        self.nvars = nvars
        cleaned = {}
        for mono, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                cleaned[tuple(mono)] = coeff
        self.terms: Dict[Monomial, Fraction] = cleaned

    @classmethod
    def constant(cls, nvars: int, value: Rational) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultiPoly":
        mono = [0] * nvars
        mono[index] = 1
        return cls(nvars, {tuple(mono): 1})

    @classmethod
    def from_expression(cls, text: str, names: Sequence[str]) -> "MultiPoly":
        """
        Parse a polynomial expression over the named variables

        Args:
            text: Expression such as "x2^2*x3^2 - 27*x1^2*x4^2"
            names: Variable names in coordinate order

        Returns:
            MultiPoly: The parsed polynomial
        """
        symbols = sympy.symbols(list(names))
        local = {name: sym for name, sym in zip(names, symbols)}
        expr = sympy.sympify(text.replace("^", "**"), locals=local)
        poly = sympy.Poly(expr, *symbols)
        return cls(len(names), {mono: Fraction(int(c.p), int(c.q)) for mono, c in poly.terms()})

    def to_sympy(self, symbols: Sequence) -> sympy.Expr:
        expr = sympy.Integer(0)
        for mono, coeff in self.terms.items():
            term = sympy.Rational(coeff.numerator, coeff.denominator)
            for sym, e in zip(symbols, mono):
                if e:
                    term *= sym ** e
            expr += term
        return expr

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = Fraction(other)
            return MultiPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def truncated_mul(self, other: "MultiPoly", allowed: frozenset) -> "MultiPoly":
        """Product keeping only monomials in the allowed set"""
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                if mono in allowed:
                    terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, terms)

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = MultiPoly.constant(self.nvars, 1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            other = self._coerce(other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def derivative(self, index: int) -> "MultiPoly":
        terms = {}
        for mono, coeff in self.terms.items():
            e = mono[index]
            if e:
                lowered = list(mono)
                lowered[index] -= 1
                terms[tuple(lowered)] = coeff * e
        return MultiPoly(self.nvars, terms)

    def evaluate(self, point: Sequence[Rational]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for x, e in zip(point, mono):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose with polynomial images of the variables"""
        target = images[0].nvars if images else 0
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i, e):
            if (i, e) not in powers:
                powers[(i, e)] = images[i] ** e
            return powers[(i, e)]

        result = MultiPoly(target)
        for mono, coeff in self.terms.items():
            term = MultiPoly.constant(target, coeff)
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def shift(self, point: Sequence[Rational]) -> "MultiPoly":
        """The polynomial t -> f(point + t)"""
        images = [MultiPoly.variable(self.nvars, i) + Fraction(x) for i, x in enumerate(point)]
        return self.substitute(images)

    def extend(self, extra: int) -> "MultiPoly":
        """Same polynomial in a ring with extra trailing variables"""
        return MultiPoly(self.nvars + extra, {m + (0,) * extra: c for m, c in self.terms.items()})

    def univariate_coefficients(self) -> List[Fraction]:
        """Coefficients of a univariate polynomial, constant term first"""
        if self.nvars != 1:
            raise ValueError("polynomial is not univariate")
        deg = max(self.degree(), 0)
        return [self.coefficient((k,)) for k in range(deg + 1)]

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {len(self.terms)} terms)"
