"""
Rank-one gradings as prehomogeneous spaces: semi-invariants, character
lattices, b-functions and the (G2, 3s) nilpotent orbits
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from cuspidal_tables.config import G2_ORBIT_GRID, G2_POINT_COUNT_PRIME
from cuspidal_tables.core.enums import OrbitLabel
from cuspidal_tables.core.exceptions import (BFunctionInconsistency, CatalogError,
                                             CuspidalTablesError, IncompleteCyclotomicError,
                                             LatticeConditionError, NotNilpotentError)
from cuspidal_tables.core.hecke import CycloFactorization
from cuspidal_tables.core.lattice import MultiPoly, mod1, parse_rational, row_echelon

logger = logging.getLogger(__name__)

S = sympy.Symbol("s")

# Realizations of SL_2 on blocks of variables
BLOCK_SIZES = {"std": 2, "dual": 2, "sym2": 3, "left": 4, "right_inverse": 4, "cubic": 4}

# Largest downset of the operator support the exact evaluation accepts by default
COMPUTABLE_SUPPORT = 2000
HEAVY_SUPPORT = 40000


@dataclass(frozen=True)
class BlockAction:
    """One SL_2 factor acting on a block of variables by a named rule"""
    rule: str
    variables: Tuple[int, ...]


@dataclass(frozen=True)
class SL2Factor:
    name: str
    blocks: Tuple[BlockAction, ...]


@dataclass(frozen=True)
class SemiInvariant:
    """
    A fundamental semi-invariant f_i with its character and multiplicity

    Attributes:
        name: f0, f1, ...
        poly: The polynomial on g_1
        character: Exponents of psi_i in t_1..t_n
        multiplicity: n_i in f = f_0 prod f_i^{n_i}
        dual: The same invariant on the dual space, read as an operator
    """
    name: str
    poly: MultiPoly
    character: Tuple[int, ...]
    multiplicity: int
    dual: Optional[MultiPoly] = None


@dataclass(frozen=True)
class IGenerator:
    """A generator of I with psi_{s}(gamma) = exp(2 pi i sum_j c_j s_j)"""
    order: int
    coefficients: Tuple[Fraction, ...]


@dataclass(frozen=True)
class PrehomCase:
    """
    The representation (G_0, g_1) of a rank-one grading

    f_0 is listed first and has multiplicity one.
    """
    label: str
    variables: Tuple[str, ...]
    weights: Tuple[Tuple[int, ...], ...]
    relations: Tuple[Tuple[int, ...], ...]
    factors: Tuple[SL2Factor, ...]
    invariants: Tuple[SemiInvariant, ...]
    lattice: Tuple[sympy.Expr, ...]
    roots: Tuple[sympy.Expr, ...]
    points: Tuple[Tuple[Fraction, ...], ...]
    generators: Tuple[IGenerator, ...] = ()
    w_order: int = 0
    computable: str = "none"
    principal: bool = False

    @property
    def k(self) -> int:
        return len(self.invariants) - 1

    @property
    def s_symbols(self) -> Tuple[sympy.Symbol, ...]:
        return s_symbols(self.k)

    @property
    def degree(self) -> int:
        return sum(f.multiplicity * f.poly.degree() for f in self.invariants)

    @property
    def operator(self) -> Optional[MultiPoly]:
        """D = prod dual(f_i)^{n_i}, or None when a dual invariant is missing"""
        if any(f.dual is None for f in self.invariants):
            return None
        result = MultiPoly.constant(len(self.variables), 1)
        for f in self.invariants:
            result = result * (f.dual ** f.multiplicity)
        return result

    @classmethod
    def from_dict(cls, label: str, data: Dict) -> "PrehomCase":
        """
        Build a case from its catalog entry

        Raises:
            CatalogError: Unknown variable names, block rules or sizes
        """
        names = tuple(data["variables"])
        index = {name: i for i, name in enumerate(names)}
        try:
            weights = tuple(tuple(int(x) for x in data["weights"][name]) for name in names)
            factors = []
            for factor in data.get("sl2", []):
                blocks = []
                for block in factor["blocks"]:
                    rule = block["rule"]
                    if rule not in BLOCK_SIZES or len(block["vars"]) != BLOCK_SIZES[rule]:
                        raise CatalogError(f"{label}: bad block {block}")
                    blocks.append(BlockAction(rule, tuple(index[v] for v in block["vars"])))
                factors.append(SL2Factor(factor["name"], tuple(blocks)))
        except KeyError as e:
            raise CatalogError(f"{label}: unknown variable {e}") from None
        invariants = tuple(
            SemiInvariant(
                name=entry["name"],
                poly=MultiPoly.from_expression(entry["poly"], names),
                character=tuple(int(x) for x in entry["character"]),
                multiplicity=int(entry.get("n", 1)),
                dual=MultiPoly.from_expression(entry["dual"], names) if "dual" in entry else None,
            )
            for entry in data["invariants"])
        k = len(invariants) - 1
        local = symbol_table(k)
        generators = tuple(
            IGenerator(int(g["order"]), tuple(parse_rational(c) for c in g["psi"]))
            for g in data.get("i_generators", []))
        return cls(
            label=label,
            variables=names,
            weights=weights,
            relations=tuple(tuple(int(x) for x in r) for r in data.get("relations", [])),
            factors=tuple(factors),
            invariants=invariants,
            lattice=tuple(sympy.sympify(text, locals=local) for text in data.get("lattice", [])),
            roots=tuple(sympy.sympify(text, locals=local) for text in data["roots"]),
            points=tuple(tuple(parse_rational(x) for x in p) for p in data["points"]),
            generators=generators,
            w_order=int(data.get("w_order", 0)),
            computable=data.get("computable", "none"),
        )


def s_symbols(k: int) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(f"s{i}") for i in range(1, k + 1))


def symbol_table(k: int) -> Dict[str, sympy.Symbol]:
    table = {"s": S}
    table.update({sym.name: sym for sym in s_symbols(k)})
    return table


def principal_case(label: str, marks: Sequence[int], cartan: Optional[Sequence[Sequence[int]]],
                   w_order: int, generators: Sequence[IGenerator] = ()) -> PrehomCase:
    """
    The torus-fixed model of a Coxeter-number grading

    g_1 restricted to the fixed torus is spanned by x_0 of weight -alpha_0 and
    x_i of weight alpha_i; f = x_0 prod x_i^{a_i}.

    Args:
        label: Catalog label
        marks: The labels a_i of the affine diagram
        cartan: C[i][j] = <alpha_j, alpha_i^vee>, or None for twisted cases,
            which are written in their own torus coordinates
        w_order: |W| = 1 + sum a_i
        generators: Generators of I = Z_G with their pairings

    Returns:
        PrehomCase: A case whose b-function is s prod_i prod_k (s - (s_i + k)/a_i)
    """
    r = len(marks)
    names = tuple(f"x{i}" for i in range(r + 1))
    if cartan is not None:
        alpha = [tuple(cartan[i][j] for i in range(r)) for j in range(r)]
    else:
        alpha = [tuple(int(i == j) for i in range(r)) for j in range(r)]
    lowest = tuple(-sum(a * alpha[j][i] for j, a in enumerate(marks)) for i in range(r))
    weights = (lowest,) + tuple(alpha)
    invariants = [SemiInvariant("f0", MultiPoly.variable(r + 1, 0), lowest, 1,
                                MultiPoly.variable(r + 1, 0))]
    for j, a in enumerate(marks):
        x = MultiPoly.variable(r + 1, j + 1)
        invariants.append(SemiInvariant(f"f{j + 1}", x, alpha[j], int(a), x))
    syms = s_symbols(r)
    if cartan is not None:
        # <psi, alpha_i^vee> in Z for psi = sum_j s_j alpha_j
        lattice = tuple(sum(cartan[i][j] * syms[j] for j in range(r)) for i in range(r))
    else:
        lattice = syms
    roots = [sympy.Integer(0)]
    for sym, a in zip(syms, marks):
        roots.extend((sym + k) / a for k in range(a))
    support = math.prod(a + 1 for a in marks) * 2
    computable = ("required" if support <= COMPUTABLE_SUPPORT
                  else "heavy" if support <= HEAVY_SUPPORT else "none")
    return PrehomCase(
        label=label,
        variables=names,
        weights=weights,
        relations=(),
        factors=(),
        invariants=tuple(invariants),
        lattice=lattice,
        roots=tuple(roots),
        points=((Fraction(1),) * (r + 1), tuple(Fraction(i + 1) for i in range(r + 1))),
        generators=tuple(generators),
        w_order=w_order,
        computable=computable,
        principal=True,
    )


# ---------------------------------------------------------------------------
# Semi-invariance
# ---------------------------------------------------------------------------

def _block_images(rule: str, x: List[MultiPoly], g: Tuple[MultiPoly, ...]) -> List[MultiPoly]:
    """Images of the block variables under g = [[a, b], [c, d]]"""
    a, b, c, d = g
    if rule == "std":
        return [a * x[0] + b * x[1], c * x[0] + d * x[1]]
    if rule == "dual":
        # (g^t)^{-1} = [[d, -c], [-b, a]] for det g = 1
        return [d * x[0] - c * x[1], -b * x[0] + a * x[1]]
    if rule == "sym2":
        p, r, q = x
        return [a * a * p + a * b * r * 2 + b * b * q,
                a * c * p + (a * d + b * c) * r + b * d * q,
                c * c * p + c * d * r * 2 + d * d * q]
    if rule == "left":
        x11, x12, x21, x22 = x
        return [a * x11 + b * x21, a * x12 + b * x22, c * x11 + d * x21, c * x12 + d * x22]
    if rule == "right_inverse":
        x11, x12, x21, x22 = x
        return [x11 * d - x12 * c, -(x11 * b) + x12 * a, x21 * d - x22 * c, -(x21 * b) + x22 * a]
    if rule == "cubic":
        return _binary_form_images(x, g)
    raise CatalogError(f"unknown block rule {rule!r}")


def _binary_form_images(x: List[MultiPoly], g: Tuple[MultiPoly, ...]) -> List[MultiPoly]:
    """Coefficients of F(au + cv, bu + dv) for F = sum_k x_k u^{n-k} v^k"""
    n = len(x) - 1
    base = x[0].nvars
    a, b, c, d = (entry.extend(2) for entry in g)
    u, v = MultiPoly.variable(base + 2, base), MultiPoly.variable(base + 2, base + 1)
    U, V = a * u + c * v, b * u + d * v
    total = MultiPoly(base + 2)
    for k, coeff in enumerate(x):
        total = total + coeff.extend(2) * (U ** (n - k)) * (V ** k)
    images = [MultiPoly(base) for _ in range(n + 1)]
    for mono, value in total.terms.items():
        k = mono[base + 1]
        images[k] = images[k] + MultiPoly(base, {mono[:base]: value})
    return images


def _unipotents(nvars: int) -> Dict[str, Tuple[MultiPoly, ...]]:
    """Upper and lower unipotent elements with an indeterminate parameter q"""
    one, zero = MultiPoly.constant(nvars, 1), MultiPoly(nvars)
    q = MultiPoly.variable(nvars, nvars - 1)
    return {"x_+(q)": (one, q, zero, one), "x_-(q)": (one, zero, q, one)}


def _torus_weight(case: PrehomCase, poly: MultiPoly) -> Optional[Tuple[int, ...]]:
    """Common weight of all monomials, or None when poly is not a torus eigenvector"""
    n = len(case.weights[0]) if case.weights else 0
    found = set()
    for mono in poly.terms:
        found.add(tuple(sum(e * case.weights[v][i] for v, e in enumerate(mono)) for i in range(n)))
    return found.pop() if len(found) == 1 else None


def _in_relation_lattice(diff: Sequence[int], relations: Sequence[Sequence[int]]) -> bool:
    """diff in the integer span of the relation vectors (assumed independent)"""
    if not any(diff):
        return True
    if not relations:
        return False
    n = len(diff)
    rows = [[Fraction(r[i]) for r in relations] + [Fraction(diff[i])] for i in range(n)]
    reduced, pivots = row_echelon(rows)
    if len(relations) in pivots:
        return False
    solution = [Fraction(0)] * len(relations)
    for row, p in zip(reduced, pivots):
        solution[p] = row[-1]
    return all(c.denominator == 1 for c in solution)


@dataclass
class InvariantReport:
    """Outcome of the semi-invariance checks of one case"""
    label: str
    checks: List[Tuple[str, bool]] = field(default_factory=list)

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.checks if not ok]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_semi_invariants(case: PrehomCase) -> InvariantReport:
    """
    Check that every f_i is a semi-invariant with the stated character

    The torus check is exact on monomials modulo the relations cutting
    Z_{G_0} out of the torus; the SL_2 checks are polynomial identities
    f_i(u . x) = f_i(x) for both unipotent generators of every factor, with
    the unipotent parameter kept as an extra variable.

    Args:
        case: Prehomogeneous case data

    Returns:
        InvariantReport: One named check per (f_i, generator), plus the
            generic-point and degree checks
    """
    report = InvariantReport(case.label)
    nvars = len(case.variables)
    for f in case.invariants:
        weight = _torus_weight(case, f.poly)
        ok = weight is not None and _in_relation_lattice(
            [w - p for w, p in zip(weight, f.character)], case.relations)
        report.checks.append((f"{f.name}: torus character", ok))
    for factor in case.factors:
        identity = [MultiPoly.variable(nvars + 1, i) for i in range(nvars)]
        for gen_name, g in _unipotents(nvars + 1).items():
            images = list(identity)
            for block in factor.blocks:
                block_vars = [identity[i] for i in block.variables]
                for i, image in zip(block.variables, _block_images(block.rule, block_vars, g)):
                    images[i] = image
            for f in case.invariants:
                lifted = f.poly.extend(1)
                ok = lifted.substitute(images) == lifted
                report.checks.append((f"{f.name}: {factor.name} {gen_name}", ok))
    for p, point in enumerate(case.points):
        ok = all(f.poly.evaluate(point) != 0 for f in case.invariants)
        report.checks.append((f"f(a) != 0 at point {p}", ok))
    if case.w_order:
        report.checks.append(("deg f = |W|", case.degree == case.w_order))
        report.checks.append(("number of stated roots = |W|", len(case.roots) == case.w_order))
    for name in report.failures:
        logger.warning(f"{case.label}: semi-invariant check failed: {name}")
    return report


# ---------------------------------------------------------------------------
# Characters psi_{s}
# ---------------------------------------------------------------------------

def _coerce_values(case: PrehomCase, values: Sequence) -> List[Fraction]:
    values = [parse_rational(v) for v in values]
    if len(values) != case.k:
        raise LatticeConditionError(f"{case.label} takes {case.k} exponents, got {len(values)}")
    return values


def _substitute(expr: sympy.Expr, case: PrehomCase, values: Sequence[Fraction]) -> sympy.Expr:
    return expr.subs({sym: sympy.Rational(v.numerator, v.denominator)
                      for sym, v in zip(case.s_symbols, values)})


def lattice_condition(case: PrehomCase, values: Sequence) -> bool:
    """Whether psi_{s} = prod psi_i^{s_i} is a character of G_0"""
    values = _coerce_values(case, values)
    return all(_substitute(form, case, values).is_integer for form in case.lattice)


def restrict_psi(case: PrehomCase, values: Sequence):
    """
    The character psi_{s}|_I on the stated generators of I

    Args:
        case: Case with I generators
        values: Rational exponents s_1..s_k

    Returns:
        CharacterOfI: Values on the generators

    Raises:
        LatticeConditionError: psi_{s} is not a character of G_0
    """
    from cuspidal_tables.core.characters import CharacterOfI

    values = _coerce_values(case, values)
    if not lattice_condition(case, values):
        raise LatticeConditionError(
            f"{case.label}: ({', '.join(str(v) for v in values)}) violates the lattice conditions")
    coords = []
    for gen in case.generators:
        exponent = mod1(sum((c * v for c, v in zip(gen.coefficients, values)), Fraction(0)))
        scaled = exponent * gen.order
        if scaled.denominator != 1:
            raise CatalogError(f"{case.label}: psi value {exponent} has order not dividing {gen.order}")
        coords.append(int(scaled))
    return CharacterOfI(tuple(coords), tuple(g.order for g in case.generators))


# ---------------------------------------------------------------------------
# b-functions
# ---------------------------------------------------------------------------

def _downset(monomials) -> frozenset:
    keep = set()
    for mono in monomials:
        keep.update(itertools.product(*(range(e + 1) for e in mono)))
    return frozenset(keep)


def _binomial(nvars: int, index: int, k: int) -> MultiPoly:
    """binom(e, k) as a polynomial in e = x_index"""
    e = MultiPoly.variable(nvars, index)
    result = MultiPoly.constant(nvars, 1)
    for j in range(k):
        result = result * (e - j)
    return result * Fraction(1, math.factorial(k))


Series = Dict[Tuple[int, ...], MultiPoly]


def _binomial_series(g: MultiPoly, index: int, nexp: int, keep: frozenset, order: int) -> Series:
    """(1 + g)^{e_index} truncated to keep, coefficients polynomial in the e's"""
    zero = (0,) * g.nvars
    series: Series = {zero: MultiPoly.constant(nexp, 1)}
    power = MultiPoly.constant(g.nvars, 1)
    for j in range(1, order + 1):
        power = power.truncated_mul(g, keep)
        if power.is_zero():
            break
        binom = _binomial(nexp, index, j)
        for mono, coeff in power.terms.items():
            term = binom * coeff
            series[mono] = series[mono] + term if mono in series else term
    return series


def _series_product(left: Series, right: Series, keep: frozenset) -> Series:
    result: Series = {}
    for m1, p1 in left.items():
        for m2, p2 in right.items():
            mono = tuple(a + b for a, b in zip(m1, m2))
            if mono in keep:
                term = p1 * p2
                result[mono] = result[mono] + term if mono in result else term
    return result


def leibniz_ratio(polys: Sequence[MultiPoly], shifts: Sequence[int], operator: MultiPoly,
                  point: Sequence[Fraction]) -> MultiPoly:
    """
    D(prod f_i^{e_i})(a) / prod f_i(a)^{e_i - shift_i} as a polynomial in the e_i

    f_i(a + t)^{e_i} = f_i(a)^{e_i} (1 + g_i(t))^{e_i} is expanded with
    binomial coefficients in the symbols e_i and truncated to the monomials
    below the support of D, so f^s itself is never formed.

    Args:
        polys: The factors f_i
        shifts: Exponent drop of each factor in the denominator
        operator: Constant coefficient differential operator D
        point: Evaluation point with all f_i(a) != 0

    Returns:
        MultiPoly: Polynomial in len(polys) variables e_0, e_1, ...
    """
    nexp = len(polys)
    keep = _downset(operator.terms)
    order = max(operator.degree(), 0)
    logger.debug(f"Leibniz expansion over {len(keep)} monomials, operator degree {order}")
    product: Series = {(0,) * len(point): MultiPoly.constant(nexp, 1)}
    scale = Fraction(1)
    for i, (f, shift) in enumerate(zip(polys, shifts)):
        value = f.evaluate(point)
        if not value:
            raise CatalogError(f"evaluation point is a zero of factor {i}")
        scale *= value ** shift
        g = (f.shift(point) - value) * (1 / value)
        product = _series_product(product, _binomial_series(g, i, nexp, keep, order), keep)
    total = MultiPoly(nexp)
    for alpha, coeff in operator.terms.items():
        if alpha in product:
            weight = math.prod(math.factorial(a) for a in alpha)
            total = total + product[alpha] * (coeff * weight)
    return total * scale


def _exponent_symbols(case: PrehomCase) -> List[sympy.Expr]:
    """e_0 = s and e_i = n_i s - s_i"""
    syms = case.s_symbols
    return [S] + [f.multiplicity * S - sym for f, sym in zip(case.invariants[1:], syms)]


def _monic(expr: sympy.Expr, label: str) -> sympy.Expr:
    poly = sympy.Poly(sympy.expand(expr), S)
    lead = poly.LC()
    if lead == 0 or getattr(lead, "free_symbols", set()):
        raise BFunctionInconsistency(f"{label}: leading coefficient {lead} is not a nonzero constant")
    return sympy.expand(expr / lead)


@lru_cache(maxsize=None)
def _symbolic_ratio(case: PrehomCase, point_index: int) -> MultiPoly:
    operator = case.operator
    if operator is None:
        raise CatalogError(f"{case.label} has no differential operator")
    polys = [f.poly for f in case.invariants]
    shifts = [f.multiplicity for f in case.invariants]
    return leibniz_ratio(polys, shifts, operator, case.points[point_index])


def b_function(case: PrehomCase, values: Optional[Sequence] = None, heavy: bool = False) -> sympy.Expr:
    """
    The monic b-function in Df^s u = b(s) f^{s-1} u with u = prod f_i^{-s_i}

    Args:
        case: Case with dual invariants
        values: Rational s_1..s_k to specialize, or None for the polynomial
            in (s, s_1, ..., s_k)
        heavy: Allow the cases marked heavy

    Returns:
        sympy.Expr: Expanded monic polynomial in s

    Raises:
        CatalogError: Case not computable under the given flags
        BFunctionInconsistency: The two evaluation points disagree
    """
    if case.computable == "none" or (case.computable == "heavy" and not heavy):
        raise CatalogError(f"b-function of {case.label} is not computed under the current flags")
    exponents = sympy.symbols(f"e0:{case.k + 1}")
    substitution = dict(zip(exponents, _exponent_symbols(case)))
    results = []
    for p in range(min(2, len(case.points))):
        ratio = _symbolic_ratio(case, p).to_sympy(exponents)
        results.append(_monic(ratio.subs(substitution, simultaneous=True), case.label))
    if len(results) == 2 and sympy.expand(results[0] - results[1]) != 0:
        raise BFunctionInconsistency(f"{case.label}: b-functions at two generic points disagree")
    b = results[0]
    logger.debug(f"{case.label}: b(s) of degree {sympy.degree(b, S)}")
    if values is not None:
        b = sympy.expand(_substitute(b, case, _coerce_values(case, values)))
    return b


def stated_b(case: PrehomCase, values: Optional[Sequence] = None) -> sympy.Expr:
    """prod (s - a_i) over the stated roots"""
    b = sympy.expand(sympy.Mul(*[S - root for root in case.roots]))
    if values is not None:
        b = sympy.expand(_substitute(b, case, _coerce_values(case, values)))
    return b


def stated_roots(case: PrehomCase, values: Sequence) -> List[Fraction]:
    values = _coerce_values(case, values)
    roots = []
    for root in case.roots:
        value = sympy.Rational(_substitute(root, case, values))
        roots.append(Fraction(int(value.p), int(value.q)))
    return roots


def rational_roots(b: sympy.Expr) -> List[Fraction]:
    """
    Roots with multiplicity of a polynomial in s that splits over Q

    Raises:
        CuspidalTablesError: b has a non-rational root
    """
    poly = sympy.Poly(b, S)
    roots = []
    for root, mult in sympy.roots(poly).items():
        if not root.is_rational:
            raise CuspidalTablesError(f"b-function root {root} is not rational")
        roots.extend([Fraction(int(root.p), int(root.q))] * mult)
    if len(roots) != poly.degree():
        raise CuspidalTablesError("b-function does not split into linear factors")
    return sorted(roots)


def literal_ratio(case: PrehomCase, exponents: Sequence[int], point_index: int = 0) -> Fraction:
    """D(prod f_i^{e_i})(a) / prod f_i(a)^{e_i - n_i} by expanding and differentiating"""
    operator = case.operator
    point = case.points[point_index]
    nvars = len(case.variables)
    product = MultiPoly.constant(nvars, 1)
    denominator = Fraction(1)
    for f, e in zip(case.invariants, exponents):
        product = product * (f.poly ** e)
        denominator *= f.poly.evaluate(point) ** (e - f.multiplicity)
    total = Fraction(0)
    for alpha, coeff in operator.terms.items():
        derived = product
        for var, power in enumerate(alpha):
            for _ in range(power):
                derived = derived.derivative(var)
        total += coeff * derived.evaluate(point)
    return total / denominator


def default_grid(case: PrehomCase) -> List[Tuple[int, ...]]:
    """Integer (s, s_1..s_k) with every exponent e_i >= n_i"""
    grid = [(1,) + (0,) * case.k]
    if case.computable == "required":
        for j in range(case.k):
            grid.append((1,) + tuple(-int(i == j) for i in range(case.k)))
        grid.append((2,) + (0,) * case.k)
    return grid


def grid_check(case: PrehomCase, grid: Optional[Sequence[Sequence[int]]] = None) -> int:
    """
    Compare the symbolic ratio with literal differentiation at integer points

    Returns:
        int: Number of grid points checked

    Raises:
        BFunctionInconsistency: A grid value disagrees
    """
    ratio = _symbolic_ratio(case, 0)
    checked = 0
    for point in grid or default_grid(case):
        s, rest = point[0], point[1:]
        exponents = [s] + [f.multiplicity * s - si for f, si in zip(case.invariants[1:], rest)]
        if any(e < f.multiplicity for e, f in zip(exponents, case.invariants)):
            continue
        literal = literal_ratio(case, exponents)
        symbolic = ratio.evaluate(exponents)
        if literal != symbolic:
            raise BFunctionInconsistency(
                f"{case.label}: grid point {tuple(point)} gives {literal}, expansion gives {symbolic}")
        checked += 1
    logger.debug(f"{case.label}: {checked} grid points agree")
    return checked


def b_exp(roots: Sequence) -> CycloFactorization:
    """
    prod (z - exp(2 pi i a)) over the roots a, as a product of Phi_d

    Raises:
        IncompleteCyclotomicError: The roots of unity do not fill Galois orbits
    """
    packets: Dict[int, Counter] = {}
    for root in roots:
        r = mod1(parse_rational(root) if isinstance(root, str) else Fraction(root))
        packets.setdefault(r.denominator, Counter())[r.numerator] += 1
    counts = {}
    for d, residues in packets.items():
        units = [k for k in range(d) if math.gcd(k, d) == 1]
        mults = {residues.get(k, 0) for k in units}
        if len(mults) != 1 or sum(residues.values()) != mults.pop() * len(units):
            raise IncompleteCyclotomicError(f"roots with denominator {d} do not form full Phi_{d} packets")
        counts[d] = residues[units[0]]
    return CycloFactorization.from_counts(counts)


# ---------------------------------------------------------------------------
# Composite identities on small ambient spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompositeIdentity:
    """D(prod f_i^{z_i}) = c p(z) prod f_i^{z_i - shift_i} on a small space"""
    name: str
    variables: Tuple[str, ...]
    factors: Tuple[MultiPoly, ...]
    shifts: Tuple[int, ...]
    operator: MultiPoly
    expected: sympy.Expr
    points: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_dict(cls, data: Dict) -> "CompositeIdentity":
        names = tuple(data["variables"])
        k = len(data["factors"])
        local = {f"z{i}": sympy.Symbol(f"z{i}") for i in range(k)}
        return cls(
            name=data["name"],
            variables=names,
            factors=tuple(MultiPoly.from_expression(text, names) for text in data["factors"]),
            shifts=tuple(int(x) for x in data["shifts"]),
            operator=MultiPoly.from_expression(data["operator"], names),
            expected=sympy.sympify(data["expected"], locals=local),
            points=tuple(tuple(parse_rational(x) for x in p) for p in data["points"]),
        )


def verify_identity(identity: CompositeIdentity) -> bool:
    """The computed ratio is a nonzero constant multiple of the expected one at every point"""
    zs = sympy.symbols(f"z0:{len(identity.factors)}")
    for point in identity.points:
        ratio = leibniz_ratio(identity.factors, identity.shifts, identity.operator, point)
        quotient = sympy.cancel(ratio.to_sympy(zs) / identity.expected)
        if quotient == 0 or quotient.free_symbols:
            logger.warning(f"{identity.name}: ratio {sympy.factor(ratio.to_sympy(zs))} at {point}")
            return False
    return True


# ---------------------------------------------------------------------------
# (G2, 3s): nilpotent orbits in g_{-1}
# ---------------------------------------------------------------------------

def g2_invariant_h(y1, y2, y3, y4):
    return (y1 * y4 - y2 * y3) ** 2 + 4 * (y1 * y3 - y2 ** 2) * (y3 ** 2 - y2 * y4)


def _g2_minors(y1, y2, y3, y4) -> Tuple:
    return (y1 * y4 - y2 * y3, y1 * y3 - y2 ** 2, y3 ** 2 - y2 * y4)


# (y0 = 0, h = 0, minors = 0, y1..y4 = 0) -> membership
ORBIT_CONDITIONS = {
    OrbitLabel.Z1: lambda y0, h, minors, tail: y0 and not h,
    OrbitLabel.Z2: lambda y0, h, minors, tail: not y0 and h and not minors,
    OrbitLabel.Z3: lambda y0, h, minors, tail: not y0 and minors and not tail,
    OrbitLabel.Z4: lambda y0, h, minors, tail: y0 and h and not minors,
    OrbitLabel.Z5: lambda y0, h, minors, tail: y0 and minors and not tail,
    OrbitLabel.Z6: lambda y0, h, minors, tail: not y0 and tail,
    OrbitLabel.ZERO: lambda y0, h, minors, tail: y0 and tail,
}


def _g2_flags(y: Sequence, modulus: Optional[int]) -> Tuple[bool, bool, bool, bool]:
    if modulus:
        y = [int(v) % modulus for v in y]
        reduce = lambda v: v % modulus == 0
    else:
        y = [Fraction(v) for v in y]
        reduce = lambda v: v == 0
    y0, y1, y2, y3, y4 = y
    h = g2_invariant_h(y1, y2, y3, y4)
    return (reduce(y0), reduce(h), all(reduce(m) for m in _g2_minors(y1, y2, y3, y4)),
            all(reduce(v) for v in (y1, y2, y3, y4)))


def orbit_matches(y: Sequence, modulus: Optional[int] = None) -> List[OrbitLabel]:
    """Every condition set containing y"""
    flags = _g2_flags(y, modulus)
    return [label for label, cond in ORBIT_CONDITIONS.items() if cond(*flags)]


def classify_orbit_g2(y: Sequence, modulus: Optional[int] = None) -> OrbitLabel:
    """
    The G_0-orbit of y = y_0 X_{3a+2b} + y_1 X_{-b} + ... + y_4 X_{-3a-b}

    Args:
        y: Five coordinates (y_0, ..., y_4)
        modulus: Classify over F_p instead of Q

    Raises:
        NotNilpotentError: y_0^2 h(y) != 0
    """
    if len(y) != 5:
        raise ValueError("a point of g_{-1} has five coordinates")
    y0_zero, h_zero, _, _ = _g2_flags(y, modulus)
    if not (y0_zero or h_zero):
        raise NotNilpotentError(f"{tuple(y)} is not nilpotent")
    matches = orbit_matches(y, modulus)
    if len(matches) != 1:
        raise CuspidalTablesError(f"{tuple(y)} satisfies {len(matches)} orbit conditions")
    return matches[0]


@dataclass
class OrbitCensus:
    counts: Dict[OrbitLabel, int]
    overlaps: int = 0
    non_nilpotent: int = 0

    @property
    def partition_ok(self) -> bool:
        return self.overlaps == 0


def orbit_grid_census(grid: Sequence[int] = G2_ORBIT_GRID, modulus: Optional[int] = None) -> OrbitCensus:
    """Classify every point of grid^5 lying in the nilpotent cone"""
    census = OrbitCensus({label: 0 for label in OrbitLabel})
    for y in itertools.product(grid, repeat=5):
        y0_zero, h_zero, _, _ = _g2_flags(y, modulus)
        if not (y0_zero or h_zero):
            census.non_nilpotent += 1
            continue
        matches = orbit_matches(y, modulus)
        if len(matches) != 1:
            census.overlaps += 1
            continue
        census.counts[matches[0]] += 1
    return census


def orbit_dimensions(p: int = G2_POINT_COUNT_PRIME) -> Dict[OrbitLabel, Tuple[int, int]]:
    """
    Point counts over F_p of each condition set and the dimension they suggest

    Returns:
        dict: label -> (count, round(log_p count))
    """
    census = orbit_grid_census(range(p), modulus=p)
    if not census.partition_ok:
        raise CuspidalTablesError(f"orbit conditions overlap over F_{p}")
    return {label: (count, round(math.log(count, p)) if count else -1)
            for label, count in census.counts.items()}
