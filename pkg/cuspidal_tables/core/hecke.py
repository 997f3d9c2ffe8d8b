"""
Cyclotomic Hecke relations and descriptors of Hecke algebras H_{C, p(z)}
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from cuspidal_tables.config import MAX_CYCLOTOMIC_INDEX
from cuspidal_tables.core.exceptions import CatalogError, NotExpressibleError
from cuspidal_tables.core.lattice import cyclotomic_coefficients

logger = logging.getLogger(__name__)

_SUPERSCRIPT_DIGITS = "⁰¹²³⁴⁵⁶⁷⁸⁹"
_SUPERSCRIPTS = str.maketrans(_SUPERSCRIPT_DIGITS, "0123456789")
_SUPERSCRIPT_RUN = re.compile(f"[{_SUPERSCRIPT_DIGITS}]+")
_FACTOR_RE = re.compile(r"(?:Phi|Φ)_?\{?(\d+)\}?(?:\^\{?(\d+)\}?)?")


def plain_powers(text: str) -> str:
    """Rewrite superscript exponents as ^n, so "Φ1³Φ2" reads "Φ1^3Φ2\""""
    return _SUPERSCRIPT_RUN.sub(lambda m: "^" + m.group().translate(_SUPERSCRIPTS), text)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_coefficients(n)) - 1


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class CycloFactorization:
    """
    The product of cyclotomic polynomials prod Phi_d^{m_d}

    Stored as sorted (d, m_d) pairs with m_d > 0, so equality of two
    factorizations is equality of multisets.
    """
    factors: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_counts(cls, counts: Dict[int, int]) -> "CycloFactorization":
        if any(m < 0 for m in counts.values()):
            raise NotExpressibleError("negative cyclotomic multiplicity")
        return cls(tuple(sorted((d, m) for d, m in counts.items() if m)))

    @classmethod
    def parse(cls, text: str) -> "CycloFactorization":
        """
        Parse Phi-notation such as "Phi1^3Phi2", "Φ1³Φ2Φ6" or "-1"

        "-1" is the tabulated shorthand for the quadratic relation (z-1)^2
        of a Weyl group Hecke algebra at parameter -1.
        """
        text = plain_powers(text).replace(" ", "").replace("*", "")
        if text in ("-1", "−1"):
            return cls(((1, 2),))
        if text in ("1", ""):
            return cls(())
        counts: Counter = Counter()
        consumed = 0
        for match in _FACTOR_RE.finditer(text):
            if match.start() != consumed:
                raise CatalogError(f"cannot parse cyclotomic product {text!r}")
            counts[int(match.group(1))] += int(match.group(2) or 1)
            consumed = match.end()
        if consumed != len(text):
            raise CatalogError(f"cannot parse cyclotomic product {text!r}")
        return cls.from_counts(dict(counts))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int]) -> "CycloFactorization":
        """
        Factor a monic integer polynomial into cyclotomic polynomials

        Args:
            coeffs: Coefficients, leading coefficient first

        Raises:
            NotExpressibleError: A factor is not cyclotomic
        """
        z = sympy.Symbol("z")
        poly = sympy.Poly(list(coeffs), z)
        counts: Counter = Counter()
        for d in range(MAX_CYCLOTOMIC_INDEX, 0, -1):
            phi = sympy.Poly(sympy.cyclotomic_poly(d, z), z)
            while poly.degree() >= phi.degree():
                quotient, remainder = sympy.div(poly, phi)
                if not remainder.is_zero:
                    break
                poly = quotient
                counts[d] += 1
        if poly.degree() != 0 or abs(poly.LC()) != 1:
            raise NotExpressibleError("polynomial is not a product of cyclotomic polynomials")
        return cls.from_counts(dict(counts))

    @property
    def counts(self) -> Dict[int, int]:
        return dict(self.factors)

    def degree(self) -> int:
        return sum(euler_phi(d) * m for d, m in self.factors)

    def __mul__(self, other: "CycloFactorization") -> "CycloFactorization":
        counts = Counter(self.counts)
        counts.update(other.counts)
        return CycloFactorization.from_counts(dict(counts))

    def coefficients(self) -> List[int]:
        """Expanded integer coefficients, constant term first"""
        result = [1]
        for d, m in self.factors:
            phi = cyclotomic_coefficients(d)
            for _ in range(m):
                product = [0] * (len(result) + len(phi) - 1)
                for i, a in enumerate(result):
                    for j, b in enumerate(phi):
                        product[i + j] += a * b
                result = product
        return result

    def substitute(self, k: int) -> "CycloFactorization":
        """
        The factorization of R(z^k)

        Phi_d(z^k) is the product of Phi_D over all D with D / gcd(D, k) = d,
        that is D = d*c for the divisors c of k with gcd(d*c, k) = c.
        """
        if k < 1:
            raise ValueError("substitution exponent must be positive")
        counts: Counter = Counter()
        for d, m in self.factors:
            for c in _divisors(k):
                if gcd(d * c, k) == c:
                    counts[d * c] += m
        return CycloFactorization.from_counts(dict(counts))

    def root_of(self, e: int) -> "CycloFactorization":
        """
        The factorization Rbar with Rbar(z^e) = R(z)

        Raises:
            NotExpressibleError: R is not a polynomial in z^e
        """
        if e == 1:
            return self
        remaining = Counter(self.counts)
        result: Counter = Counter()
        while remaining:
            top = max(remaining)
            if top % e:
                raise NotExpressibleError(f"{self.render()} is not a polynomial in z^{e}")
            d = top // e
            mult = remaining[top]
            result[d] += mult
            for D, m in CycloFactorization(((d, 1),)).substitute(e).factors:
                remaining[D] -= m * mult
                if remaining[D] < 0:
                    raise NotExpressibleError(f"{self.render()} is not a polynomial in z^{e}")
                if remaining[D] == 0:
                    del remaining[D]
        return CycloFactorization.from_counts(dict(result))

    def render(self, unicode: bool = False) -> str:
        if not self.factors:
            return "1"
        parts = []
        for d, m in self.factors:
            if unicode:
                parts.append(f"Φ{d}" + (str(m).translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹"))
                                       if m > 1 else ""))
            else:
                parts.append(f"Phi{d}" + (f"^{m}" if m > 1 else ""))
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()


# Table of rank-one reductions: label -> (order n_s of the reflection, |I_s|)
RANK_ONE_TYPES: Dict[str, Tuple[int, int]] = {
    "A1,2s": (2, 2),
    "A2,3s": (3, 3),
    "A3,4s": (4, 4),
    "A4,5s": (5, 5),
    "2A2,6s": (3, 1),
    "2A4,10s": (5, 1),
    "B2,4s": (4, 2),
    "2D4,8s": (4, 2),
    "3D4,12s": (4, 1),
}

# Irreducible component of a class together with (n_s, |I_s|) -> rank-one label
RANK_ONE_BY_SHAPE: Dict[Tuple[str, int, int], str] = {
    ("A1", 2, 2): "A1,2s",
    ("A2", 3, 3): "A2,3s",
    ("A3", 4, 4): "A3,4s",
    ("A4", 5, 5): "A4,5s",
    ("A2", 3, 1): "2A2,6s",
    ("A4", 5, 1): "2A4,10s",
    ("B2", 4, 2): "B2,4s",
    ("D4", 4, 2): "2D4,8s",
    ("D4", 4, 1): "3D4,12s",
}


def rank_one_relation(label: str, d: int) -> CycloFactorization:
    """
    Hecke relation R_{chi_s} of a rank-one grading

    Args:
        label: Rank-one type such as "A2,3s" or "B2,4s"
        d: Order of the restricted character chi_s

    Returns:
        CycloFactorization: The relation, of degree n_s

    Raises:
        CatalogError: Unknown type or d does not divide |I_s|
    """
    try:
        n_s, order_i = RANK_ONE_TYPES[label]
    except KeyError:
        raise CatalogError(f"no rank-one reduction for {label!r}") from None
    if order_i % d:
        raise CatalogError(f"character order {d} impossible on I_s of order {order_i} ({label})")
    if label.startswith("A"):
        # (z^d - 1)^{n/d}
        counts = {c: n_s // d for c in _divisors(d)}
        return CycloFactorization.from_counts(counts)
    if label == "2A2,6s":
        return CycloFactorization(((1, 2), (2, 1)))
    if label == "2A4,10s":
        return CycloFactorization(((1, 3), (2, 2)))
    if label == "B2,4s":
        return CycloFactorization(((1, 3), (2, 1))) if d == 1 else CycloFactorization(((1, 2), (2, 2)))
    if label == "2D4,8s":
        return CycloFactorization(((1, 4),)) if d == 1 else CycloFactorization(((1, 2), (2, 2)))
    return CycloFactorization(((1, 3), (2, 1)))


def lift_relation(relation: CycloFactorization, ell: int, e: int
                  ) -> Tuple[CycloFactorization, CycloFactorization]:
    """
    Pass from R_{chi_s} to R_{chi,s}(z) = R_{chi_s}(z^ell) and its root Rbar

    Args:
        relation: R_{chi_s}
        ell: |W_s| / |W_{s, chi_s}|
        e: |W_s| / |W_s ∩ W_chi|

    Returns:
        tuple: (R_{chi,s}, Rbar_{chi,s}) with R_{chi,s}(z) = Rbar_{chi,s}(z^e)
    """
    lifted = relation.substitute(ell)
    return lifted, lifted.root_of(e)


@dataclass(frozen=True)
class GroupFingerprint:
    """Order and distinguished-reflection census {|C_H|: number of hyperplanes}"""
    order: int
    census: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def of(cls, order: int, census: Dict[int, int]) -> "GroupFingerprint":
        return cls(order, tuple(sorted((k, v) for k, v in census.items() if v)))

    def __mul__(self, other: "GroupFingerprint") -> "GroupFingerprint":
        census = Counter(dict(self.census))
        census.update(dict(other.census))
        return GroupFingerprint.of(self.order * other.order, dict(census))

    @property
    def reflection_count(self) -> int:
        return sum((k - 1) * v for k, v in self.census)

    def render(self) -> str:
        if not self.census:
            return f"|C|={self.order}"
        parts = " ".join(f"{k}^{v}" for k, v in self.census)
        return f"|C|={self.order}, {parts}"


# Shephard-Todd groups met in the tables: order and reflection census
SHEPHARD_TODD = {
    4: (24, {3: 4}),
    5: (72, {3: 8}),
    8: (96, {4: 6}),
    9: (192, {4: 6, 2: 12}),
    10: (288, {4: 6, 3: 8}),
    16: (600, {5: 12}),
    25: (648, {3: 12}),
    26: (1296, {2: 9, 3: 12}),
    31: (46080, {2: 60}),
    32: (155520, {3: 40}),
}

_EXCEPTIONAL_WEYL = {"E6": 36, "E7": 63, "E8": 120, "F4": 24, "G2": 6}


def imprimitive_fingerprint(m: int, p: int, r: int) -> GroupFingerprint:
    """Fingerprint of G(m, p, r)"""
    if m % p:
        raise CatalogError(f"G({m},{p},{r}) needs p | m")
    census: Counter = Counter()
    if r > 1:
        census[2] += m * r * (r - 1) // 2
    if m // p > 1:
        census[m // p] += r
    return GroupFingerprint.of(m ** r * factorial(r) // p, dict(census))


def _atom_fingerprint(atom: str) -> GroupFingerprint:
    from cuspidal_tables.config import WEYL_GROUP_ORDERS

    if atom in ("1", ""):
        return GroupFingerprint(1)
    match = re.fullmatch(r"(?:mu|μ)(\d+)", atom)
    if match:
        n = int(match.group(1))
        return GroupFingerprint.of(n, {n: 1} if n > 1 else {})
    match = re.fullmatch(r"G(\d+)", atom)
    if match:
        try:
            order, census = SHEPHARD_TODD[int(match.group(1))]
        except KeyError:
            raise CatalogError(f"Shephard-Todd group {atom} is not tabulated") from None
        return GroupFingerprint.of(order, census)
    match = re.fullmatch(r"G_?\{?\(?(\d+),(\d+),(\d+)\)?\}?", atom)
    if match:
        return imprimitive_fingerprint(*(int(x) for x in match.groups()))
    match = re.fullmatch(r"S(\d+)", atom)
    if match:
        n = int(match.group(1))
        return GroupFingerprint.of(factorial(n), {2: n * (n - 1) // 2})
    match = re.fullmatch(r"W(\d+)('?)", atom)
    if match:
        n = int(match.group(1))
        if match.group(2):
            return GroupFingerprint.of(2 ** (n - 1) * factorial(n), {2: n * (n - 1)})
        return GroupFingerprint.of(2 ** n * factorial(n), {2: n * n})
    match = re.fullmatch(r"W_?([EFG]\d)", atom)
    if match:
        label = match.group(1)
        return GroupFingerprint.of(WEYL_GROUP_ORDERS[label], {2: _EXCEPTIONAL_WEYL[label]})
    raise CatalogError(f"unknown group label {atom!r}")


def parse_group_label(text: str) -> GroupFingerprint:
    """
    Fingerprint of a tabulated group label

    Accepts products written with "x" or "×" and powers such as "mu3^2",
    e.g. "G25xmu3", "W3xS2", "G(4,1,2)", "W_E7xS2", "W5'".
    """
    text = plain_powers(text.replace("×", "x").replace(" ", ""))
    result = GroupFingerprint(1)
    for factor in re.split(r"x(?![^(]*\))", text):
        base, _, power = factor.partition("^")
        fp = _atom_fingerprint(base)
        for _ in range(int(power) if power else 1):
            result = result * fp
    return result


@lru_cache(maxsize=1)
def _named_fingerprints() -> Dict[GroupFingerprint, str]:
    names: Dict[GroupFingerprint, str] = {}
    for number, (order, census) in SHEPHARD_TODD.items():
        names.setdefault(GroupFingerprint.of(order, census), f"G{number}")
    for r in range(2, 5):
        for m in range(2, 13):
            for p in _divisors(m):
                if (m, p) == (2, 2) and r == 2:
                    continue
                names.setdefault(imprimitive_fingerprint(m, p, r), f"G({m},{p},{r})")
    return names


def name_fingerprint(fingerprint: GroupFingerprint) -> str:
    """
    Conventional name of an irreducible reflection group with this fingerprint

    Cyclic groups are written mu_n, exceptional groups G_k and the
    imprimitive ones G(m,p,r); an unrecognized fingerprint is rendered as is.
    """
    if fingerprint.order == 1:
        return "1"
    census = dict(fingerprint.census)
    if census == {fingerprint.order: 1}:
        return f"mu{fingerprint.order}"
    return _named_fingerprints().get(fingerprint, f"[{fingerprint.render()}]")


def join_group_names(names: Iterable[str]) -> str:
    """Product label with repeated factors written as powers, e.g. G25xmu3 or mu3^3"""
    counts = Counter(n for n in names if n != "1")
    if not counts:
        return "1"
    parts = []
    for name in sorted(counts, key=lambda n: (not n.startswith("G"), n)):
        parts.append(name + (f"^{counts[name]}" if counts[name] > 1 else ""))
    return "x".join(parts)


@dataclass(frozen=True)
class HeckeDescriptor:
    """A Hecke algebra H_{C, p_1, p_2, ...}: the group and one relation per reflection class"""
    group: str
    fingerprint: GroupFingerprint
    relations: Tuple[CycloFactorization, ...] = field(default_factory=tuple)

    def relation_set(self) -> frozenset:
        return frozenset(self.relations)

    def matches(self, other: "HeckeDescriptor") -> bool:
        """
        Same group fingerprint and the same relations in any order

        A relation written k times in other must sit on at least k hyperplane
        orbits here; written once, it may stand for several orbits.
        """
        mine, theirs = Counter(self.relations), Counter(other.relations)
        return (self.fingerprint == other.fingerprint and mine.keys() == theirs.keys()
                and all(mine[r] >= k for r, k in theirs.items()))

    def render(self) -> str:
        rels = ",".join(r.render() for r in self.relations) or "1"
        return f"H_{{{self.group},{rels}}}"

    def as_dict(self) -> dict:
        return {
            "group": self.group,
            "order": self.fingerprint.order,
            "census": {str(k): v for k, v in self.fingerprint.census},
            "relations": sorted(r.render() for r in self.relations),
        }


def _split_top_level(text: str) -> List[str]:
    parts, depth, current = [], 0, ""
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    parts.append(current)
    return parts


def _parse_single(text: str) -> HeckeDescriptor:
    match = re.fullmatch(r"H\^(\d+)G_?\{?\(?(\d+),(\d+),(\d+)\)?\}?", text)
    if match:
        ell, m, p, r = (int(x) for x in match.groups())
        group = f"G({m},{p},{r})"
        if p == 1:
            # H^l G(m,1,r): Phi1^2 on the z_i = zeta z_j class, Phi1^l Phi2^(m-l) on the other
            second = CycloFactorization.from_counts({1: ell, 2: m - ell})
        elif p == 2 and 2 * ell == m:
            second = CycloFactorization.from_counts({1: ell})
        else:
            raise CatalogError(f"unsupported Hecke shorthand {text!r}")
        return HeckeDescriptor(group, imprimitive_fingerprint(m, p, r),
                               (CycloFactorization(((1, 2),)), second))
    match = re.fullmatch(r"H_\{(.*)\}", text)
    if not match:
        raise CatalogError(f"cannot parse Hecke algebra {text!r}")
    group, *relations = _split_top_level(match.group(1))
    if not relations:
        raise CatalogError(f"Hecke algebra {text!r} has no relation")
    return HeckeDescriptor(group, parse_group_label(group),
                           tuple(CycloFactorization.parse(r) for r in relations))


def parse_hecke_notation(text: str) -> HeckeDescriptor:
    """
    Parse a tabulated Hecke algebra cell

    Args:
        text: e.g. "H_{G8,Phi1^3Phi2}", "H_{W_E8,-1}", "H^3G(4,1,2)",
            "H_{S2,-1}(x)H_{S2,-1}" (tensor products with "(x)" or "⊗")

    Returns:
        HeckeDescriptor: Group fingerprint and relation multiset
    """
    text = plain_powers(text.replace(" ", "").replace("⊗", "(x)").replace("−", "-"))
    factors = [_parse_single(part) for part in text.split("(x)")]
    if len(factors) == 1:
        return factors[0]
    fingerprint = GroupFingerprint(1)
    relations: List[CycloFactorization] = []
    for f in factors:
        fingerprint = fingerprint * f.fingerprint
        relations.extend(f.relations)
    return HeckeDescriptor("x".join(f.group for f in factors), fingerprint, tuple(relations))


def untwisted_components(label: Optional[str]) -> Tuple[str, ...]:
    """
    Sorted irreducible components of a tabulated subsystem label

    Twist prefixes are dropped ("2D6xA1" -> ("A1", "D6")), powers are
    expanded ("A2^3" -> ("A2", "A2", "A2")) and C_n is written B_n, since
    dual subsystems exchange the two.
    """
    if not label:
        return ()
    components: List[str] = []
    for factor in plain_powers(label.replace("×", "x")).split("x"):
        base, _, power = factor.partition("^")
        base = base.lstrip("0123456789")
        if base.startswith("C"):
            base = "B" + base[1:]
        components.extend([base] * (int(power) if power else 1))
    return tuple(sorted(components))


def combine_relations(relations: Iterable[CycloFactorization]) -> Tuple[CycloFactorization, ...]:
    """One relation per hyperplane orbit, in a stable order"""
    return tuple(sorted(relations, key=lambda r: (r.degree(), r.factors)))
