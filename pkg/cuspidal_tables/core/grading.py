"""
Stable gradings realized as lattice automorphisms theta = w∘vartheta
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

from cuspidal_tables.config import WORD_SEARCH_ATTEMPTS, WORD_SEARCH_MAX_LENGTH, WORD_SEARCH_SEED
from cuspidal_tables.core.enums import CaseFamily
from cuspidal_tables.core.exceptions import (CatalogError, NonStableGradingError,
                                             NotExpressibleError)
from cuspidal_tables.core.hecke import CycloFactorization
from cuspidal_tables.core.lattice import (Cyclotomic, FinAbGroup, IntMatrix, cyclotomic_conductor,
                                          mod1, nullspace, row_echelon)
from cuspidal_tables.core.rootsys import RootDatum, WeylElement, build_root_system

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GradingCase:
    """
    One stable grading (^e X_n, m_s) as stored in the catalog

    Attributes:
        label: Catalog label such as "E8,5s" or "2E6,4s"
        base_type: Root system type of G
        twist: Order e of the diagram automorphism (1 for inner gradings)
        m: Order of theta
        rank: Dimension of the Cartan subspace
        theta_spec: How theta is written in the Weyl group, None when no
            element is stated
        charpoly: Characteristic polynomial of theta in Phi-notation
        family: Analysis route
    """
    label: str
    base_type: str
    twist: int
    m: int
    rank: int
    theta_spec: Optional[Dict] = None
    charpoly: Optional[str] = None
    family: CaseFamily = CaseFamily.REFLECTION

    @property
    def datum(self) -> RootDatum:
        return build_root_system(self.base_type)


@dataclass
class ThetaAction:
    """The automorphism theta of the root lattice and its order"""
    datum: RootDatum
    element: WeylElement
    m: int
    source: str = ""

    @property
    def matrix(self) -> IntMatrix:
        return self.element.matrix

    @property
    def comatrix(self) -> IntMatrix:
        return self.element.comatrix

    @cached_property
    def conductor(self) -> int:
        return cyclotomic_conductor(self.m)

    @cached_property
    def zeta(self) -> Cyclotomic:
        """zeta_m = exp(2 pi i / m) inside Q(zeta_conductor)"""
        return Cyclotomic.zeta(self.conductor, self.conductor // self.m)

    def power(self, k: int) -> WeylElement:
        return self.element ** k

    def charpoly(self) -> CycloFactorization:
        return CycloFactorization.from_coefficients(self.matrix.charpoly())


def _e_word_element(datum: RootDatum, word: List[str]) -> WeylElement:
    result = datum.identity()
    for text in word:
        result = result * datum.reflection(datum.e8_root_from_e(text))
    return result


def _search_element(datum: RootDatum, m: int, target: CycloFactorization,
                    seed: int, attempts: int) -> Tuple[WeylElement, List[int]]:
    """
    Seeded random walk over simple reflections for an element with all
    root orbits of size m and the given characteristic polynomial
    """
    rng = random.Random(seed)
    identity = np.arange(datum.num_roots)
    proper = [m // p for p in sympy.primefactors(m)]
    current, word = datum.identity(), []
    for step in range(attempts):
        i = rng.randint(1, datum.rank)
        current = current * datum.simple_reflection(i)
        word.append(i)
        if len(word) > WORD_SEARCH_MAX_LENGTH:
            current, word = datum.identity(), []
            continue
        if not (current ** m).is_identity():
            continue
        if any(np.any((current ** k).perm == identity) for k in proper):
            continue
        try:
            if CycloFactorization.from_coefficients(current.matrix.charpoly()) == target:
                logger.debug(f"Word search succeeded after {step + 1} steps, length {len(word)}")
                return current, list(word)
        except NotExpressibleError:
            continue
    raise NonStableGradingError(f"no element with characteristic polynomial {target} "
                                f"found in {attempts} steps")


def build_theta(case: GradingCase) -> ThetaAction:
    """
    Realize theta on the root lattice from the case's w specification

    Args:
        case: Grading case with a theta specification

    Returns:
        ThetaAction: theta of exact order m, elliptic, with the stated
            characteristic polynomial

    Raises:
        CatalogError: The case has no theta specification
        NonStableGradingError: Order, ellipticity or characteristic
            polynomial disagree with the case
    """
    spec = case.theta_spec
    if not spec:
        raise CatalogError(f"{case.label} has no stated Weyl group element")
    datum = case.datum
    source = ""
    if "search" in spec:
        options = spec["search"]
        target = CycloFactorization.parse(options.get("charpoly", case.charpoly or ""))
        element, word = _search_element(datum, case.m, target,
                                        int(options.get("seed", WORD_SEARCH_SEED)),
                                        int(options.get("attempts", WORD_SEARCH_ATTEMPTS)))
        source = "word " + "".join(str(i) for i in word)
    elif "e_word" in spec:
        element = _e_word_element(datum, spec["e_word"]) ** int(spec.get("power", 1))
        source = f"reflection word ^{spec.get('power', 1)}"
    elif "word" in spec:
        base = datum.word(spec["word"])
        if spec.get("twist", 1) > 1:
            base = base * datum.diagram_automorphism(int(spec["twist"]))
        element = base ** int(spec.get("power", 1))
        source = f"word {spec['word']} twist {spec.get('twist', 1)} ^{spec.get('power', 1)}"
    elif "coxeter" in spec:
        element = datum.coxeter_element() ** int(spec["coxeter"])
        source = f"w_h^{spec['coxeter']}"
    elif spec.get("negate"):
        element = datum.identity()
        source = "1"
    else:
        raise CatalogError(f"unrecognized theta specification for {case.label}: {spec}")
    if spec.get("negate"):
        element = datum.minus_one() * element
        source = "-" + source
    theta = ThetaAction(datum, element, case.m, source)
    _check_theta(case, theta)
    logger.debug(f"{case.label}: theta = {source}")
    return theta


def _check_theta(case: GradingCase, theta: ThetaAction) -> None:
    m = case.m
    if not theta.power(m).is_identity():
        raise NonStableGradingError(f"{case.label}: theta^{m} is not the identity")
    for p in sympy.primefactors(m):
        if theta.power(m // p).is_identity():
            raise NonStableGradingError(f"{case.label}: theta has order dividing {m // p}")
    if (theta.matrix - IntMatrix.identity(theta.datum.rank)).det() == 0:
        raise NonStableGradingError(f"{case.label}: theta is not elliptic")
    if case.charpoly:
        found = theta.charpoly()
        if found != CycloFactorization.parse(case.charpoly):
            raise NonStableGradingError(
                f"{case.label}: characteristic polynomial {found} differs from {case.charpoly}")


def theta_orbits(theta: ThetaAction) -> List[Tuple[int, ...]]:
    """
    Partition the roots into theta-orbits

    Returns:
        list: Orbits as tuples of root indices, each starting at its
            smallest index, sorted by that index

    Raises:
        NonStableGradingError: An orbit has fewer than m roots
    """
    perm = theta.element.perm
    seen = np.zeros(theta.datum.num_roots, dtype=bool)
    orbits = []
    for start in range(theta.datum.num_roots):
        if seen[start]:
            continue
        orbit, k = [], start
        while not seen[k]:
            seen[k] = True
            orbit.append(k)
            k = int(perm[k])
        if len(orbit) != theta.m:
            raise NonStableGradingError(
                f"theta-orbit of root {start} has {len(orbit)} elements, expected {theta.m}")
        orbits.append(tuple(orbit))
    return orbits


def torus_fixed_points(theta: ThetaAction) -> FinAbGroup:
    """
    The group I = T^theta in coroot coordinates

    A torus element exp(2 pi i q) with q in (Q/Z)^n is fixed iff
    (N - 1) q is integral, N the matrix of theta on coroots.
    """
    n = theta.datum.rank
    group = FinAbGroup(theta.comatrix - IntMatrix.identity(n))
    det = abs((theta.matrix - IntMatrix.identity(n)).det())
    if group.order != det:
        raise NonStableGradingError(f"|T^theta| = {group.order} but |det(theta - 1)| = {det}")
    return group


@dataclass
class CartanSubspace:
    """
    The zeta_m-eigenspace of theta on coroots

    Attributes:
        basis: Eigenvectors over Q(zeta) in coroot coordinates, each equal
            to 1 on its own coordinate of `coordinates` and 0 on the others
        coordinates: Coordinate indices reading off the basis coefficients
    """
    basis: List[List[Cyclotomic]]
    coordinates: List[int]
    conductor: int
    zeta: Cyclotomic = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coefficients(self, vector) -> List[Cyclotomic]:
        """Coordinates of an element of the subspace in the stored basis"""
        return [vector[c] for c in self.coordinates]

    def restrict(self, matrix: IntMatrix) -> List[List[Cyclotomic]]:
        """Matrix of a lattice map preserving the subspace; column k is the image of basis[k]"""
        n = matrix.n
        columns = []
        for b in self.basis:
            image = [sum((b[j] * matrix[i, j] for j in range(n) if matrix[i, j]),
                         Cyclotomic(self.conductor)) for i in (self.coordinates)]
            columns.append(image)
        return [[columns[k][r] for k in range(len(columns))] for r in range(len(self.coordinates))]


def cartan_subspace(theta: ThetaAction, rank: Optional[int] = None) -> CartanSubspace:
    """
    Basis of the zeta_m-eigenspace of theta over Q(zeta_m)

    Args:
        theta: The grading automorphism
        rank: Expected dimension

    Raises:
        NonStableGradingError: Dimension differs from the expected rank
    """
    N = theta.comatrix
    n = N.n
    zeta = theta.zeta
    conductor = theta.conductor
    rows = [[Cyclotomic.rational(conductor, N[i, j]) - (zeta if i == j else 0) for j in range(n)]
            for i in range(n)]
    basis = nullspace(rows, Cyclotomic.rational(conductor, 1))
    pivots = row_echelon(rows)[1]
    coordinates = [j for j in range(n) if j not in pivots]
    if rank is not None and len(basis) != rank:
        raise NonStableGradingError(f"Cartan subspace has dimension {len(basis)}, expected {rank}")
    return CartanSubspace(basis, coordinates, conductor, zeta)


def orbit_representatives(theta: ThetaAction, orbits: List[Tuple[int, ...]]) -> List[int]:
    """Lexicographically smallest root of each orbit"""
    roots = theta.datum.roots
    return [min(orbit, key=lambda k: tuple(int(x) for x in roots[k])) for orbit in orbits]


def tau_character(theta: ThetaAction, group: FinAbGroup,
                  orbits: List[Tuple[int, ...]]) -> List[Fraction]:
    """
    Values of tau(x) = prod alpha(x) over orbit representatives

    Returns:
        list: Exponent of tau on each invariant-factor generator of I;
            all zero when tau is trivial
    """
    datum = theta.datum
    values = []
    for gen in group.generators:
        total = Fraction(0)
        for k in orbit_representatives(theta, orbits):
            total += datum.pairing([int(x) for x in datum.roots[k]], gen)
        values.append(mod1(total))
    return values
