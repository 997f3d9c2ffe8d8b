"""
Labelled root systems, Weyl group elements and fixed Coxeter elements
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from cuspidal_tables.config import WEYL_GROUP_ORDERS
from cuspidal_tables.core.exceptions import NotARootError, UnknownTypeError
from cuspidal_tables.core.lattice import IntMatrix, solve_rational

logger = logging.getLogger(__name__)


def _simply_laced(rank: int, edges: Iterable[Tuple[int, int]]) -> List[List[int]]:
    cartan = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for a, b in edges:
        cartan[a - 1][b - 1] = cartan[b - 1][a - 1] = -1
    return cartan


# Cartan matrix C[i][j] = <alpha_j, alpha_i^vee> and squared simple root lengths
CARTAN_DATA = {
    "A1": ([[2]], (2,)),
    "G2": ([[2, -3], [-1, 2]], (1, 3)),
    "F4": ([[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]], (2, 2, 1, 1)),
    "D4": (_simply_laced(4, [(1, 2), (2, 3), (2, 4)]), (2,) * 4),
    "E6": (_simply_laced(6, [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]), (2,) * 6),
    "E7": (_simply_laced(7, [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)]), (2,) * 7),
    "E8": (_simply_laced(8, [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]), (2,) * 8),
}

# w_h as a word in simple reflections, leftmost factor applied last
COXETER_WORDS = {
    "G2": (1, 2),
    "F4": (1, 2, 3, 4),
    "E6": (1, 4, 6, 3, 5, 2),
    "E7": (1, 4, 3, 5, 7, 6, 2),
    "E8": (1, 4, 6, 8, 3, 2, 5, 7),
}

# Diagram symmetries as permutations of simple roots (1-based)
DIAGRAM_AUTOMORPHISMS = {
    ("E6", 2): {1: 6, 6: 1, 3: 5, 5: 3, 2: 2, 4: 4},
    ("D4", 3): {1: 4, 4: 3, 3: 1, 2: 2},
    ("D4", 2): {3: 4, 4: 3, 1: 1, 2: 2},
}

# E8 simple roots in the coordinates e_1..e_8
_HALF = Fraction(1, 2)
E8_SIMPLE_IN_E = (
    (_HALF, -_HALF, -_HALF, -_HALF, -_HALF, -_HALF, -_HALF, _HALF),
    (1, 1, 0, 0, 0, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0, 0, 0),
    (0, -1, 1, 0, 0, 0, 0, 0),
    (0, 0, -1, 1, 0, 0, 0, 0),
    (0, 0, 0, -1, 1, 0, 0, 0),
    (0, 0, 0, 0, -1, 1, 0, 0),
    (0, 0, 0, 0, 0, -1, 1, 0),
)



def parse_root(text: str) -> Tuple[int, ...]:
    """
    Parse a root in digit notation, e.g. "11221100" or "-0101000"

    Args:
        text: Digit string, optionally preceded by a minus sign

    Returns:
        tuple: Integer coordinates in the simple root basis
    """
    text = text.strip().replace("−", "-")
    sign = -1 if text.startswith("-") else 1
    digits = text.lstrip("+-")
    return tuple(sign * int(ch) for ch in digits)


def format_root(vec: Sequence[int]) -> str:
    vec = [int(x) for x in vec]
    if any(x < 0 for x in vec):
        return "-" + "".join(str(-x) for x in vec)
    return "".join(str(x) for x in vec)


@dataclass(frozen=True)
class SubsystemType:
    """Isomorphism type of a (possibly reducible) root system"""
    components: Tuple[Tuple[str, int], ...]

    @property
    def label(self) -> str:
        if not self.components:
            return "1"
        counts = Counter(self.components)
        parts = []
        for (letter, rank) in sorted(counts, key=lambda c: ("ABCDEFG".index(c[0]), c[1])):
            k = counts[(letter, rank)]
            parts.append(f"{letter}{rank}" + (f"^{k}" if k > 1 else ""))
        return "x".join(parts)

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.components)

    def weyl_order(self) -> int:
        order = 1
        for letter, rank in self.components:
            order *= weyl_component_order(letter, rank)
        return order

    def weyl_label(self) -> str:
        """Weyl group name in the tabulated notation, e.g. W3xS2"""
        if not self.components:
            return "1"
        counts = Counter(self.components)
        parts = []
        for (letter, rank) in sorted(counts, key=lambda c: (-c[1], "ABCDEFG".index(c[0]))):
            if letter == "A":
                name = f"S{rank + 1}"
            elif letter in "BC":
                name = f"W{rank}"
            elif letter == "D":
                name = f"W{rank}'"
            else:
                name = f"W_{letter}{rank}"
            k = counts[(letter, rank)]
            parts.append(name + (f"^{k}" if k > 1 else ""))
        return "x".join(parts)


def weyl_component_order(letter: str, rank: int) -> int:
    factorial = 1
    for k in range(2, rank + 2):
        factorial *= k
    if letter == "A":
        return factorial
    base = 1
    for k in range(2, rank + 1):
        base *= k
    if letter in "BC":
        return 2 ** rank * base
    if letter == "D":
        return 2 ** (rank - 1) * base
    return WEYL_GROUP_ORDERS[f"{letter}{rank}"]


class RootDatum:
    """
    Root system in the simple root basis with Weyl group machinery

    Roots are ordered positive first (by height, then lexicographically with
    alpha_1 before alpha_2), followed by the negatives in the same order, so
    the simple root alpha_i has index i - 1 and -roots[k] = roots[k + N/2].
    """

    def __init__(self, label: str, cartan: Sequence[Sequence[int]], lengths: Sequence[int]):
        self.label = label
        self.rank = len(cartan)
        self.cartan = IntMatrix(cartan)
        self.lengths = tuple(lengths)
        self._gram2 = [[self.cartan[i, j] * self.lengths[i] for j in range(self.rank)]
                       for i in range(self.rank)]

        positive = self._positive_roots()
        ordered = positive + [tuple(-x for x in r) for r in positive]
        self.roots = np.array(ordered, dtype=np.int64)
        self.num_positive = len(positive)
        self.index_of: Dict[Tuple[int, ...], int] = {r: k for k, r in enumerate(ordered)}
        self.coroots = np.array([self._coroot(r) for r in ordered], dtype=np.int64)
        self.coroot_index: Dict[Tuple[int, ...], int] = {
            tuple(int(x) for x in c): k for k, c in enumerate(self.coroots)}
        self.simple = np.arange(self.rank)
        self.perm_dtype = np.uint8 if len(ordered) <= 256 else np.int16
        logger.debug(f"Built root system {label} with {len(ordered)} roots")

    def _positive_roots(self) -> List[Tuple[int, ...]]:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for root in frontier:
                for i in range(n):
                    image = self._simple_reflect(root, i)
                    if all(x >= 0 for x in image) and image not in found:
                        found.add(image)
                        nxt.append(image)
            frontier = nxt
        return sorted(found, key=lambda r: (sum(r), [-x for x in r]))

    def _simple_reflect(self, vec: Sequence[int], i: int) -> Tuple[int, ...]:
        c = sum(self.cartan[i, j] * vec[j] for j in range(self.rank))
        return tuple(v - c * int(k == i) for k, v in enumerate(vec))

    def norm2(self, vec: Sequence[int]) -> int:
        """Twice the squared length of a vector in the simple root basis"""
        return sum(vec[i] * vec[j] * self._gram2[i][j]
                   for i in range(self.rank) for j in range(self.rank) if vec[i] and vec[j])

    def _coroot(self, vec: Sequence[int]) -> Tuple[int, ...]:
        n2 = self.norm2(vec)
        coords = [Fraction(2 * vec[i] * self.lengths[i], n2) for i in range(self.rank)]
        if any(c.denominator != 1 for c in coords):
            raise NotARootError(f"{format_root(vec)} has no integral coroot")
        return tuple(int(c) for c in coords)

    @property
    def num_roots(self) -> int:
        return len(self.roots)

    @cached_property
    def highest_root(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.roots[self.num_positive - 1])

    @cached_property
    def negation(self) -> np.ndarray:
        half = self.num_positive
        return np.concatenate([np.arange(half, 2 * half), np.arange(half)]).astype(self.perm_dtype)

    def index(self, vec: Sequence[int]) -> int:
        key = tuple(int(x) for x in vec)
        try:
            return self.index_of[key]
        except KeyError:
            raise NotARootError(f"{format_root(key)} is not a root of {self.label}") from None

    def is_long(self, index: int) -> bool:
        return self.norm2(self.roots[index]) == 2 * max(self.lengths)

    def pairing(self, weight: Sequence, coweight: Sequence) -> object:
        """<lambda, mu^vee> for lambda in root coordinates and mu^vee in coroot coordinates"""
        return sum(coweight[i] * sum(self.cartan[i, j] * weight[j] for j in range(self.rank))
                   for i in range(self.rank))

    @cached_property
    def pairing_table(self) -> np.ndarray:
        """P[a, b] = <root_a, coroot_b>"""
        return self.roots @ self.cartan_array.T @ self.coroots.T

    @cached_property
    def cartan_array(self) -> np.ndarray:
        return np.array(self.cartan.rows, dtype=np.int64)

    def perm_from_images(self, images: np.ndarray) -> np.ndarray:
        try:
            return np.array([self.index_of[tuple(int(x) for x in row)] for row in images],
                            dtype=self.perm_dtype)
        except KeyError:
            raise NotARootError("lattice map does not permute the roots") from None

    def element_from_matrix(self, matrix: IntMatrix) -> "WeylElement":
        """Lattice map given by its matrix on the simple root basis"""
        images = self.roots @ np.array(matrix.rows, dtype=np.int64).T
        return WeylElement(self, self.perm_from_images(images))

    def element_from_simple_images(self, images: Sequence[Sequence[int]]) -> "WeylElement":
        return self.element_from_matrix(IntMatrix.from_columns(images))

    def identity(self) -> "WeylElement":
        return WeylElement(self, np.arange(self.num_roots, dtype=self.perm_dtype))

    def minus_one(self) -> "WeylElement":
        return WeylElement(self, self.negation.copy())

    def reflection(self, root) -> "WeylElement":
        """
        The reflection s_alpha

        Args:
            root: Root index or coordinate vector

        Returns:
            WeylElement: lambda -> lambda - <lambda, alpha^vee> alpha
        """
        a = root if isinstance(root, (int, np.integer)) else self.index(root)
        if not 0 <= a < self.num_roots:
            raise NotARootError(f"no root with index {a}")
        shifts = self.pairing_table[:, a]
        images = self.roots - np.outer(shifts, self.roots[a])
        return WeylElement(self, self.perm_from_images(images))

    def simple_reflection(self, i: int) -> "WeylElement":
        return self.reflection(i - 1)

    def word(self, indices: Sequence[int]) -> "WeylElement":
        """Product s_{i_1} s_{i_2} ... of simple reflections (1-based)"""
        result = self.identity()
        for i in indices:
            result = result * self.simple_reflection(i)
        return result

    def coxeter_element(self) -> "WeylElement":
        if self.label not in COXETER_WORDS:
            raise UnknownTypeError(f"no Coxeter element fixed for {self.label}")
        return self.word(COXETER_WORDS[self.label])

    def diagram_automorphism(self, order: int) -> "WeylElement":
        """
        Pinned diagram automorphism of the given order

        Args:
            order: 2 for E6 and D4, 3 for D4 triality

        Returns:
            WeylElement: The lattice map permuting simple roots
        """
        try:
            mapping = DIAGRAM_AUTOMORPHISMS[(self.label, order)]
        except KeyError:
            raise UnknownTypeError(f"no diagram automorphism of order {order} on {self.label}") from None
        images = [tuple(int(j == mapping[i + 1] - 1) for j in range(self.rank))
                  for i in range(self.rank)]
        return self.element_from_simple_images(images)

    def e8_root_from_e(self, text: str) -> Tuple[int, ...]:
        """
        Convert an E8 root written as e_i +- e_j into simple root coordinates

        Args:
            text: String such as "e5-e6" or "e1+e2"

        Returns:
            tuple: Simple root coordinates
        """
        if self.label != "E8":
            raise UnknownTypeError("e-coordinates are only fixed for E8")
        vec = [Fraction(0)] * 8
        sign = 1
        token = ""
        for ch in text.replace(" ", "") + "+":
            if ch in "+-":
                if token:
                    vec[int(token.lstrip("e")) - 1] += sign
                sign = 1 if ch == "+" else -1
                token = ""
            else:
                token += ch
        basis = [[E8_SIMPLE_IN_E[j][i] for j in range(8)] for i in range(8)]
        coords = solve_rational([[Fraction(x) for x in row] for row in basis], vec)
        root = tuple(int(c) for c in coords)
        self.index(root)
        return root

    @cached_property
    def dual(self) -> "RootDatum":
        """Root datum of the coroots, with the transposed Cartan matrix"""
        longest = max(self.lengths)
        lengths = tuple(longest * min(self.lengths) // l for l in self.lengths)
        return RootDatum(f"{self.label}^", self.cartan.transpose().rows, lengths)

    def subsystem_simple(self, indices: Iterable[int]) -> List[int]:
        """Indices of the simple roots of a subsystem for the ambient positive system"""
        positives = sorted(int(i) for i in indices if i < self.num_positive)
        vectors = {tuple(int(x) for x in self.roots[i]) for i in positives}
        return [i for i in positives
                if not any(tuple(int(x) for x in self.roots[i] - self.roots[j]) in vectors
                           for j in positives if j != i)]

    def subsystem_type(self, indices: Iterable[int]) -> SubsystemType:
        """
        Classify a root subsystem given by root indices

        Args:
            indices: Root indices, closed under negation and under the
                reflections of its own roots

        Returns:
            SubsystemType: Sorted irreducible components

        Raises:
            NotARootError: The set is not a root subsystem
        """
        members = set(int(i) for i in indices)
        if not members:
            return SubsystemType(())
        negation = self.negation
        if any(int(negation[i]) not in members for i in members):
            raise NotARootError("set is not closed under negation")
        simple = self.subsystem_simple(members)
        for i in simple:
            image = self.reflection(i).perm
            if any(int(image[j]) not in members for j in members):
                raise NotARootError("set is not closed under its reflections")
        cartan = [[int(self.pairing_table[b, a]) for b in simple] for a in simple]
        return SubsystemType(tuple(_classify_components(cartan)))

    def __repr__(self) -> str:
        return f"RootDatum({self.label}, rank={self.rank}, roots={self.num_roots})"


def _classify_components(cartan: List[List[int]]) -> List[Tuple[str, int]]:
    k = len(cartan)
    seen, components = set(), []
    for start in range(k):
        if start in seen:
            continue
        block, stack = [], [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            block.append(u)
            for v in range(k):
                if v not in seen and cartan[u][v]:
                    seen.add(v)
                    stack.append(v)
        components.append(_classify_connected([[cartan[a][b] for b in block] for a in block]))
    return components


def _classify_connected(cartan: List[List[int]]) -> Tuple[str, int]:
    k = len(cartan)
    if k == 1:
        return ("A", 1)
    bonds = {(i, j): cartan[i][j] * cartan[j][i] for i in range(k) for j in range(k)
             if i != j and cartan[i][j]}
    if 3 in bonds.values():
        return ("G", 2)
    if 2 in bonds.values():
        if k == 2:
            return ("B", 2)
        short = [i for i in range(k) if any(cartan[i][j] == -2 for j in range(k))]
        short_side = set(short)
        # propagate lengths along single bonds
        changed = True
        while changed:
            changed = False
            for (i, j), b in bonds.items():
                if b == 1 and i in short_side and j not in short_side:
                    short_side.add(j)
                    changed = True
        if k == 4 and len(short_side) == 2:
            ends = [i for i in range(k) if sum(1 for j in range(k) if j != i and cartan[i][j]) == 1]
            double = [i for (i, j), b in bonds.items() if b == 2]
            if not set(double) & set(ends):
                return ("F", 4)
        return ("B", k) if len(short_side) == 1 else ("C", k)
    degree = {i: sum(1 for j in range(k) if j != i and cartan[i][j]) for i in range(k)}
    branch = [i for i in range(k) if degree[i] == 3]
    if not branch:
        return ("A", k)
    centre = branch[0]
    arms = []
    for start in (j for j in range(k) if j != centre and cartan[centre][j]):
        length, prev, cur = 1, centre, start
        while True:
            nxt = [j for j in range(k) if j not in (prev, cur) and cartan[cur][j]]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", k)
    return ("E", k)


class WeylElement:
    """
    Lattice automorphism permuting the roots

    Stored as the permutation perm with roots[perm[i]] = w(roots[i]); the
    images of the simple roots determine the map, which also covers diagram
    automorphisms and their products with Weyl group elements.
    """

    __slots__ = ("datum", "perm")

    def __init__(self, datum: RootDatum, perm: np.ndarray):
        self.datum = datum
        self.perm = perm

    @property
    def matrix(self) -> IntMatrix:
        """Action on the root lattice; column j is the image of alpha_j"""
        return IntMatrix.from_columns(self.datum.roots[self.perm[self.datum.simple]].tolist())

    @property
    def comatrix(self) -> IntMatrix:
        """Action on the coroot lattice; column j is the image of alpha_j^vee"""
        return IntMatrix.from_columns(self.datum.coroots[self.perm[self.datum.simple]].tolist())

    def key(self) -> bytes:
        return self.perm[self.datum.simple].tobytes()

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.datum, self.perm[other.perm])

    def inverse(self) -> "WeylElement":
        return WeylElement(self.datum, np.argsort(self.perm).astype(self.perm.dtype))

    def __pow__(self, k: int) -> "WeylElement":
        base = self if k >= 0 else self.inverse()
        result = self.datum.identity()
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return bool(np.all(self.perm == np.arange(len(self.perm))))

    def order(self, bound: int = 1000) -> int:
        current = self
        for k in range(1, bound + 1):
            if current.is_identity():
                return k
            current = current * self
        raise ValueError("element order exceeds bound")

    def apply_root(self, index: int) -> int:
        return int(self.perm[index])

    def image(self, vec: Sequence[int]) -> Tuple[int, ...]:
        return self.matrix @ vec

    def coimage(self, vec: Sequence) -> tuple:
        return self.comatrix @ vec

    def commutes_with(self, other: "WeylElement") -> bool:
        return bool(np.array_equal(self.perm[other.perm], other.perm[self.perm]))

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        images = ",".join(format_root(self.datum.roots[self.perm[i]]) for i in self.datum.simple)
        return f"WeylElement({images})"


@lru_cache(maxsize=None)
def build_root_system(label: str) -> RootDatum:
    """
    Root system of a supported type with the fixed simple root labelling

    Args:
        label: One of G2, F4, E6, E7, E8, D4 (A1 for rank-one helpers)

    Returns:
        RootDatum: The constructed root datum

    Raises:
        UnknownTypeError: Unsupported label
    """
    try:
        cartan, lengths = CARTAN_DATA[label]
    except KeyError:
        raise UnknownTypeError(f"unsupported root system type {label!r}") from None
    return RootDatum(label, cartan, lengths)
