"""
Root classes, distinguished reflections, local groups and the little Weyl group
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from cuspidal_tables.config import ENUMERATION_BOUND, ENUMERATION_CHUNK
from cuspidal_tables.core.exceptions import (GroupEnumerationError, NonStableGradingError,
                                             NotARootError)
from cuspidal_tables.core.grading import CartanSubspace, ThetaAction
from cuspidal_tables.core.hecke import RANK_ONE_BY_SHAPE, GroupFingerprint
from cuspidal_tables.core.lattice import (Cyclotomic, FinAbGroup, IntMatrix, matrix_rank, mod1,
                                          row_echelon)
from cuspidal_tables.core.rootsys import RootDatum, SubsystemType, WeylElement

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]
FormKey = Tuple[Tuple[Fraction, ...], ...]


def _normalized_key(row: Sequence[Cyclotomic]) -> Optional[FormKey]:
    """Canonical key of a nonzero vector up to scaling, None for zero"""
    lead = next((x for x in row if x), None)
    if lead is None:
        return None
    inv = lead.inverse()
    return tuple((x * inv).key() for x in row)


def restriction_forms(theta: ThetaAction, cartan: CartanSubspace) -> List[Tuple[Cyclotomic, ...]]:
    """
    Values of every root on the Cartan subspace basis

    Returns:
        list: forms[a][k] = alpha_a(b_k)
    """
    datum = theta.datum
    weights = datum.roots @ datum.cartan_array.T
    zero = Cyclotomic(cartan.conductor)
    forms = []
    for row in weights:
        forms.append(tuple(sum((b[i] * int(row[i]) for i in range(datum.rank) if row[i]), zero)
                           for b in cartan.basis))
    return forms


# Class kinds, one per (m, root type) met among stable gradings

class _Context:
    """Per-grading helpers shared by the class-kind rules"""

    def __init__(self, theta: ThetaAction):
        self.datum = theta.datum
        self.theta = theta
        self.pairing = self.datum.pairing_table
        self.powers = [np.arange(self.datum.num_roots)]
        for _ in range(1, theta.m):
            self.powers.append(theta.element.perm[self.powers[-1]])
        self._reflections: Dict[int, WeylElement] = {}

    def th(self, k: int, a: int) -> int:
        return int(self.powers[k % self.theta.m][a])

    def pair(self, a: int, b: int) -> int:
        """<root_a, coroot_b>"""
        return int(self.pairing[a, b])

    def root_index(self, vec) -> Optional[int]:
        return self.datum.index_of.get(tuple(int(x) for x in vec))

    def reflection(self, a: int) -> WeylElement:
        if a not in self._reflections:
            self._reflections[a] = self.datum.reflection(a)
        return self._reflections[a]

    def product(self, word: Sequence[int], power: int = 1) -> WeylElement:
        result = self.datum.identity()
        for a in word:
            result = result * self.reflection(a)
        return result ** power


def _cyclic(length: int, condition: Optional[Callable[[_Context, int], bool]] = None):
    def word(ctx: _Context, a: int) -> Optional[List[int]]:
        if condition is not None and not condition(ctx, a):
            return None
        return [ctx.th(k, a) for k in range(length)]
    return word


def _b2_word(ctx: _Context, b: int) -> Optional[List[int]]:
    if ctx.datum.is_long(b):
        return None
    d = ctx.root_index(-(ctx.datum.roots[b] + ctx.datum.roots[ctx.th(1, b)]))
    if d is None or not ctx.datum.is_long(d):
        return None
    return [d, b]


def _d4_8_word(ctx: _Context, b: int) -> Optional[List[int]]:
    roots = ctx.datum.roots
    if ctx.pair(ctx.th(1, b), b) != -1:
        return None
    a = ctx.root_index(roots[b] + roots[ctx.th(1, b)])
    if a is None or ctx.pair(ctx.th(1, a), a) != 0:
        return None
    g = ctx.root_index(roots[b] + roots[ctx.th(1, b)] - roots[ctx.th(3, b)])
    if g is None:
        return None
    b1, b2 = ctx.th(1, b), ctx.th(2, b)
    return [g, b2, b1, b, b2, b1]


def _d4_12_word(ctx: _Context, a: int) -> Optional[List[int]]:
    if ctx.pair(ctx.th(1, a), a) != 1:
        return None
    b = ctx.root_index(ctx.datum.roots[ctx.th(1, a)] - ctx.datum.roots[a])
    if b is None:
        return None
    return [ctx.th(1, b), b, ctx.th(3, b), ctx.th(1, b), ctx.th(5, a), ctx.th(3, b)]


def _a2pair_word(check_pairings: bool):
    def word(ctx: _Context, a: int) -> Optional[List[int]]:
        if check_pairings:
            if (ctx.pair(ctx.th(1, a), a), ctx.pair(ctx.th(4, a), a), ctx.pair(ctx.th(2, a), a)) \
                    != (0, -1, 1):
                return None
        elif ctx.th(3, a) == int(ctx.datum.negation[a]):
            return None
        return [a, ctx.th(2, a), ctx.th(1, a), ctx.th(3, a)]
    return word


def _pairing_is(k: int, value: int):
    return lambda ctx, a: ctx.pair(ctx.th(k, a), a) == value


@dataclass(frozen=True)
class ClassKind:
    """
    Rule attached to a root class: the word giving t_S, the torus element
    generating I_S and the coefficients of the action formula

    Attributes:
        name: Short identifier
        word: Reflection word for a base root, None when the root fails the
            pairing conditions
        power: Exponent applied to the word
        nu: Coefficients c_a with nu = prod theta^a(beta^vee)(exp(2 pi i c_a)),
            None when I_S is trivial
        action: Coefficients of t_i(nu_j) = nu_j nu_i^<sum c_a theta^a beta_j^vee, beta_i>
    """
    name: str
    word: Callable[[_Context, int], Optional[List[int]]]
    power: int = 1
    nu: Optional[Tuple[Fraction, ...]] = None
    action: Optional[Tuple[int, ...]] = None


def _fractions(*values: str) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


CLASS_KINDS: Dict[Tuple[int, str], ClassKind] = {
    (3, "A2"): ClassKind("phi3", _cyclic(2, _pairing_is(1, -1)),
                         nu=_fractions("2/3", "1/3"), action=(1, -1)),
    (6, "A2"): ClassKind("phi6", _cyclic(2), power=2),
    (5, "A4"): ClassKind("phi5", _cyclic(4, _pairing_is(1, -1)),
                         nu=_fractions("4/5", "3/5", "2/5", "1/5"), action=(1, 2, -2, -1)),
    (10, "A4"): ClassKind("phi10", _cyclic(4, _pairing_is(1, 1)), power=2),
    (4, "A1^2"): ClassKind("a1pair4", _cyclic(2), nu=_fractions("1/2", "1/2"), action=(1, 1)),
    (4, "B2"): ClassKind("b2", _b2_word, nu=_fractions("1/2"), action=(1,)),
    (4, "A3"): ClassKind("a3", _cyclic(3, lambda ctx, a: ctx.pair(ctx.th(1, a), a) == -1
                                       and ctx.pair(ctx.th(2, a), a) == 0),
                         nu=_fractions("3/4", "1/2", "1/4"), action=(1, 2, 3)),
    (8, "D4"): ClassKind("d4_8", _d4_8_word, power=3, nu=_fractions("1/2", "1/2", "1/2", "1/2"),
                         action=(1, 1, 1, 1)),
    (8, "A1^4"): ClassKind("a1quad8", _cyclic(4), nu=_fractions("1/2", "1/2", "1/2", "1/2"),
                           action=(1, 1, 1, 1)),
    (12, "D4"): ClassKind("d4_12", _d4_12_word, power=3),
    (12, "A2^2"): ClassKind("a2pair12", _a2pair_word(True), power=2),
    (6, "A2^2"): ClassKind("a2pair6", _a2pair_word(False),
                           nu=_fractions("2/3", "2/3", "1/3", "1/3")),
    (6, "A1^3"): ClassKind("a1triple6", _cyclic(3), nu=_fractions("1/2", "1/2", "1/2")),
}


@dataclass
class OrbitClass:
    """
    A class S_i of roots with proportional restrictions to the Cartan subspace

    Attributes:
        index: Position in the partition
        roots: Root indices in S_i
        root_type: Isomorphism type of S_i
        orbit_count: Number of theta-orbits inside S_i
        key: Normalized restriction form, equal to the hyperplane key of t_i
        kind: Class-kind rule, None when no rule is tabulated for (m, type)
        base: Chosen base root
    """
    index: int
    roots: Tuple[int, ...]
    root_type: SubsystemType
    orbit_count: int
    key: FormKey
    kind: Optional[ClassKind] = None
    base: Optional[int] = None

    @property
    def type_label(self) -> str:
        return self.root_type.label


@dataclass
class DistinguishedReflection:
    """
    The distinguished reflection t_i of a class together with its local data

    Attributes:
        root_class: The class S_i
        element: t_i as a Weyl group element
        order: n_s
        matrix: Action on the Cartan subspace basis
        local_group: Elements of I_S inside I
        local_order: |I_S| computed from the theta-action on the coroots of S_i
        nu: Generator of I_S from the class-kind rule
        rank_one_label: Type of theta on (G_s)_der
        word_verdict: Whether every admissible base root reproduces t_i
        word_bases: Number of admissible base roots
    """
    root_class: OrbitClass
    element: WeylElement
    order: int
    matrix: List[List[Cyclotomic]] = field(repr=False)
    local_group: frozenset = field(repr=False, default=frozenset())
    local_order: int = 1
    nu: Optional[Element] = None
    rank_one_label: Optional[str] = None
    word_verdict: Optional[bool] = None
    word_bases: int = 0
    nu_generates: Optional[bool] = None


def partition_into_classes(theta: ThetaAction, cartan: CartanSubspace) -> List[OrbitClass]:
    """
    Partition the roots into classes S_i

    Two roots share a class when their restrictions to the Cartan subspace
    are proportional; each class is the root system vanishing on a
    hyperplane of the Cartan subspace.

    Args:
        theta: Grading automorphism
        cartan: Its Cartan subspace

    Returns:
        list: Classes ordered by their smallest root index

    Raises:
        NonStableGradingError: A root vanishes on the Cartan subspace or a
            class is not a theta-stable subsystem
    """
    datum = theta.datum
    forms = restriction_forms(theta, cartan)
    grouped: Dict[FormKey, List[int]] = {}
    for a, form in enumerate(forms):
        key = _normalized_key(form)
        if key is None:
            raise NonStableGradingError(f"root {a} vanishes on the Cartan subspace")
        grouped.setdefault(key, []).append(a)

    perm = theta.element.perm
    classes = []
    for index, (key, members) in enumerate(sorted(grouped.items(), key=lambda kv: kv[1][0])):
        member_set = set(members)
        if any(int(perm[a]) not in member_set for a in members):
            raise NonStableGradingError(f"class {index} is not theta-stable")
        try:
            root_type = datum.subsystem_type(members)
        except NotARootError as e:
            raise NonStableGradingError(f"class {index} is not a root subsystem: {e}") from None
        kind = CLASS_KINDS.get((theta.m, root_type.label))
        classes.append(OrbitClass(index, tuple(members), root_type, len(members) // theta.m,
                                  key, kind))
    census = Counter((c.type_label, c.orbit_count) for c in classes)
    logger.debug("Classes: " + ", ".join(f"{t} ({o}x{n})" for (t, o), n in sorted(census.items())))
    return classes


def choose_base(theta: ThetaAction, root_class: OrbitClass, ctx: Optional[_Context] = None) -> Optional[int]:
    """First root of the class, in index order, meeting the kind's pairing conditions"""
    if root_class.kind is None:
        return root_class.roots[0]
    ctx = ctx or _Context(theta)
    for a in root_class.roots:
        if root_class.kind.word(ctx, a) is not None:
            return a
    return None


def _coroot_coordinates(columns: Sequence[Sequence[int]], target: Sequence[int]) -> List[Fraction]:
    """Coefficients of target in the span of the given integer columns"""
    k = len(columns)
    rows = [[Fraction(int(col[i])) for col in columns] + [Fraction(int(target[i]))]
            for i in range(len(target))]
    reduced, pivots = row_echelon(rows)
    if k in pivots:
        raise NonStableGradingError("vector outside the coroot span of the class")
    solution = [Fraction(0)] * k
    for row, p in zip(reduced, pivots):
        solution[p] = row[k]
    return solution


def local_group(theta: ThetaAction, root_class: OrbitClass, group: FinAbGroup
                ) -> Tuple[frozenset, int]:
    """
    The group I_S = T_S^theta inside I

    T_S is the torus generated by the coroots of S; its cocharacter lattice
    has the simple coroots of S as basis, theta acts on it by an integer
    matrix L and T_S^theta is the cokernel group of L - 1.

    Returns:
        tuple: (elements of I_S as coordinates in I, |T_S^theta|)

    Raises:
        NonStableGradingError: T_S^theta does not embed in I
    """
    datum = theta.datum
    simple = datum.subsystem_simple(root_class.roots)
    columns = [datum.coroots[b] for b in simple]
    images = [theta.comatrix @ [int(x) for x in col] for col in columns]
    L = IntMatrix([[int(c) for c in row] for row in
                   zip(*[_coroot_coordinates(columns, img) for img in images])])
    local = FinAbGroup(L - IntMatrix.identity(len(simple)))
    elements = []
    for gen in local.generators:
        q = [sum((y * int(col[i]) for y, col in zip(gen, columns)), Fraction(0))
             for i in range(datum.rank)]
        elements.append(group.discrete_log([mod1(x) for x in q]))
    span = group.span(elements)
    if len(span) != local.order:
        raise NonStableGradingError(f"T_S^theta of class {root_class.index} does not embed in I")
    return span, local.order


def nu_element(theta: ThetaAction, root_class: OrbitClass, group: FinAbGroup,
               base: Optional[int] = None, ctx: Optional[_Context] = None) -> Optional[Element]:
    """Generator of I_S prescribed by the class kind, as coordinates in I"""
    kind = root_class.kind
    base = root_class.base if base is None else base
    if kind is None or kind.nu is None or base is None:
        return None
    datum = theta.datum
    ctx = ctx or _Context(theta)
    q = [Fraction(0)] * datum.rank
    for a, c in enumerate(kind.nu):
        coroot = datum.coroots[ctx.th(a, base)]
        q = [x + c * int(y) for x, y in zip(q, coroot)]
    return group.discrete_log([mod1(x) for x in q])


def _restricted(cartan: CartanSubspace, element: WeylElement) -> List[List[Cyclotomic]]:
    return cartan.restrict(element.comatrix)


def _trace(matrix: List[List[Cyclotomic]], conductor: int) -> Cyclotomic:
    return sum((matrix[i][i] for i in range(len(matrix))), Cyclotomic(conductor))


def _minus_identity(matrix: List[List[Cyclotomic]]) -> List[List[Cyclotomic]]:
    return [[x - 1 if i == j else x for j, x in enumerate(row)] for i, row in enumerate(matrix)]


def distinguished_reflection(theta: ThetaAction, cartan: CartanSubspace, root_class: OrbitClass,
                             group: FinAbGroup, ctx: Optional[_Context] = None
                             ) -> DistinguishedReflection:
    """
    Construct t_i for a class

    The centralizer of theta in W(S_i) is cyclic of order n_s; t_i is its
    element acting on the Cartan subspace with eigenvalue exp(2 pi i / n_s).
    Every base root admitted by the class kind is then checked to give the
    same element through the kind's word.

    Args:
        theta: Grading automorphism
        cartan: Cartan subspace
        root_class: The class, with its base root already chosen
        group: I = T^theta

    Returns:
        DistinguishedReflection: t_i with local group and labels

    Raises:
        NonStableGradingError: No element with the expected eigenvalue, or
            its fixed space is not a hyperplane
    """
    datum = theta.datum
    ctx = ctx or _Context(theta)
    simple = datum.subsystem_simple(root_class.roots)
    closure = generate_group(datum, [ctx.reflection(b) for b in simple], keep_elements=True)
    tp = theta.element.perm
    elements = closure.elements
    commuting = elements[np.all(elements[:, tp] == tp[elements], axis=1)]
    n_s = len(commuting)
    conductor = cartan.conductor
    if conductor % n_s:
        raise NonStableGradingError(f"class {root_class.index}: centralizer order {n_s} "
                                    f"does not divide {conductor}")
    target = Cyclotomic.zeta(conductor, conductor // n_s) + (cartan.dim - 1)
    found = None
    for perm in commuting:
        element = WeylElement(datum, perm)
        matrix = _restricted(cartan, element)
        if _trace(matrix, conductor) == target:
            found = (element, matrix)
            break
    if found is None:
        raise NonStableGradingError(f"class {root_class.index}: no reflection of order {n_s}")
    element, matrix = found
    if matrix_rank(_minus_identity(matrix)) != 1:
        raise NonStableGradingError(f"class {root_class.index}: fixed space of t is not a hyperplane")

    local, local_order = local_group(theta, root_class, group)
    component = root_class.root_type.components[0]
    shape = (f"{component[0]}{component[1]}", n_s, local_order)
    label = RANK_ONE_BY_SHAPE.get(shape)
    if label is None:
        logger.warning(f"class {root_class.index}: no rank-one type with shape {shape}")

    verdict, bases = None, 0
    kind = root_class.kind
    if kind is not None:
        verdict = True
        for a in root_class.roots:
            word = kind.word(ctx, a)
            if word is None:
                continue
            bases += 1
            if ctx.product(word, kind.power) != element:
                verdict = False
        if bases == 0:
            verdict = False
    nu = nu_element(theta, root_class, group, ctx=ctx)
    generates = None if nu is None else group.span([nu]) == local
    return DistinguishedReflection(root_class, element, n_s, matrix, local, local_order, nu,
                                   label, verdict, bases, generates)


def action_formula_check(theta: ThetaAction, group: FinAbGroup,
                         reflections: Sequence[DistinguishedReflection]) -> Optional[bool]:
    """
    Compare the lattice action of t_i on nu_j with the closed formula of
    the class kind, over all pairs of classes sharing a kind with a formula
    """
    datum = theta.datum
    ctx = _Context(theta)
    checked, ok = 0, True
    for ri in reflections:
        kind = ri.root_class.kind
        if kind is None or kind.action is None or ri.nu is None:
            continue
        endo = group.endomorphism(ri.element.comatrix)
        beta_i = [int(x) for x in datum.roots[ri.root_class.base]]
        for rj in reflections:
            if rj.root_class.kind is not kind or rj.nu is None:
                continue
            base_j = rj.root_class.base
            coweight = [0] * datum.rank
            for a, c in enumerate(kind.action):
                coroot = datum.coroots[ctx.th(a, base_j)]
                coweight = [x + c * int(y) for x, y in zip(coweight, coroot)]
            exponent = datum.pairing(beta_i, coweight)
            expected = group.add(rj.nu, group.scale(ri.nu, exponent))
            checked += 1
            if group.apply(endo, rj.nu) != expected:
                ok = False
    return ok if checked else None


# Group closure

@dataclass
class GroupClosure:
    """
    Result of a breadth-first closure

    Attributes:
        order: Number of elements
        hyperplanes: Reflection hyperplane key -> |C_H| when a Cartan
            subspace was supplied
        elements: Permutation rows when requested
    """
    order: int
    hyperplanes: Dict[FormKey, int] = field(default_factory=dict)
    elements: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def census(self) -> Dict[int, int]:
        return dict(Counter(self.hyperplanes.values()))

    @property
    def fingerprint(self) -> GroupFingerprint:
        return GroupFingerprint.of(self.order, self.census)


def _keys(perms: np.ndarray, simple: np.ndarray) -> np.ndarray:
    padded = np.zeros((len(perms), 8), dtype=np.uint8)
    padded[:, :len(simple)] = perms[:, simple].astype(np.uint8)
    return padded.view(np.uint64).ravel()


def _member(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    if not len(sorted_keys):
        return np.zeros(len(keys), dtype=bool)
    pos = np.minimum(np.searchsorted(sorted_keys, keys), len(sorted_keys) - 1)
    return sorted_keys[pos] == keys


class _ReflectionCensus:
    """Finds reflections among enumerated elements by their trace on the Cartan subspace"""

    def __init__(self, datum: RootDatum, cartan: CartanSubspace):
        self.datum = datum
        self.cartan = cartan
        self.conductor = cartan.conductor
        r = cartan.dim
        denominators = [c.denominator for b in cartan.basis for x in b for c in x.key()]
        self.scale = 1
        for d in denominators:
            self.scale = self.scale * d // gcd(self.scale, d)
        degree = len(cartan.basis[0][0].key())
        # B[k, j, :] = scaled coefficients of the j-th coordinate of b_k read at coordinate k
        self.basis = np.array([[[int(c * self.scale) for c in x.key()] for x in b]
                               for b in cartan.basis], dtype=np.int64)
        self.positions = np.array(cartan.coordinates, dtype=np.int64)
        self.targets = []
        for t in range(1, self.conductor):
            value = Cyclotomic.zeta(self.conductor, t) + (r - 1)
            self.targets.append((t, np.array([int(c * self.scale) for c in value.key()],
                                              dtype=np.int64)))
        self.counts: Dict[FormKey, int] = Counter()
        self.degree = degree

    def visit(self, perms: np.ndarray) -> None:
        images = self.datum.coroots[perms[:, self.datum.simple]]
        # column k of the restricted matrix, read at coordinate k, summed: the trace
        selected = images[:, :, self.positions]
        traces = np.einsum("ejk,kjd->ed", selected, self.basis)
        for t, target in self.targets:
            hits = np.nonzero(np.all(traces == target, axis=1))[0]
            for row in hits:
                element = WeylElement(self.datum, perms[row])
                matrix = _minus_identity(_restricted(self.cartan, element))
                if matrix_rank(matrix) != 1:
                    continue
                key = _normalized_key(next(r for r in matrix if any(r)))
                self.counts[key] += 1

    def hyperplanes(self) -> Dict[FormKey, int]:
        return {key: count + 1 for key, count in self.counts.items()}


def generate_group(datum: RootDatum, generators: Sequence[WeylElement],
                   cartan: Optional[CartanSubspace] = None, bound: int = ENUMERATION_BOUND,
                   keep_elements: bool = False) -> GroupClosure:
    """
    Enumerate the group generated by lattice automorphisms

    Elements are root permutations hashed by the images of the simple
    roots; the frontier is multiplied on the right by each generator in
    chunks. With a Cartan subspace, the reflections on it are recorded by
    hyperplane.

    Args:
        datum: Root system the generators act on
        generators: Generating elements
        cartan: Subspace on which reflections are counted
        bound: Largest admissible order
        keep_elements: Return all permutations

    Returns:
        GroupClosure: Order, reflection hyperplanes and optional elements

    Raises:
        GroupEnumerationError: The closure exceeds the bound
    """
    simple = datum.simple
    identity = np.arange(datum.num_roots, dtype=datum.perm_dtype)[None, :]
    census = _ReflectionCensus(datum, cartan) if cartan is not None else None
    seen = _keys(identity, simple)
    frontier = identity
    kept = [identity] if keep_elements else []
    gens = [g.perm for g in generators]
    if census is not None:
        census.visit(identity)
    while len(frontier):
        fresh_parts = []
        fresh_keys = np.zeros(0, dtype=np.uint64)
        for start in range(0, len(frontier), ENUMERATION_CHUNK):
            chunk = frontier[start:start + ENUMERATION_CHUNK]
            for g in gens:
                candidates = chunk[:, g]
                keys = _keys(candidates, simple)
                keys, first = np.unique(keys, return_index=True)
                mask = ~_member(seen, keys) & ~_member(fresh_keys, keys)
                if not mask.any():
                    continue
                fresh_parts.append(candidates[first[mask]])
                fresh_keys = np.union1d(fresh_keys, keys[mask])
        if not fresh_parts:
            break
        frontier = np.concatenate(fresh_parts)
        seen = np.union1d(seen, fresh_keys)
        if len(seen) > bound:
            raise GroupEnumerationError(f"group closure exceeds {bound} elements")
        if census is not None:
            for start in range(0, len(frontier), ENUMERATION_CHUNK):
                census.visit(frontier[start:start + ENUMERATION_CHUNK])
        if keep_elements:
            kept.append(frontier)
    closure = GroupClosure(len(seen))
    if census is not None:
        closure.hyperplanes = census.hyperplanes()
    if keep_elements:
        closure.elements = np.concatenate(kept)
    logger.debug(f"Enumerated {closure.order} elements from {len(gens)} generators")
    return closure


# Words in named generators

def evaluate_word(text: str, named: Dict[str, WeylElement], identity: WeylElement) -> WeylElement:
    """
    Evaluate a word such as "t11 t12 t10^2 t12^-1"

    Factors are multiplied left to right, so the rightmost factor acts
    first; "1" denotes the identity.
    """
    result = identity
    for token in text.split():
        if token == "1":
            continue
        name, _, power = token.partition("^")
        if name not in named:
            raise KeyError(f"unknown generator {name!r} in word {text!r}")
        result = result * (named[name] ** (int(power) if power else 1))
    return result


def braid_relations_check(relations: Iterable[Dict[str, str]], named: Dict[str, WeylElement],
                          identity: WeylElement, words: Optional[Dict[str, str]] = None
                          ) -> List[Tuple[str, bool]]:
    """
    Check relations between words in the distinguished reflections

    Args:
        relations: Items {"lhs": word, "rhs": word}
        named: Generators by name, e.g. "t10"
        identity: Identity element
        words: Additional named words defined in terms of earlier names

    Returns:
        list: (relation text, holds) pairs
    """
    named = dict(named)
    for name, word in (words or {}).items():
        named[name] = evaluate_word(word, named, identity)
    results = []
    for relation in relations:
        lhs = evaluate_word(relation["lhs"], named, identity)
        rhs = evaluate_word(relation["rhs"], named, identity)
        results.append((f"{relation['lhs']} = {relation['rhs']}", lhs == rhs))
    return results


@dataclass
class LittleWeylGroup:
    """Classes, distinguished reflections and the enumerated group of one grading"""
    theta: ThetaAction
    cartan: CartanSubspace
    group: FinAbGroup
    classes: List[OrbitClass]
    reflections: List[DistinguishedReflection]
    closure: Optional[GroupClosure] = None
    class_of_root: Dict[int, int] = field(default_factory=dict, repr=False)

    def class_permutation(self, element: WeylElement) -> Tuple[int, ...]:
        """Action of a group element on class indices"""
        return tuple(self.class_of_root[element.apply_root(c.roots[0])] for c in self.classes)

    def class_index(self, key: FormKey) -> Optional[int]:
        return next((c.index for c in self.classes if c.key == key), None)


def build_little_weyl(theta: ThetaAction, cartan: CartanSubspace, group: FinAbGroup,
                      bases: Optional[Dict[int, int]] = None, enumerate_group: bool = True,
                      bound: int = ENUMERATION_BOUND) -> LittleWeylGroup:
    """
    Partition, construct all distinguished reflections, and enumerate W

    Args:
        theta: Grading automorphism
        cartan: Cartan subspace
        group: I = T^theta
        bases: Root index -> preferred base root for the class containing it
        enumerate_group: Close the group generated by the t_i
        bound: Enumeration bound
    """
    ctx = _Context(theta)
    classes = partition_into_classes(theta, cartan)
    class_of_root = {a: c.index for c in classes for a in c.roots}
    preferred = {class_of_root[a]: a for a in (bases or {})}
    for c in classes:
        base = preferred.get(c.index)
        if base is not None and c.kind is not None and c.kind.word(ctx, base) is None:
            logger.warning(f"class {c.index}: preferred base root {base} fails its pairing conditions")
            base = None
        c.base = base if base is not None else choose_base(theta, c, ctx)
    reflections = [distinguished_reflection(theta, cartan, c, group, ctx) for c in classes]
    closure = None
    if enumerate_group:
        closure = generate_group(theta.datum, [t.element for t in reflections], cartan, bound)
        logger.info(f"|W| = {closure.order}, {len(closure.hyperplanes)} reflection hyperplanes")
    return LittleWeylGroup(theta, cartan, group, classes, reflections, closure, class_of_root)
