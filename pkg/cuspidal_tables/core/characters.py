"""
Characters of I: orbits of the little Weyl group, stabilizers, restrictions
to the local groups I_s and endoscopic subsystems
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from cuspidal_tables.config import ENUMERATION_BOUND, WEYL_GROUP_ORDERS
from cuspidal_tables.core.exceptions import CatalogError, NoLiftError, NotExpressibleError
from cuspidal_tables.core.grading import ThetaAction
from cuspidal_tables.core.hecke import (CycloFactorization, GroupFingerprint, HeckeDescriptor,
                                        combine_relations, join_group_names, lift_relation,
                                        name_fingerprint, parse_group_label, rank_one_relation)
from cuspidal_tables.core.lattice import FinAbGroup, IntMatrix, mod1, solve_rational
from cuspidal_tables.core.littleweyl import DistinguishedReflection, LittleWeylGroup, generate_group
from cuspidal_tables.core.rootsys import RootDatum, SubsystemType, WeylElement

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]
Endomorphism = Tuple[Tuple[int, ...], ...]

QUADRATIC = CycloFactorization(((1, 2),))


@dataclass(frozen=True)
class CharacterOfI:
    """
    A character chi of I, stored by its values on the invariant-factor generators

    Attributes:
        coords: chi(g_i) = exp(2 pi i coords_i / d_i)
        factors: Invariant factors d_i of I
    """
    coords: Element
    factors: Tuple[int, ...]

    @property
    def values(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, d) for c, d in zip(self.coords, self.factors))

    @property
    def order(self) -> int:
        return lcm(1, *(v.denominator for v in self.values))

    @property
    def is_trivial(self) -> bool:
        return not any(self.coords)

    def render(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass
class CharacterOrbit:
    """A W-orbit on the dual group, represented by its lexicographically least member"""
    representative: CharacterOfI
    size: int
    members: frozenset = field(repr=False, default=frozenset())


@dataclass
class ClassRestriction:
    """
    Restriction data of one character at one distinguished reflection

    Attributes:
        class_index: Index of the class S_i
        order: n_s, the order of t_i
        d: Order of chi restricted to I_s
        ell: |W_s| / |W_{s, chi_s}|
        e: |W_s| / |W_s ∩ W_chi|
        relation: R_{chi_s}
        lifted: R_{chi,s}(z) = R_{chi_s}(z^ell)
        reduced: Rbar_{chi,s} with R_{chi,s}(z) = Rbar_{chi,s}(z^e)
        degree_ok: Degree of Rbar equals the order n_s / e of t_i^e
    """
    class_index: int
    order: int
    d: int
    ell: int
    e: int
    relation: Optional[CycloFactorization] = None
    lifted: Optional[CycloFactorization] = None
    reduced: Optional[CycloFactorization] = None
    degree_ok: Optional[bool] = None


@dataclass
class ReflectionSubgroup:
    """
    A reflection subgroup of W given by cyclic generators at some classes

    Attributes:
        label: Product of conventional group names
        fingerprint: Order and reflection census
        generators: (class index, exponent p) for the generators t_i^p
        class_orbits: Orbits of the subgroup on its reflection hyperplanes
        hecke: Descriptor with one relation per hyperplane orbit
        subsystem: Root subsystem when the group is a Weyl group of one
    """
    label: str
    fingerprint: GroupFingerprint
    generators: Tuple[Tuple[int, int], ...] = ()
    class_orbits: Tuple[Tuple[int, ...], ...] = ()
    hecke: Optional[HeckeDescriptor] = None
    subsystem: Optional[SubsystemType] = None

    @property
    def order(self) -> int:
        return self.fingerprint.order

    @property
    def census_ok(self) -> bool:
        """Every generating class is a hyperplane of the group and no other is"""
        if self.subsystem is not None:
            return True
        hyperplanes = sum(count for _, count in self.fingerprint.census)
        return hyperplanes == sum(len(orbit) for orbit in self.class_orbits)


@dataclass
class StabilizerData:
    """
    The stabilizer W_chi and its reflection subgroups for one orbit representative

    Attributes:
        character: The representative chi
        orbit_size: Size of the W-orbit of chi
        stabilizer_order: |W_chi|, None when |W| is unknown
        reflection_subgroup: W_chi^0
        endoscopic_group: W_chi^en, the reflections t_i with chi|I_i trivial
        restrictions: Per-class restriction data
    """
    character: CharacterOfI
    orbit_size: int
    stabilizer_order: Optional[int]
    reflection_subgroup: ReflectionSubgroup
    endoscopic_group: Optional[ReflectionSubgroup] = None
    restrictions: List[ClassRestriction] = field(default_factory=list)

    @property
    def quotient_order(self) -> Optional[int]:
        """|W_chi / W_chi^0|"""
        if self.stabilizer_order is None:
            return None
        return self.stabilizer_order // self.reflection_subgroup.order


def act(group: FinAbGroup, element: WeylElement, x: Element) -> Element:
    """
    Image of x in I under a Weyl group element

    Raises:
        NotInGroupError: The element does not normalize I
    """
    return group.apply(group.endomorphism(element.comatrix), x)


def dual_orbits(group: FinAbGroup, endomorphisms: Sequence[Endomorphism]) -> List[CharacterOrbit]:
    """
    Orbits of the group generated by the given maps on the characters of I

    The orbits are closed under pulling back along the generators, which
    yields the same partition as the contragredient action. Orbits are
    sorted by representative, so the trivial character comes first.
    """
    seen = set()
    orbits = []
    for chi in group.elements():
        if chi in seen:
            continue
        members = {chi}
        frontier = [chi]
        while frontier:
            nxt = []
            for c in frontier:
                for endo in endomorphisms:
                    image = group.pull_back_character(endo, c)
                    if image not in members:
                        members.add(image)
                        nxt.append(image)
            frontier = nxt
        seen |= members
        rep = CharacterOfI(min(members), group.factors)
        orbits.append(CharacterOrbit(rep, len(members), frozenset(members)))
    orbits.sort(key=lambda o: o.representative.coords)
    logger.debug(f"{group.order} characters in {len(orbits)} orbits: "
                 + ", ".join(str(o.size) for o in orbits))
    return orbits


def character_from_values(group: FinAbGroup, points: Sequence[Element],
                          exponents: Sequence[Fraction]) -> CharacterOfI:
    """
    The unique character taking the value exp(2 pi i e_k) at each point

    Raises:
        CatalogError: No character, or more than one, has these values
    """
    found = [chi for chi in group.elements()
             if all(group.character_value(chi, p) == mod1(e) for p, e in zip(points, exponents))]
    if len(found) != 1:
        raise CatalogError(f"{len(found)} characters take the values "
                           f"{[str(e) for e in exponents]}")
    return CharacterOfI(found[0], group.factors)


def restriction_order(group: FinAbGroup, chi: Element, reflection: DistinguishedReflection) -> int:
    """Order of chi on I_s, read off the generator nu_i when one is known"""
    if reflection.nu is not None and reflection.nu_generates:
        return group.character_value(chi, reflection.nu).denominator
    return lcm(1, *(group.character_value(chi, x).denominator for x in reflection.local_group))


def _first_return(group: FinAbGroup, endo: Endomorphism, chi: Element, n: int,
                  points: Optional[frozenset] = None) -> int:
    """Least j with chi∘t^j = chi, on the given points only when supplied"""
    current = chi
    for j in range(1, n + 1):
        current = group.pull_back_character(endo, current)
        if points is None:
            if current == chi:
                return j
        elif all(group.character_value(current, x) == group.character_value(chi, x)
                 for x in points):
            return j
    raise NotExpressibleError(f"character does not return after {n} steps of an element of order {n}")


def class_restriction(group: FinAbGroup, chi: Element,
                      reflection: DistinguishedReflection) -> ClassRestriction:
    """
    d, ell and e of chi at t_i together with the rank-one Hecke relations
    """
    endo = group.endomorphism(reflection.element.comatrix)
    n = reflection.order
    d = restriction_order(group, chi, reflection)
    ell = _first_return(group, endo, chi, n, reflection.local_group)
    e = _first_return(group, endo, chi, n)
    result = ClassRestriction(reflection.root_class.index, n, d, ell, e)
    if reflection.rank_one_label is None:
        return result
    result.relation = rank_one_relation(reflection.rank_one_label, d)
    result.lifted, result.reduced = lift_relation(result.relation, ell, e)
    result.degree_ok = result.reduced.degree() == n // e
    if not result.degree_ok:
        logger.warning(f"class {result.class_index}: relation {result.reduced} "
                       f"has degree {result.reduced.degree()}, expected {n // e}")
    return result


def _components(elements: Dict[int, WeylElement]) -> List[List[int]]:
    """Connected components of the non-commutation graph"""
    parent = {i: i for i in elements}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    indices = sorted(elements)
    for pos, a in enumerate(indices):
        for b in indices[pos + 1:]:
            if not elements[a].commutes_with(elements[b]):
                parent[find(a)] = find(b)
    groups: Dict[int, List[int]] = {}
    for i in indices:
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _class_orbits(lwg: LittleWeylGroup, elements: Sequence[WeylElement],
                  classes: Sequence[int]) -> List[Tuple[int, ...]]:
    perms = [lwg.class_permutation(g) for g in elements]
    seen = set()
    orbits = []
    for start in classes:
        if start in seen:
            continue
        orbit, frontier = {start}, [start]
        while frontier:
            nxt = []
            for c in frontier:
                for p in perms:
                    if p[c] not in orbit:
                        orbit.add(p[c])
                        nxt.append(p[c])
            frontier = nxt
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    return orbits


def reflection_subgroup(lwg: LittleWeylGroup, powers: Dict[int, int],
                        relations: Optional[Dict[int, CycloFactorization]] = None,
                        bound: int = ENUMERATION_BOUND) -> ReflectionSubgroup:
    """
    The subgroup generated by t_i^{p_i} over the given classes

    Irreducible components are the connected components of the
    non-commutation graph of the generators; each is enumerated separately
    and named by its fingerprint.

    Args:
        lwg: Little Weyl group with its distinguished reflections
        powers: Class index -> exponent p_i with p_i < n_i
        relations: Class index -> Hecke relation of its generator
        bound: Enumeration bound per component

    Returns:
        ReflectionSubgroup: Label, fingerprint, hyperplane orbits and Hecke descriptor
    """
    elements = {i: lwg.reflections[i].element ** p for i, p in powers.items()}
    fingerprint = GroupFingerprint(1)
    names = []
    for component in _components(elements):
        if len(component) == 1:
            i = component[0]
            k = lwg.reflections[i].order // powers[i]
            fp = GroupFingerprint.of(k, {k: 1})
        elif (lwg.closure is not None and len(component) == len(lwg.classes)
              and all(powers[i] == 1 for i in component)):
            fp = lwg.closure.fingerprint
        else:
            fp = generate_group(lwg.theta.datum, [elements[i] for i in component],
                                lwg.cartan, bound).fingerprint
        names.append(name_fingerprint(fp))
        fingerprint = fingerprint * fp
    label = join_group_names(names)
    orbits = _class_orbits(lwg, list(elements.values()), sorted(elements))
    hecke = None
    if relations is not None:
        per_orbit = []
        for orbit in orbits:
            found = {relations[i] for i in orbit if relations.get(i) is not None}
            if len(found) > 1:
                logger.warning(f"classes {orbit} are conjugate but carry relations "
                               + ", ".join(str(r) for r in found))
            per_orbit.extend(found)
        hecke = HeckeDescriptor(label, fingerprint, combine_relations(per_orbit))
    return ReflectionSubgroup(label, fingerprint, tuple(sorted(powers.items())), tuple(orbits),
                              hecke)


def stabilizer(lwg: LittleWeylGroup, orbit: CharacterOrbit,
               bound: int = ENUMERATION_BOUND) -> StabilizerData:
    """
    W_chi, W_chi^0 and W_chi^en for an orbit representative

    W_chi^0 is generated by the reflections fixing chi, which are the powers
    t_i^{e_i}; W_chi^en by the t_i with chi trivial on I_i.
    """
    group = lwg.group
    chi = orbit.representative.coords
    restrictions = [class_restriction(group, chi, t) for t in lwg.reflections]
    powers = {r.class_index: r.e for r in restrictions if r.e < r.order}
    reduced = {r.class_index: r.reduced for r in restrictions if r.e < r.order}
    subgroup = reflection_subgroup(lwg, powers, reduced, bound)
    trivial = {r.class_index: 1 for r in restrictions if r.d == 1}
    untwisted = {r.class_index: rank_one_relation(t.rank_one_label, 1)
                 for r, t in zip(restrictions, lwg.reflections)
                 if r.d == 1 and t.rank_one_label is not None}
    endoscopic = reflection_subgroup(lwg, trivial, untwisted, bound)
    order = None
    if lwg.closure is not None:
        order = lwg.closure.order // orbit.size
        if order % subgroup.order:
            logger.error(f"|W_chi^0| = {subgroup.order} does not divide |W_chi| = {order}")
    logger.debug(f"chi = {orbit.representative.render()}: W_chi^0 = {subgroup.label}, "
                 f"W_chi^en = {endoscopic.label}")
    return StabilizerData(orbit.representative, orbit.size, order, subgroup, endoscopic,
                          restrictions)


# Stable Z/2 gradings, theta = -1

def reflection_class_count(root_type: SubsystemType) -> int:
    """Reflection classes of the Weyl group: two per B_n, C_n, F4 or G2 factor, one per other factor"""
    return sum(2 if letter in "BCFG" and rank >= 2 else 1 for letter, rank in root_type.components)


def involution_stabilizer(datum: RootDatum, group: FinAbGroup, orbit: CharacterOrbit
                          ) -> StabilizerData:
    """
    W_chi^0 = <s_alpha : chi(alpha^vee(-1)) = 1> for theta = -1

    The subgroup is the Weyl group of a root subsystem, every Hecke
    relation is (z - 1)^2 and |W_chi| = |W_G| / orbit size.
    """
    chi = orbit.representative.coords
    members = []
    for a in range(datum.num_roots):
        q = [Fraction(int(x), 2) for x in datum.coroots[a]]
        if group.character_value(chi, group.discrete_log(q)) == 0:
            members.append(a)
    root_type = datum.subsystem_type(members)
    label = root_type.weyl_label()
    fingerprint = parse_group_label(label)
    hecke = HeckeDescriptor(label, fingerprint, (QUADRATIC,) * reflection_class_count(root_type))
    subgroup = ReflectionSubgroup(label, fingerprint, hecke=hecke, subsystem=root_type)
    order = WEYL_GROUP_ORDERS[datum.label] // orbit.size
    if order % fingerprint.order:
        logger.error(f"|W_chi^0| = {fingerprint.order} does not divide |W_chi| = {order}")
    return StabilizerData(orbit.representative, orbit.size, order, subgroup)


# Endoscopy

@dataclass
class EndoscopicSubsystem:
    """
    The root system of the connected centralizer of a theta-fixed dual torus element

    Attributes:
        v: The element in fundamental coweight coordinates of the dual torus
        roots: Indices of the roots alpha with <v, alpha^vee> integral
        root_type: Its type as a subsystem of the dual root system
        stable: theta maps the subsystem to itself
    """
    v: Tuple[Fraction, ...]
    roots: Tuple[int, ...]
    root_type: SubsystemType
    stable: bool

    @property
    def label(self) -> str:
        return self.root_type.label


def _weight_action(theta: ThetaAction) -> IntMatrix:
    """Matrix of theta on fundamental weight coordinates, the inverse transpose of its coroot matrix"""
    return theta.comatrix.inverse().transpose()


def dual_torus_lift(theta: ThetaAction, group: FinAbGroup, chi: Element) -> Tuple[Fraction, ...]:
    """
    The theta-fixed dual torus element attached to chi

    chi is the restriction of a weight lam; v = (theta - 1)^-1 lam is fixed
    by theta modulo the weight lattice and depends on lam only modulo
    (theta - 1) applied to weights.

    Raises:
        NoLiftError: theta - 1 is singular on weights
    """
    lam = group.character_lift(chi)
    M = _weight_action(theta) - IntMatrix.identity(theta.datum.rank)
    if M.det() == 0:
        raise NoLiftError("theta fixes a nonzero weight, chi has no unique lift")
    v = solve_rational([[Fraction(x) for x in row] for row in M.rows], [Fraction(x) for x in lam])
    return tuple(mod1(x) for x in v)


def is_theta_fixed(theta: ThetaAction, v: Sequence[Fraction]) -> bool:
    image = _weight_action(theta) @ [Fraction(x) for x in v]
    return all((a - Fraction(b)).denominator == 1 for a, b in zip(image, v))


def endoscopic_subsystem(theta: ThetaAction, v: Sequence[Fraction]) -> EndoscopicSubsystem:
    """
    Classify {alpha^vee : <v, alpha^vee> in Z} inside the dual root system

    Raises:
        NoLiftError: v is not fixed by theta
    """
    if not is_theta_fixed(theta, v):
        raise NoLiftError(f"{tuple(str(x) for x in v)} is not fixed by theta")
    datum = theta.datum
    members = []
    for a in range(datum.num_roots):
        pairing = sum((Fraction(x) * int(c) for x, c in zip(v, datum.coroots[a])), Fraction(0))
        if pairing.denominator == 1:
            members.append(a)
    member_set = set(members)
    perm = theta.element.perm
    stable = all(int(perm[a]) in member_set for a in members)
    if not stable:
        logger.warning("endoscopic subsystem is not theta-stable")
    dual = datum.dual
    root_type = dual.subsystem_type(dual.index(tuple(int(x) for x in datum.coroots[a]))
                                    for a in members)
    return EndoscopicSubsystem(tuple(Fraction(x) for x in v), tuple(members), root_type, stable)


def character_endoscopy(theta: ThetaAction, group: FinAbGroup, chi: Element) -> EndoscopicSubsystem:
    """Endoscopic subsystem of a character of I"""
    return endoscopic_subsystem(theta, dual_torus_lift(theta, group, chi))
