"""
Reflection protocol: stable gradings of rank at least two with m > 2
"""

import itertools
import logging
import re
from collections import Counter
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Dict, List, Optional, Set, Tuple

from cuspidal_tables.catalog import CaseRecord, ExpectedRow
from cuspidal_tables.core.characters import (CharacterOfI, CharacterOrbit, StabilizerData, act,
                                             character_endoscopy, character_from_values, dual_orbits,
                                             endoscopic_subsystem, reflection_subgroup, stabilizer)
from cuspidal_tables.core.exceptions import CuspidalTablesError, NotARootError
from cuspidal_tables.core.hecke import (name_fingerprint, parse_group_label, parse_hecke_notation,
                                        untwisted_components)
from cuspidal_tables.core.lattice import mod1, parse_rational
from cuspidal_tables.core.littleweyl import (DistinguishedReflection, LittleWeylGroup,
                                             action_formula_check, braid_relations_check,
                                             build_little_weyl, evaluate_word)
from cuspidal_tables.core.rootsys import parse_root
from cuspidal_tables.protocols.base import AnalysisOptions, BaseProtocol, Signature, match_rows

logger = logging.getLogger(__name__)

_GENERATOR = re.compile(r"^t(\d+)(?:\^(\d+))?$")


class ReflectionProtocol(BaseProtocol):
    """Little Weyl group, character orbits, stabilizers and Hecke cells of a rank >= 2 grading"""

    def __init__(self, record: CaseRecord, options: Optional[AnalysisOptions] = None):
        """
        Initialize the reflection protocol

        Args:
            record: Catalog case of rank at least two with m > 2
            options: Switches for expensive paths
        """
        super().__init__(record, options)
        self.lwg: Optional[LittleWeylGroup] = None
        self.character_orbits: List[CharacterOrbit] = []
        self.stabilizers: List[StabilizerData] = []
        self.assigned: List[Optional[ExpectedRow]] = []
        # printed position of a class representative -> root index
        self.printed_roots: Dict[int, int] = {}
        # printed position -> class index
        self.printed_classes: Dict[int, int] = {}
        self.gamma: Optional[List[Tuple[int, ...]]] = None
        # printed character name -> (character, orbit index)
        self.printed_characters: Dict[str, Tuple[CharacterOfI, int]] = {}

    def get_state(self) -> Dict[str, Any]:
        state = self.base_state()
        state.update({
            "theta": self.theta.source if self.theta else None,
            "classes": len(self.lwg.classes) if self.lwg else None,
            "group_order": self.lwg.closure.order if self.lwg and self.lwg.closure else None,
            "orbits": len(self.character_orbits),
        })
        return state

    def check_prerequisites(self) -> Dict[str, Any]:
        if not self.record.has_theta:
            return {"success": False, "error": f"{self.record.label} states no Weyl group element"}
        if self.record.grading.m <= 2:
            return {"success": False, "error": f"{self.record.label} is an involution case"}
        return {"success": True, "golden": self.record.golden is not None}

    def analyze(self) -> None:
        self.analyze_grading()
        golden = self.record.golden if self.options.golden else None
        bases = self._printed_bases(golden) if golden else {}
        self.lwg = lwg = build_little_weyl(self.theta, self.cartan, self.group, bases,
                                           enumerate_group=True, bound=self.options.bound)
        self.printed_classes = {p: lwg.class_of_root[a] for p, a in self.printed_roots.items()}
        self._analyze_group(lwg)
        if golden:
            self.gamma = self._gamma_points(golden)
        self._analyze_characters(lwg, golden)
        if golden:
            self._golden_checks(lwg, golden)

    # Little Weyl group

    def _analyze_group(self, lwg: LittleWeylGroup) -> None:
        closure = lwg.closure
        expected = self.record.group
        fingerprint = closure.fingerprint
        self.compare("W.order", closure.order, self.record.group_order)
        self.compare("W.census", {str(k): v for k, v in sorted(closure.census.items())},
                     {str(k): v for k, v in sorted(self.record.expected_census().items())})
        self.compare("W.label", name_fingerprint(fingerprint), expected["label"],
                     ok=fingerprint == parse_group_label(expected["label"]))

        counts = Counter((c.type_label, c.orbit_count) for c in lwg.classes)
        classes = [{"type": t, "orbits": o, "count": n} for (t, o), n in sorted(counts.items())]
        if "classes" in expected:
            key = lambda c: (c["type"], c["orbits"])
            self.compare("classes", classes, sorted(expected["classes"], key=key))
        else:
            self.computed["classes"] = classes

        labels = sorted({t.rank_one_label for t in lwg.reflections if t.rank_one_label})
        if self.record.rank_one_types:
            self.compare("rank_one_types", labels, sorted(self.record.rank_one_types))
        self.check("t_words", all(t.word_verdict is not False for t in lwg.reflections),
                   sum(t.word_bases for t in lwg.reflections))
        self.check("nu_generates", all(t.nu_generates is not False for t in lwg.reflections))
        self.check("local_orders", all(len(t.local_group) == t.local_order for t in lwg.reflections))
        formula = action_formula_check(self.theta, self.group, lwg.reflections)
        if formula is None:
            self.skip("nu_action_formula", "no class kind with a closed action formula")
        else:
            self.check("nu_action_formula", formula)

    # Characters of I

    @staticmethod
    def _signature(sd: StabilizerData) -> Signature:
        sub = sd.reflection_subgroup
        relations = sub.hecke.relation_set() if sub.hecke else frozenset()
        return sd.stabilizer_order, sub.fingerprint, relations

    def _analyze_characters(self, lwg: LittleWeylGroup, golden: Optional[Dict]) -> None:
        group = self.group
        endomorphisms = [group.endomorphism(t.element.comatrix) for t in lwg.reflections]
        self.character_orbits = orbits = dual_orbits(group, endomorphisms)
        self.compare("orbits", len(orbits), self.record.orbit_count)
        self.stabilizers = [stabilizer(lwg, orbit, self.options.bound) for orbit in orbits]
        pins = self._printed_pins(golden, orbits) if golden else {}
        self.assigned = match_rows([self._signature(sd) for sd in self.stabilizers],
                                   self.record.rows, pins)
        for j, (orbit, sd, row) in enumerate(zip(orbits, self.stabilizers, self.assigned)):
            self._compare_row(j, orbit, sd, row)

    def _compare_row(self, j: int, orbit: CharacterOrbit, sd: StabilizerData,
                     row: Optional[ExpectedRow]) -> None:
        key = f"rows[{j}]"
        sub = sd.reflection_subgroup
        self.computed[f"{key}.character"] = orbit.representative.render()
        self.computed[f"{key}.orbit_size"] = orbit.size
        if row is None:
            self.check(f"{key}.row", False, "no tabulated row left")
            return
        self.computed[f"{key}.chi"] = row.chi
        expected = parse_hecke_notation(row.hecke)
        self.compare(f"{key}.stabilizer_order", sd.stabilizer_order, row.stabilizer_order)
        self.compare(f"{key}.W_chi0", sub.label, expected.group,
                     ok=sub.fingerprint == expected.fingerprint)
        self.compare_hecke(f"{key}.hecke", sub.hecke, row.hecke)
        self.compare(f"{key}.quotient", sd.quotient_order,
                     row.stabilizer_order // expected.fingerprint.order)
        self.check(f"{key}.relation_degrees", all(r.degree_ok is not False for r in sd.restrictions))

        endoscopic = character_endoscopy(self.theta, self.group, orbit.representative.coords)
        self.compare_endoscopy(f"{key}.endoscopy", endoscopic.label, row.endoscopy)
        self.check(f"{key}.endoscopy_stable", endoscopic.stable)
        cell = row.endoscopic_hecke
        if cell is not None:
            field = f"{key}.endoscopic_hecke"
            if cell.source == "computed":
                self.compare_hecke(field, sd.endoscopic_group.hecke if sd.endoscopic_group else None,
                                   cell.notation)
            else:
                self.cite(field, cell.notation)

    # Printed generator tables

    def _printed_bases(self, golden: Dict) -> Dict[int, int]:
        datum = self.theta.datum
        skipped = set(golden.get("skip", {}).get("beta", []))
        bases = {}
        for position, text in enumerate(golden.get("beta", []), start=1):
            if position in skipped:
                logger.warning(f"{self.record.label}: printed representative {position} skipped")
                continue
            try:
                index = datum.index(parse_root(text))
            except NotARootError:
                logger.warning(f"{self.record.label}: printed representative {text} is not a root")
                continue
            bases[index] = position
            self.printed_roots[position] = index
        return bases

    def _gamma_points(self, golden: Dict) -> Optional[List[Tuple[int, ...]]]:
        try:
            return [self.group.discrete_log([parse_rational(x) for x in q])
                    for q in golden.get("gamma", [])]
        except CuspidalTablesError as e:
            logger.error(f"{self.record.label}: printed generators of I are not in I: {e}")
            return None

    def _element(self, text: str) -> Tuple[int, ...]:
        """The element prod gamma_k^{digit_k} of I"""
        if len(text) != len(self.gamma):
            raise ValueError(f"{text!r} has {len(text)} exponents for {len(self.gamma)} generators")
        result = self.group.identity
        for digit, point in zip(text, self.gamma):
            result = self.group.add(result, self.group.scale(point, int(digit)))
        return result

    def _reflection(self, position: int) -> Optional[DistinguishedReflection]:
        c = self.printed_classes.get(position)
        return None if c is None else self.lwg.reflections[c]

    def _printed_pins(self, golden: Dict, orbits: List[CharacterOrbit]) -> Dict[int, str]:
        pins: Dict[int, str] = {}
        if not self.gamma or "chi" not in golden:
            return pins
        names = {row.chi for row in self.record.rows}
        found = 0
        for name, values in sorted(golden["chi"].items()):
            try:
                chi = character_from_values(self.group, self.gamma, [parse_rational(v) for v in values])
            except CuspidalTablesError as e:
                logger.warning(f"{self.record.label}: printed {name}: {e}")
                continue
            j = next(j for j, orbit in enumerate(orbits) if chi.coords in orbit.members)
            self.printed_characters[name] = (chi, j)
            found += 1
            if name in names and j not in pins:
                pins[j] = name
        self.compare("golden.chi", found, len(golden["chi"]))
        return pins

    def _golden(self, field: str, check: Callable[[], Tuple[int, int]]) -> None:
        """Run one oracle that returns (matched, total) and record the verdict"""
        try:
            good, total = check()
        except (CuspidalTablesError, KeyError, ValueError) as e:
            logger.error(f"{self.record.label}: {field} could not be evaluated: {e}")
            self.check(field, False, str(e))
            return
        self.compare(field, good, total)

    def _golden_checks(self, lwg: LittleWeylGroup, golden: Dict) -> None:
        if self.gamma is None:
            self.check("golden.gamma", False, "printed generators are not in I")
            return
        group = self.group
        self.check("golden.gamma", group.span(self.gamma) == frozenset(group.elements()),
                   len(self.gamma))
        skip = golden.get("skip", {})

        classes = list(self.printed_classes.values())
        self.compare("golden.beta", {"classes": len(lwg.classes), "distinct": len(set(classes))},
                     {"classes": len(golden.get("beta", [])), "distinct": len(classes)})

        if "nu" in golden:
            self._golden("golden.nu", lambda: self._per_class(
                golden["nu"], lambda t, text: t.nu == self._element(text)))
        if "local" in golden:
            self._golden("golden.local", lambda: self._per_class(
                golden["local"], lambda t, text: group.span([self._element(text)]) == t.local_group,
                skipped=set(skip.get("local", []))))
        if "t_gamma" in golden:
            self._golden("golden.t_gamma", lambda: self._t_gamma(
                golden["t_gamma"], {tuple(e) for e in skip.get("t_gamma", [])}))
        if "t_nu" in golden:
            self._golden("golden.t_nu", lambda: self._t_nu(golden["nu"], golden["t_nu"]))
        if "shared" in golden:
            self._golden("golden.shared", lambda: self._shared(
                golden["shared"], set(skip.get("shared", [])),
                {tuple(e) for e in skip.get("shared_images", [])}))
        if "w_chi0" in golden:
            self._golden("golden.w_chi0", lambda: self._w_chi0(lwg, golden["w_chi0"]))
        if "w_images" in golden:
            self._golden("golden.w_images", lambda: self._images(
                golden["w_images"], set(skip.get("w_images", [])), coroots=False))
        if "coroot_images" in golden:
            self._golden("golden.coroot_images", lambda: self._images(
                golden["coroot_images"], set(), coroots=True))
        named = {f"t{p}": self._reflection(p).element for p in self.printed_classes}
        identity = self.theta.datum.identity()
        if "words" in golden:
            skipped_words = set(skip.get("words", []))
            self._golden("golden.words", lambda: self._count(
                evaluate_word(word, named, identity) == named[name]
                for name, word in golden["words"].items() if name not in skipped_words))
        if "relations" in golden:
            self._golden("golden.relations", lambda: self._count(
                ok for _, ok in braid_relations_check(golden["relations"], named, identity)))
        if "sigma_relations" in golden:
            self._golden("golden.sigma", lambda: self._count(
                ok for _, ok in braid_relations_check(golden["sigma_relations"], named, identity,
                                                      golden.get("sigma"))))
        if "endoscopy_grid" in golden:
            self._endoscopy_grid(golden["endoscopy_grid"])

    @staticmethod
    def _count(results) -> Tuple[int, int]:
        results = list(results)
        return sum(1 for ok in results if ok), len(results)

    def _per_class(self, entries: List[str], test, skipped: Set[int] = frozenset()) -> Tuple[int, int]:
        results = []
        for position, text in enumerate(entries, start=1):
            t = self._reflection(position)
            if t is not None and position not in skipped:
                results.append(test(t, text))
        return self._count(results)

    def _t_gamma(self, table: List[List[str]], skipped: Set[Tuple[int, int]]) -> Tuple[int, int]:
        """Entry (k, i) is t_i(gamma_k); skipped entries are (k, i) pairs counted from 1"""
        results = []
        for k, row in enumerate(table):
            for position, text in enumerate(row, start=1):
                t = self._reflection(position)
                if t is not None and (k + 1, position) not in skipped:
                    results.append(act(self.group, t.element, self.gamma[k]) == self._element(text))
        return self._count(results)

    def _t_nu(self, nus: List[str], table: Dict) -> Tuple[int, int]:
        """Row r lists t_j(nu_i) over all i for the r-th printed reflection j"""
        points = [self._element(text) for text in nus]
        results = []
        for position, row in zip(table["reflections"], table["rows"]):
            t = self._reflection(position)
            if t is None:
                results.append(False)
                continue
            results.extend(act(self.group, t.element, nu) == self._element(text)
                           for nu, text in zip(points, row))
        return self._count(results)

    def _shared(self, families: List[Dict], skipped: Set[int],
                skipped_images: Set[Tuple[int, int]]) -> Tuple[int, int]:
        results = []
        for f, family in enumerate(families, start=1):
            local = self.group.span([self._element(family["local"])])
            images = [self._element(text) for text in family["images"]]
            for position in family["members"]:
                t = self._reflection(position)
                if position in skipped or t is None:
                    continue
                results.append(t.local_group == local)
                results.extend(act(self.group, t.element, g) == image
                               for k, (g, image) in enumerate(zip(self.gamma, images), start=1)
                               if (f, k) not in skipped_images)
        return self._count(results)

    def _w_chi0(self, lwg: LittleWeylGroup, table: Dict[str, List[str]]) -> Tuple[int, int]:
        """The printed t_i^p fix chi and generate the whole reflection subgroup W_chi^0"""
        results = []
        for name, words in sorted(table.items()):
            if name not in self.printed_characters:
                results.append(False)
                continue
            chi, j = self.printed_characters[name]
            orbit = self.character_orbits[j]
            sd = stabilizer(lwg, CharacterOrbit(chi, orbit.size, orbit.members), self.options.bound)
            powers = dict(sd.reflection_subgroup.generators)
            printed: Dict[int, int] = {}
            for word in words:
                match = _GENERATOR.match(word)
                position, power = int(match.group(1)), int(match.group(2) or 1)
                c = self.printed_classes[position]
                printed[c] = min(power, printed.get(c, power))
            fixes = all(c in powers and p % powers[c] == 0 for c, p in printed.items())
            generated = reflection_subgroup(lwg, printed, bound=self.options.bound)
            results.append(fixes and generated.fingerprint == sd.reflection_subgroup.fingerprint)
        return self._count(results)

    def _images(self, entries: List, skipped: set, coroots: bool) -> Tuple[int, int]:
        datum = self.theta.datum
        vectors = datum.coroots if coroots else datum.roots
        results = []
        for i, entry in enumerate(entries):
            if i + 1 in skipped:
                continue
            image = self.theta.element.apply_root(int(datum.simple[i]))
            expected = tuple(int(x) for x in entry) if coroots else parse_root(entry)
            results.append(tuple(int(x) for x in vectors[image]) == tuple(expected))
        return self._count(results)

    def _endoscopy_grid(self, grid: Dict) -> None:
        """Endoscopic subsystems over all theta-fixed points spanned by the printed basis"""
        basis = [[parse_rational(x) for x in b] for b in grid["basis"]]
        order = lcm(*(x.denominator for b in basis for x in b))
        special = untwisted_components(grid["special"])
        found: List[str] = []
        results = []
        try:
            for digits in itertools.product(range(order), repeat=len(basis)):
                v = [mod1(sum((Fraction(d) * b[i] for d, b in zip(digits, basis)), Fraction(0)))
                     for i in range(len(basis[0]))]
                components = untwisted_components(endoscopic_subsystem(self.theta, v).label)
                text = "".join(str(d) for d in digits)
                if not any(digits):
                    wanted = grid["origin"]
                elif text in grid["special_points"]:
                    wanted = grid["special"]
                else:
                    wanted = grid["generic"]
                results.append(components == untwisted_components(wanted))
                if components == special:
                    found.append(text)
        except CuspidalTablesError as e:
            logger.error(f"{self.record.label}: endoscopy grid: {e}")
            self.check("golden.endoscopy_grid", False, str(e))
            return
        good, total = self._count(results)
        self.compare("golden.endoscopy_grid", good, total)
        self.compare("golden.endoscopy_special", sorted(found), sorted(grid["special_points"]))
