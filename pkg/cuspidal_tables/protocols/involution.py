"""
Involution protocol: stable Z/2 gradings, where theta acts on the torus by -1
"""

import logging
from typing import Any, Dict, List, Optional

from cuspidal_tables.catalog import CaseRecord, ExpectedRow
from cuspidal_tables.config import LARGE_ENUMERATION_BOUND
from cuspidal_tables.core.characters import (CharacterOrbit, StabilizerData, character_endoscopy,
                                             dual_orbits, involution_stabilizer)
from cuspidal_tables.core.exceptions import GroupEnumerationError
from cuspidal_tables.core.littleweyl import generate_group
from cuspidal_tables.protocols.base import AnalysisOptions, BaseProtocol, match_rows

logger = logging.getLogger(__name__)

# Weyl groups closed by default; E7 needs --enumerate-large, E8 is never enumerated
DEFAULT_ENUMERATED = ("G2", "F4", "E6")


class InvolutionProtocol(BaseProtocol):
    """Orbits of W on the 2-torsion of the torus and their reflection stabilizers"""

    def __init__(self, record: CaseRecord, options: Optional[AnalysisOptions] = None):
        super().__init__(record, options)
        self.character_orbits: List[CharacterOrbit] = []
        self.stabilizers: List[StabilizerData] = []
        self.assigned: List[Optional[ExpectedRow]] = []

    def get_state(self) -> Dict[str, Any]:
        state = self.base_state()
        state["orbits"] = len(self.character_orbits)
        return state

    def check_prerequisites(self) -> Dict[str, Any]:
        if self.record.grading.m != 2:
            return {"success": False, "error": f"{self.record.label} is not a Z/2 grading"}
        return {"success": True}

    def analyze(self) -> None:
        self.analyze_grading()
        datum = self.theta.datum
        self._weyl_order()

        group = self.group
        reflections = [datum.simple_reflection(i) for i in range(1, datum.rank + 1)]
        self.character_orbits = orbits = dual_orbits(
            group, [group.endomorphism(s.comatrix) for s in reflections])
        self.compare("orbits", len(orbits), self.record.orbit_count)
        self.stabilizers = [involution_stabilizer(datum, group, orbit) for orbit in orbits]
        signatures = []
        for sd in self.stabilizers:
            sub = sd.reflection_subgroup
            signatures.append((sd.stabilizer_order, sub.fingerprint, sub.hecke.relation_set()))
        self.assigned = match_rows(signatures, self.record.rows)

        for j, (orbit, sd, row) in enumerate(zip(orbits, self.stabilizers, self.assigned)):
            key = f"rows[{j}]"
            sub = sd.reflection_subgroup
            self.computed[f"{key}.character"] = orbit.representative.render()
            self.computed[f"{key}.orbit_size"] = orbit.size
            if row is None:
                self.check(f"{key}.row", False, "no tabulated row left")
                continue
            self.computed[f"{key}.chi"] = row.chi
            self.compare(f"{key}.stabilizer_order", sd.stabilizer_order, row.stabilizer_order)
            self.compare_hecke(f"{key}.hecke", sub.hecke, row.hecke)
            self.check(f"{key}.subgroup_divides", sd.stabilizer_order % sub.order == 0)
            endoscopic = character_endoscopy(self.theta, group, orbit.representative.coords)
            self.compare_endoscopy(f"{key}.endoscopy", endoscopic.label, row.endoscopy)
            # for theta = -1 the endoscopic subsystem is dual to the stabilizer's root system
            self.compare_endoscopy(f"{key}.endoscopy_subsystem", sub.subsystem.label, row.endoscopy)

    def _weyl_order(self) -> None:
        """Close W from the simple reflections where that is affordable"""
        datum = self.theta.datum
        label = datum.label
        if label in DEFAULT_ENUMERATED:
            bound = self.options.bound
        elif label == "E7" and self.options.enumerate_large:
            bound = LARGE_ENUMERATION_BOUND
        else:
            self.skip("W.order", f"W({label}) is not enumerated"
                      + ("" if label == "E8" else " without --enumerate-large"))
            return
        generators = [datum.simple_reflection(i) for i in range(1, datum.rank + 1)]
        try:
            closure = generate_group(datum, generators, bound=bound)
        except GroupEnumerationError as e:
            logger.warning(f"{self.record.label}: {e}")
            self.skip("W.order", str(e))
            return
        self.compare("W.order", closure.order, self.record.group_order)
