"""
Rank-one protocol: cyclic little Weyl groups and Hecke relations read off b-functions
"""

import logging
from typing import Any, Dict, List, Optional

import sympy

from cuspidal_tables.catalog import CaseRecord, EndoscopicCell, ExpectedRow, get_case
from cuspidal_tables.core.bfunction import (PrehomCase, b_exp, b_function, grid_check, restrict_psi,
                                            stated_b, stated_roots, verify_semi_invariants)
from cuspidal_tables.core.characters import character_endoscopy, dual_orbits
from cuspidal_tables.core.enums import HeckeSource, Verdict
from cuspidal_tables.core.exceptions import CuspidalTablesError, LatticeConditionError
from cuspidal_tables.core.hecke import (RANK_ONE_TYPES, CycloFactorization, HeckeDescriptor,
                                        parse_group_label, rank_one_relation, untwisted_components)
from cuspidal_tables.core.rootsys import WeylElement
from cuspidal_tables.protocols.base import AnalysisOptions, BaseProtocol

logger = logging.getLogger(__name__)


def cyclic_hecke(order: int, relation: CycloFactorization) -> HeckeDescriptor:
    """H_{mu_n, R} for a cyclic group with a single relation"""
    label = f"mu{order}"
    return HeckeDescriptor(label, parse_group_label(label), (relation,))


class RankOneProtocol(BaseProtocol):
    """b-function roots, their b_exp and the endoscopic cells of a rank-one grading"""

    def __init__(self, record: CaseRecord, options: Optional[AnalysisOptions] = None):
        super().__init__(record, options)
        self.prehom: Optional[PrehomCase] = None
        self.generator: Optional[WeylElement] = None
        self.relations: Dict[str, CycloFactorization] = {}

    def get_state(self) -> Dict[str, Any]:
        state = self.base_state()
        state.update({
            "theta": self.theta.source if self.theta else None,
            "variables": len(self.prehom.variables) if self.prehom else None,
            "relations": {chi: r.render() for chi, r in self.relations.items()},
        })
        return state

    def check_prerequisites(self) -> Dict[str, Any]:
        if self.record.grading.rank != 1:
            return {"success": False, "error": f"{self.record.label} is not a rank-one grading"}
        if not self.record.has_prehom:
            return {"success": False, "error": f"{self.record.label} has no prehomogeneous data"}
        return {"success": True, "theta": self.record.has_theta}

    def analyze(self) -> None:
        record = self.record
        if record.has_theta:
            self.analyze_grading()
            self._analyze_generator()
        else:
            for field in ("charpoly", "I", "rank", "W.generator", "orbits", "endoscopy"):
                self.skip(field, "no Weyl group element is stated")

        self.prehom = case = record.prehom_case
        report = verify_semi_invariants(case)
        self.check("semi_invariants", report.ok, {"checks": len(report.checks),
                                                  "failures": report.failures})
        for j, row in enumerate(record.rows):
            self._compare_row(j, row, case)
        if case.generators:
            self._compare_restrictions(case)
        self._compare_b_function(case)
        self._tag_sources()

    # W = mu_n

    def _generator(self) -> WeylElement:
        spec = self.record.w_generator or {}
        datum = self.theta.datum
        if "word" in spec:
            return datum.word(spec["word"])
        if "theta_power" in spec:
            return self.theta.power(int(spec["theta_power"]))
        if "coxeter" in spec:
            return datum.coxeter_element() ** int(spec["coxeter"])
        raise CuspidalTablesError(f"{self.record.label}: no generator of W is stated")

    def _analyze_generator(self) -> None:
        self.generator = w = self._generator()
        order = w.order()
        self.compare("W.generator", {"order": order, "commutes": w.commutes_with(self.theta.element)},
                     {"order": self.record.group_order, "commutes": True})

        group = self.group
        orbits = dual_orbits(group, [group.endomorphism(w.comatrix)])
        self.compare("orbits", len(orbits), self.record.orbit_count)
        computed = sorted(character_endoscopy(self.theta, group, o.representative.coords).label
                          for o in orbits[1:])
        expected = sorted(row.endoscopy or self.record.grading.base_type
                          for row in self.record.expanded_rows() if row.chi != "chi0")
        self.compare("endoscopy", computed, expected,
                     ok=sorted(untwisted_components(x) for x in computed)
                     == sorted(untwisted_components(x) for x in expected))

    # Rows

    def _compare_row(self, j: int, row: ExpectedRow, case: PrehomCase) -> None:
        key = f"rows[{j}]"
        self.computed[f"{key}.chi"] = row.chi
        if row.cited:
            logger.info(f"{self.record.label} {row.chi}: Hecke algebra quoted, no exponents stated")
            self.cite(f"{key}.hecke", row.hecke)
        else:
            roots = stated_roots(case, self.record.row_exponents(row))
            self.computed[f"{key}.roots"] = [str(r) for r in roots]
            relation = b_exp(roots)
            self.relations[row.chi] = relation
            self.compare_hecke(f"{key}.hecke", cyclic_hecke(self.record.group_order, relation), row.hecke)
            self.compare(f"{key}.degree", relation.degree(), row.stabilizer_order)
        if row.endoscopic_hecke is not None:
            self._compare_endoscopic_cell(f"{key}.endoscopic_hecke", row.endoscopic_hecke)

    def _compare_endoscopic_cell(self, field: str, cell: EndoscopicCell) -> None:
        source = cell.source
        if source.startswith("rank_one:"):
            label = source.split(":", 1)[1]
            n_s, _ = RANK_ONE_TYPES[label]
            self.compare_hecke(field, cyclic_hecke(n_s, rank_one_relation(label, 1)), cell.notation)
        elif source.startswith("case:"):
            other = get_case(source.split(":", 1)[1])
            trivial = next(row for row in other.rows if row.chi == "chi0")
            relation = b_exp(stated_roots(other.prehom_case, other.row_exponents(trivial)))
            self.compare_hecke(field, cyclic_hecke(other.group_order, relation), cell.notation)
        else:
            self.cite(field, cell.notation)

    def _compare_restrictions(self, case: PrehomCase) -> None:
        """psi_{s}|_I is trivial for chi0 and separates the other rows"""
        restricted: Dict[str, Any] = {}
        try:
            for row in self.record.rows:
                if not row.cited and row.s is not None:
                    restricted[row.chi] = restrict_psi(case, self.record.row_exponents(row))
        except LatticeConditionError as e:
            self.check("psi_restriction", False, str(e))
            return
        trivial = all(chi.is_trivial == (name == "chi0") for name, chi in restricted.items())
        distinct = len({chi.coords for chi in restricted.values()}) == len(restricted)
        self.check("psi_restriction", trivial and distinct,
                   {name: chi.render() for name, chi in sorted(restricted.items())})

    # b(s)

    def _compare_b_function(self, case: PrehomCase) -> None:
        if case.computable == "none":
            self.skip("b_function", "no differential operator is stated")
            return
        if case.computable == "heavy" and not self.options.bfun_heavy:
            self.skip("b_function", "needs --bfun-heavy")
            return
        b = b_function(case, heavy=self.options.bfun_heavy)
        expected = stated_b(case)
        self.compare("b_function", str(b), str(expected), ok=sympy.expand(b - expected) == 0)
        self.check("b_grid", True, grid_check(case))

    def _tag_sources(self) -> None:
        """Hecke cells rest on the computed b(s) once it matches the tabulated roots"""
        verified = self.verdicts.get("b_function") is Verdict.MATCH
        source = HeckeSource.COMPUTED_B_FUNCTION if verified else HeckeSource.TABULATED_ROOTS
        for j, row in enumerate(self.record.rows):
            if not row.cited:
                self.computed[f"rows[{j}].hecke_source"] = source.value
