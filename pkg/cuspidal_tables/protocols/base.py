"""
Base protocol class for Cuspidal Tables
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cuspidal_tables.catalog import CaseRecord, ExpectedRow
from cuspidal_tables.config import ENUMERATION_BOUND
from cuspidal_tables.core.enums import ExitCode, Verdict
from cuspidal_tables.core.exceptions import CuspidalTablesError
from cuspidal_tables.core.grading import (CartanSubspace, ThetaAction, build_theta, cartan_subspace,
                                          tau_character, theta_orbits, torus_fixed_points)
from cuspidal_tables.core.hecke import (CycloFactorization, GroupFingerprint, HeckeDescriptor,
                                        parse_hecke_notation, untwisted_components)
from cuspidal_tables.core.lattice import FinAbGroup, format_group

logger = logging.getLogger(__name__)

# Fingerprint of W_chi^0 and the set of its Hecke relations
Signature = Tuple[int, GroupFingerprint, frozenset]


@dataclass(frozen=True)
class AnalysisOptions:
    """
    Switches for the expensive parts of an analysis

    Attributes:
        enumerate_large: Close W(E7) in full for (E7, 2s)
        bfun_heavy: Compute the b-functions marked heavy
        golden: Compare against the printed generator tables
        bound: Enumeration bound for little Weyl groups
    """
    enumerate_large: bool = False
    bfun_heavy: bool = False
    golden: bool = True
    bound: int = ENUMERATION_BOUND


def expected_signature(row: ExpectedRow) -> Signature:
    hecke = parse_hecke_notation(row.hecke)
    return row.stabilizer_order, hecke.fingerprint, hecke.relation_set()


def match_rows(signatures: Sequence[Signature], rows: Sequence[ExpectedRow],
               pins: Optional[Dict[int, str]] = None) -> List[Optional[ExpectedRow]]:
    """
    Assign an expected row to every computed orbit

    Rows are used as often as their count says. An orbit pinned to a row
    name takes that row; the others take the first free row with the same
    signature, then the first free row with the same stabilizer order, then
    any free row.

    Args:
        signatures: Computed (|W_chi|, W_chi^0 fingerprint, relations) per orbit
        rows: Expected rows of the case
        pins: Orbit index -> row name from printed character values

    Returns:
        list: The row assigned to each orbit, None when the rows ran out
    """
    free = {i: row.count for i, row in enumerate(rows)}
    expected = [expected_signature(row) for row in rows]
    assigned: List[Optional[ExpectedRow]] = [None] * len(signatures)

    def take(j: int, accept) -> bool:
        for i, row in enumerate(rows):
            if free[i] and accept(i, row):
                free[i] -= 1
                assigned[j] = row
                return True
        return False

    for j, name in sorted((pins or {}).items()):
        take(j, lambda i, row: row.chi == name)
    passes = [
        lambda j: lambda i, row: expected[i] == signatures[j],
        lambda j: lambda i, row: row.stabilizer_order == signatures[j][0],
        lambda j: lambda i, row: True,
    ]
    for make in passes:
        for j in range(len(signatures)):
            if assigned[j] is None:
                take(j, make(j))
    return assigned


class BaseProtocol(ABC):
    """Base class for the per-family analysis pipelines"""

    def __init__(self, record: CaseRecord, options: Optional[AnalysisOptions] = None):
        """
        Initialize the base protocol

        Args:
            record: Catalog case to analyze
            options: Switches for expensive paths
        """
        self.record = record
        self.options = options or AnalysisOptions()
        self.computed: Dict[str, Any] = {}
        self.expected: Dict[str, Any] = {}
        self.verdicts: Dict[str, Verdict] = {}
        self.theta: Optional[ThetaAction] = None
        self.cartan: Optional[CartanSubspace] = None
        self.group: Optional[FinAbGroup] = None
        self.orbits: List[Tuple[int, ...]] = []

        logger.debug(f"Protocol {type(self).__name__} initialized for {record.label}")

    # Bookkeeping

    def compare(self, field: str, computed: Any, expected: Any, ok: Optional[bool] = None) -> Verdict:
        """
        Record a computed value, its catalog counterpart and the verdict

        Args:
            field: Report key
            computed: Value found by computation
            expected: Value claimed by the catalog
            ok: Outcome when plain equality is not the criterion

        Returns:
            Verdict: MATCH or MISMATCH
        """
        self.computed[field] = computed
        self.expected[field] = expected
        verdict = Verdict.of(computed == expected if ok is None else ok)
        self.verdicts[field] = verdict
        if verdict is Verdict.MISMATCH:
            logger.warning(f"{self.record.label}: {field} computed {computed}, expected {expected}")
        return verdict

    def check(self, field: str, ok: bool, computed: Any = None) -> Verdict:
        """Record a self-consistency check with no catalog counterpart"""
        if computed is not None:
            self.computed[field] = computed
        verdict = Verdict.of(ok)
        self.verdicts[field] = verdict
        if not ok:
            logger.warning(f"{self.record.label}: check {field} failed")
        return verdict

    def skip(self, field: str, reason: str) -> None:
        self.verdicts[field] = Verdict.SKIPPED
        self.computed[field] = reason
        logger.info(f"{self.record.label}: {field} skipped ({reason})")

    def cite(self, field: str, expected: Any) -> None:
        self.verdicts[field] = Verdict.CITED
        self.expected[field] = expected

    @property
    def mismatches(self) -> List[str]:
        return [k for k, v in self.verdicts.items() if v is Verdict.MISMATCH]

    # Shared grading computations

    def analyze_grading(self) -> None:
        """
        theta, its root orbits, I = T^theta, the Cartan subspace and tau

        Raises:
            NonStableGradingError: theta is not a stable grading of the stated kind
        """
        record = self.record
        self.theta = theta = build_theta(record.grading)
        self.computed["theta"] = theta.source
        if record.grading.charpoly:
            self.compare("charpoly", theta.charpoly().render(),
                         CycloFactorization.parse(record.grading.charpoly).render())
        self.orbits = theta_orbits(theta)
        self.check("theta_orbits", all(len(o) == record.grading.m for o in self.orbits),
                   {"count": len(self.orbits), "size": record.grading.m})
        self.group = group = torus_fixed_points(theta)
        self.compare("I", list(group.factors), list(record.invariant_factors))
        self.computed["I_label"] = format_group(group.factors)
        self.cartan = cartan = cartan_subspace(theta)
        self.compare("rank", cartan.dim, record.grading.rank)
        if group.order > 1:
            tau = tau_character(theta, group, self.orbits)
            self.check("tau_trivial", not any(tau), [str(t) for t in tau])
        else:
            self.skip("tau_trivial", "I is trivial")

    def compare_endoscopy(self, field: str, computed_label: str, expected_label: Optional[str]) -> Verdict:
        """Compare subsystem labels up to twist prefixes and the B/C exchange"""
        expected = expected_label or self.record.grading.base_type
        return self.compare(field, computed_label, expected,
                            ok=untwisted_components(computed_label) == untwisted_components(expected))

    def compare_hecke(self, field: str, computed: Optional[HeckeDescriptor], notation: str) -> Verdict:
        expected = parse_hecke_notation(notation)
        if computed is None:
            return self.compare(field, None, notation, ok=False)
        return self.compare(field, computed.render(), notation, ok=computed.matches(expected))

    # Protocol interface

    @abstractmethod
    def get_state(self) -> Dict[str, Any]:
        """
        Get the current state of the protocol

        Returns:
            Dictionary with protocol state information
        """
        pass

    @abstractmethod
    def check_prerequisites(self) -> Dict[str, Any]:
        """
        Check that the catalog record carries what the protocol needs

        Returns:
            Dictionary with prerequisite check information
        """
        pass

    @abstractmethod
    def analyze(self) -> None:
        """Compute every field of the case and record the verdicts"""
        pass

    def base_state(self) -> Dict[str, Any]:
        return {
            "success": True,
            "case": self.record.label,
            "family": self.record.family.name.lower(),
            "fields_checked": len(self.verdicts),
            "mismatches": self.mismatches,
        }

    def report(self) -> Dict[str, Any]:
        """
        The analysis result in the JSON report layout

        Returns:
            Dictionary with case, computed, expected and verdicts; verdicts
            of compared fields are booleans, skipped and cited fields are
            listed separately
        """
        verdicts = {k: v is Verdict.MATCH for k, v in self.verdicts.items()
                    if v in (Verdict.MATCH, Verdict.MISMATCH)}
        exit_code = ExitCode.MISMATCH if self.mismatches else ExitCode.OK
        return {
            "success": True,
            "case": self.record.label,
            "computed": self.computed,
            "expected": self.expected,
            "verdicts": verdicts,
            "skipped": sorted(k for k, v in self.verdicts.items() if v is Verdict.SKIPPED),
            "cited": sorted(k for k, v in self.verdicts.items() if v is Verdict.CITED),
            "exit_code": int(exit_code),
        }

    def run(self) -> Dict[str, Any]:
        """
        Run the analysis and compare with the catalog

        Returns:
            Dictionary with the report, or the error when a computation
            found the case inconsistent
        """
        prerequisites = self.check_prerequisites()
        if not prerequisites["success"]:
            return {**prerequisites, "case": self.record.label, "exit_code": int(ExitCode.USAGE)}
        logger.info(f"Analyzing {self.record.label}")
        for note in self.record.errata:
            logger.warning(f"{self.record.label}: erratum: {note}")
        try:
            self.analyze()
        except CuspidalTablesError as e:
            logger.error(f"{self.record.label}: {type(e).__name__}: {e}")
            return {
                "success": False,
                "case": self.record.label,
                "error": str(e),
                "error_type": type(e).__name__,
                "computed": self.computed,
                "exit_code": int(ExitCode.INCONSISTENT),
            }
        report = self.report()
        logger.info(f"{self.record.label}: {len(self.verdicts)} fields, "
                    f"{len(self.mismatches)} mismatches")
        return report
