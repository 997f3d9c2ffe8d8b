"""
Case verifier: dispatches catalog cases to their protocols and collects reports
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Type

from cuspidal_tables.catalog import case_labels, get_case, load_identities
from cuspidal_tables.core.bfunction import (b_exp, b_function, lattice_condition, rational_roots,
                                            stated_roots, verify_identity)
from cuspidal_tables.core.enums import CaseFamily, ExitCode
from cuspidal_tables.core.exceptions import CatalogError, CuspidalTablesError, IncompleteCyclotomicError
from cuspidal_tables.core.lattice import parse_rational
from cuspidal_tables.protocols.base import AnalysisOptions, BaseProtocol
from cuspidal_tables.protocols.involution import InvolutionProtocol
from cuspidal_tables.protocols.rank_one import RankOneProtocol
from cuspidal_tables.protocols.reflection import ReflectionProtocol

logger = logging.getLogger(__name__)

PROTOCOLS: Dict[CaseFamily, Type[BaseProtocol]] = {
    CaseFamily.REFLECTION: ReflectionProtocol,
    CaseFamily.INVOLUTION: InvolutionProtocol,
    CaseFamily.RANK_ONE: RankOneProtocol,
}


def _verify_one(label: str, options: AnalysisOptions, catalog_path: Optional[str]) -> Dict[str, Any]:
    return CaseVerifier(options, catalog_path).verify(label)


def exit_code_of(reports: Sequence[Dict[str, Any]]) -> ExitCode:
    """The worst exit code over several reports"""
    return ExitCode(max((r.get("exit_code", 0) for r in reports), default=0))


class CaseVerifier:
    """Runs the analysis of catalog cases and compares them with the tabulated values"""

    def __init__(self, options: Optional[AnalysisOptions] = None, catalog_path: Optional[str] = None):
        """
        Initialize the verifier

        Args:
            options: Switches for expensive paths
            catalog_path: Alternative catalog document, the embedded one by default
        """
        self.options = options or AnalysisOptions()
        self.catalog_path = catalog_path

    def protocol_for(self, label: str) -> BaseProtocol:
        """
        Build the protocol for a case

        Raises:
            CatalogError: The label is not in the catalog
        """
        record = get_case(label, self.catalog_path)
        return PROTOCOLS[record.family](record, self.options)

    def verify(self, label: str) -> Dict[str, Any]:
        """
        Analyze one case

        Args:
            label: Case label such as "E8,5s"

        Returns:
            Dictionary with the report, or success False with the error and
            exit code
        """
        try:
            protocol = self.protocol_for(label)
        except CatalogError as e:
            logger.error(str(e))
            return {"success": False, "case": label, "error": str(e), "exit_code": int(ExitCode.USAGE)}
        return protocol.run()

    def verify_all(self, labels: Optional[Sequence[str]] = None, jobs: int = 1) -> List[Dict[str, Any]]:
        """
        Analyze several cases, each in its own worker when jobs > 1

        Args:
            labels: Cases to analyze, every catalog case by default
            jobs: Number of worker processes

        Returns:
            list: Reports in the order of the labels
        """
        labels = list(labels) if labels is not None else case_labels(self.catalog_path)
        logger.info(f"Verifying {len(labels)} cases with {jobs} worker(s)")
        if jobs <= 1:
            return [self.verify(label) for label in labels]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_verify_one, label, self.options, self.catalog_path)
                       for label in labels]
            return [f.result() for f in futures]

    def verify_identities(self) -> List[Dict[str, Any]]:
        """Check the embedded composite identities"""
        results = []
        for identity in load_identities(self.catalog_path):
            try:
                ok = verify_identity(identity)
                results.append({"success": True, "identity": identity.name, "holds": ok})
            except CuspidalTablesError as e:
                logger.error(f"identity {identity.name}: {e}")
                results.append({"success": False, "identity": identity.name, "error": str(e)})
        return results

    def evaluate_bfunction(self, label: str, values: Optional[Sequence] = None,
                           roots_only: bool = False) -> Dict[str, Any]:
        """
        Tabulated and computed b-function of a rank-one case at given exponents

        Args:
            label: Rank-one case label
            values: s_1..s_k, all zero by default
            roots_only: Only evaluate the tabulated roots and their b_exp

        Returns:
            Dictionary with the roots, b_exp and, unless roots_only, the
            computed roots and whether they agree
        """
        try:
            record = get_case(label, self.catalog_path)
            if not record.has_prehom:
                raise CatalogError(f"{record.label} has no prehomogeneous data")
            case = record.prehom_case
            values = [parse_rational(v) for v in values] if values is not None else [Fraction(0)] * case.k
            if len(values) != case.k:
                raise CatalogError(f"{record.label} takes {case.k} exponents, got {len(values)}")
            heavy = self.options.bfun_heavy
            if not roots_only and not (case.computable == "required"
                                       or (case.computable == "heavy" and heavy)):
                raise CatalogError(f"b-function of {record.label} is not computed"
                                   + (" without --bfun-heavy" if case.computable == "heavy" else ""))
        except CatalogError as e:
            logger.error(str(e))
            return {"success": False, "case": label, "error": str(e), "exit_code": int(ExitCode.USAGE)}

        stated = sorted(stated_roots(case, values))
        result: Dict[str, Any] = {
            "success": True,
            "case": record.label,
            "s": [str(v) for v in values],
            "character": lattice_condition(case, values),
            "stated_roots": [str(r) for r in stated],
            "exit_code": int(ExitCode.OK),
        }
        try:
            result["b_exp"] = b_exp(stated).render(unicode=True)
        except IncompleteCyclotomicError as e:
            logger.warning(f"{record.label}: {e}")
            result["b_exp"] = None
        if roots_only:
            return result

        try:
            b = b_function(case, values, heavy=self.options.bfun_heavy)
            found = rational_roots(b)
        except CuspidalTablesError as e:
            logger.error(f"{record.label}: {type(e).__name__}: {e}")
            return {**result, "success": False, "error": str(e), "error_type": type(e).__name__,
                    "exit_code": int(ExitCode.INCONSISTENT)}
        result.update({
            "b": str(b),
            "computed_roots": [str(r) for r in found],
            "match": found == stated,
            "exit_code": int(ExitCode.OK if found == stated else ExitCode.MISMATCH),
        })
        return result
