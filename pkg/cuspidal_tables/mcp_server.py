from mcp.server.fastmcp import FastMCP
import logging
from typing import Dict, Any, List, Optional

from cuspidal_tables.catalog import load_catalog
from cuspidal_tables.cli import json_report, pretty
from cuspidal_tables.core.lattice import format_group
from cuspidal_tables.core.verifier import CaseVerifier, exit_code_of
from cuspidal_tables.protocols.base import AnalysisOptions

logger = logging.getLogger(__name__)

# Initialize FastMCP server
mcp = FastMCP("cuspidal-tables")


@mcp.tool()
async def analyze_case(label: str, enumerate_large: bool = False) -> Dict[str, Any]:
    """
    Analyze one stable grading and compare every computed field with the catalog

    Args:
        label: Case label such as "E8,5s" or "(E6, 3_s)"
        enumerate_large: Close W(E7) in full for the (E7, 2s) grading

    Returns:
        Dictionary with the computed and expected values and a verdict per field
    """
    report = CaseVerifier(AnalysisOptions(enumerate_large=enumerate_large)).verify(label)
    if not report.get("success"):
        return {"success": False, "error": report.get("error"), "exit_code": report.get("exit_code")}
    return {"success": True, "exit_code": report["exit_code"], **json_report(report)}


@mcp.tool()
async def render_tables(json_output: bool = True) -> Dict[str, Any]:
    """
    Analyze every catalog case and the embedded identities

    Args:
        json_output: Return the full reports; otherwise one summary line per case

    Returns:
        Dictionary with the per-case results and the overall exit code
    """
    verifier = CaseVerifier()
    try:
        reports = verifier.verify_all()
        identities = verifier.verify_identities()
    except Exception as e:
        logger.error(f"Error rendering tables: {e}")
        return {"success": False, "error": str(e)}
    result: Dict[str, Any] = {"success": True, "exit_code": int(exit_code_of(reports)),
                              "identities": identities}
    if json_output:
        result["cases"] = [json_report(r) for r in reports]
        return result
    lines = []
    for report in reports:
        if report.get("success"):
            failed = [k for k, ok in report["verdicts"].items() if not ok]
            status = "MATCH" if not failed else "MISMATCH " + ", ".join(failed)
        else:
            status = f"ERROR {report.get('error')}"
        lines.append(f"{report['case']}: {status}")
    result["text"] = "\n".join(lines)
    return result


@mcp.tool()
async def compute_bfunction(label: str, s_values: Optional[List[str]] = None,
                            roots_only: bool = False) -> Dict[str, Any]:
    """
    Tabulated and computed b-function of a rank-one case

    Args:
        label: Rank-one case label such as "G2,3s"
        s_values: Exponents s_1..s_k as rationals such as "1/2", all zero by default
        roots_only: Only evaluate the tabulated roots and their b_exp

    Returns:
        Dictionary with the roots, b_exp and whether the computed roots agree
    """
    return CaseVerifier().evaluate_bfunction(label, s_values, roots_only)


@mcp.tool()
async def list_cases() -> Dict[str, Any]:
    """
    List the stable gradings in the catalog

    Returns:
        Dictionary with one entry per case
    """
    cases = []
    for record in load_catalog():
        cases.append({
            "label": record.label,
            "family": record.family.name.lower(),
            "m": record.grading.m,
            "rank": record.grading.rank,
            "W": pretty(record.group["label"]),
            "W_order": record.group_order,
            "I": pretty(format_group(record.invariant_factors)),
            "orbits": record.orbit_count,
        })
    return {"success": True, "cases": cases}


def main():
    """Run the tool server over stdio"""
    mcp.run()


if __name__ == "__main__":
    main()
