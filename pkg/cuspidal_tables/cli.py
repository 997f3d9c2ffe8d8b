"""
Command-line interface for Cuspidal Tables
"""

import argparse
import json
import logging
import re
import sys
from typing import Any, Dict, List, Optional, Sequence

from cuspidal_tables.catalog import get_case, load_catalog
from cuspidal_tables.config import DEFAULT_JOBS, DEFAULT_LOG_FILE, MAX_S_OPTIONS
from cuspidal_tables.core.enums import ExitCode, MessageType, Verdict
from cuspidal_tables.core.exceptions import CatalogError, CuspidalTablesError
from cuspidal_tables.core.lattice import format_group, parse_rational
from cuspidal_tables.core.verifier import CaseVerifier, exit_code_of
from cuspidal_tables.protocols.base import AnalysisOptions
from cuspidal_tables.utils.logging_utils import setup_logging
from cuspidal_tables.utils.terminal import (Colors, print_message, print_table, should_use_colors,
                                            verdict_tag)

logger = logging.getLogger(__name__)

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_NOTATION = re.compile(r"(Phi|mu)(\d+)(?:\^(\d+))?")
_ROW_KEY = re.compile(r"^rows\[(\d+)\]\.")
_CELL_WIDTH = 60
_ROW_HEADERS = ["chi", "|W_chi|", "W_chi^0", "Hecke algebra", "source", "endoscopy", "verdict"]


def pretty(text: Any) -> str:
    """Render catalog notation with Greek letters and superscripts, e.g. mu5^2 -> μ5²"""
    def replace(match: re.Match) -> str:
        head = "Φ" if match.group(1) == "Phi" else "μ"
        power = match.group(3)
        return head + match.group(2) + (power.translate(_SUPERSCRIPTS) if power else "")
    return _NOTATION.sub(replace, str(text))


def _cell(value: Any) -> str:
    text = pretty(value if isinstance(value, str) else json.dumps(value, sort_keys=True, default=str))
    return text if len(text) <= _CELL_WIDTH else text[:_CELL_WIDTH - 3] + "..."


def json_report(report: Dict[str, Any]) -> Dict[str, Any]:
    """The stable JSON layout of one case"""
    if not report.get("success"):
        return {"case": report.get("case"), "error": report.get("error"),
                "error_type": report.get("error_type"), "computed": report.get("computed", {})}
    return {key: report[key] for key in ("case", "computed", "expected", "verdicts")}


def _dump(data: Any) -> None:
    print(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, default=str))


def parse_arguments(argv: Optional[Sequence[str]] = None):
    """
    Parse command-line arguments

    Returns:
        argparse.Namespace: Parsed arguments
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-color", action="store_true", help="Disable colored output")
    common.add_argument("--log-file", default=DEFAULT_LOG_FILE, help="Log file path, empty to disable")
    common.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="Logging level")

    parser = argparse.ArgumentParser(
        prog="cusp-tables",
        description="Cuspidal character sheaf tables for stably graded exceptional Lie algebras")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="Analyze one case")
    analyze.add_argument("label", help='Case label such as "E8,5s"')
    analyze.add_argument("--json", action="store_true", help="Print the report as JSON")
    analyze.add_argument("--enumerate-large", action="store_true",
                         help="Close W(E7) in full for the (E7, 2s) grading")
    analyze.add_argument("--bfun-heavy", action="store_true",
                         help="Compute the b-functions marked heavy")
    analyze.add_argument("--no-golden", action="store_true",
                         help="Skip the printed generator tables")

    tables = commands.add_parser("tables", parents=[common], help="Analyze every catalog case")
    tables.add_argument("--json", action="store_true", help="Print the reports as JSON")
    tables.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Worker processes")
    tables.add_argument("--bfun-heavy", action="store_true",
                        help="Compute the b-functions marked heavy")
    tables.add_argument("--enumerate-large", action="store_true",
                        help="Close W(E7) in full for the (E7, 2s) grading")

    bfun = commands.add_parser("bfun", parents=[common], help="b-function of a rank-one case")
    bfun.add_argument("label", help='Case label such as "G2,3s"')
    bfun.add_argument("--s", dest="s_values", help="Comma separated exponents s_1,...,s_k")
    for i in range(1, MAX_S_OPTIONS + 1):
        bfun.add_argument(f"--s{i}", help=f"Exponent s_{i} (default 0)")
    bfun.add_argument("--roots-only", action="store_true",
                      help="Only evaluate the tabulated roots and their b_exp")
    bfun.add_argument("--bfun-heavy", action="store_true",
                      help="Compute the b-functions marked heavy")

    commands.add_parser("list", parents=[common], help="List the catalog cases")

    return parser.parse_args(argv)


def _options(args) -> AnalysisOptions:
    return AnalysisOptions(enumerate_large=getattr(args, "enumerate_large", False),
                           bfun_heavy=getattr(args, "bfun_heavy", False),
                           golden=not getattr(args, "no_golden", False))


# analyze

def _row_table(report: Dict[str, Any]) -> List[List[str]]:
    computed, expected, verdicts = report["computed"], report["expected"], report["verdicts"]
    indices = sorted({int(m.group(1)) for key in computed if (m := _ROW_KEY.match(key))})
    rows = []
    for j in indices:
        key = f"rows[{j}]"

        def value(name: str) -> str:
            v = computed.get(f"{key}.{name}", expected.get(f"{key}.{name}"))
            return "-" if v is None else _cell(v)

        fields = [ok for k, ok in verdicts.items() if k.startswith(key + ".")]
        cited = any(k.startswith(key + ".") for k in report.get("cited", []))
        verdict = Verdict.of(all(fields)) if fields else (Verdict.CITED if cited else Verdict.SKIPPED)
        rows.append([value("chi"), value("stabilizer_order"), value("W_chi0"), value("hecke"),
                     value("hecke_source"), value("endoscopy"), verdict_tag(verdict)])
    return rows


def print_report(report: Dict[str, Any]) -> None:
    """Human readable summary of one case report"""
    if not report.get("success"):
        print_message(f"{report.get('case')}: {report.get('error')}", MessageType.ERROR, style="box")
        return
    computed = report["computed"]
    print_message(report["case"], MessageType.TITLE, style="divider")
    summary = []
    if "theta" in computed:
        summary.append(f"theta = {computed['theta']}")
    if "I_label" in computed:
        summary.append(f"I = {pretty(computed['I_label'])}")
    if "W.order" in computed and isinstance(computed["W.order"], int):
        summary.append(f"|W| = {computed['W.order']}")
    if "W.label" in computed:
        summary.append(f"W = {pretty(computed['W.label'])}")
    if "orbits" in computed and isinstance(computed["orbits"], int):
        summary.append(f"{computed['orbits']} orbits")
    if summary:
        print_message(", ".join(summary), MessageType.INFO)

    rows = _row_table(report)
    if rows:
        print_table(_ROW_HEADERS, rows)
        print()
    fields = []
    for key, ok in report["verdicts"].items():
        if _ROW_KEY.match(key):
            continue
        fields.append([key, _cell(computed.get(key, "")), _cell(report["expected"].get(key, "")),
                       verdict_tag(Verdict.of(ok))])
    for key in report.get("skipped", []):
        if not _ROW_KEY.match(key):
            fields.append([key, _cell(computed.get(key, "")), "", verdict_tag(Verdict.SKIPPED)])
    if fields:
        print_table(["field", "computed", "expected", "verdict"], fields)
    mismatches = [k for k, ok in report["verdicts"].items() if not ok]
    if mismatches:
        print_message(f"{len(mismatches)} mismatches: {', '.join(mismatches)}", MessageType.WARNING)
    else:
        print_message(f"{report['case']}: all {len(report['verdicts'])} compared fields match",
                      MessageType.SUCCESS)


def run_analyze(args) -> ExitCode:
    report = CaseVerifier(_options(args)).verify(args.label)
    if args.json:
        _dump(json_report(report))
    else:
        print_report(report)
    return ExitCode(report["exit_code"])


# tables

def run_tables(args) -> ExitCode:
    verifier = CaseVerifier(_options(args))
    reports = verifier.verify_all(jobs=max(1, args.jobs))
    identities = verifier.verify_identities()
    code = exit_code_of(reports)
    if any(not item.get("holds") for item in identities):
        code = max(code, ExitCode.MISMATCH)

    if args.json:
        _dump({"cases": [json_report(r) for r in reports], "identities": identities})
        return code

    for report in reports:
        cells = _row_table(report) if report.get("success") else []
        if cells:
            print_message(report["case"], MessageType.TITLE)
            print_table(_ROW_HEADERS, cells)
            print()

    rows = []
    for report in reports:
        if report.get("success"):
            verdicts = report["verdicts"]
            failed = sum(1 for ok in verdicts.values() if not ok)
            verdict = Verdict.of(not failed)
            rows.append([report["case"], str(len(verdicts)), str(failed),
                         str(len(report.get("skipped", []))), str(len(report.get("cited", []))),
                         verdict_tag(verdict)])
        else:
            rows.append([report["case"], "-", "-", "-", "-",
                         f"{Colors.RED}[{report.get('error_type', 'ERROR')}]{Colors.RESET}"])
    print_table(["case", "fields", "mismatches", "skipped", "cited", "verdict"], rows)
    print()
    for item in identities:
        verdict = Verdict.of(bool(item.get("holds")))
        print_message(f"identity {item['identity']}: {verdict_tag(verdict)}", MessageType.RESULT)
    matched = sum(1 for r in reports if r.get("exit_code") == ExitCode.OK)
    print_message(f"{matched} of {len(reports)} cases match the catalog",
                  MessageType.FINAL, style="box")
    return code


# bfun

def _exponents(args, k: int) -> List:
    """
    s_1..s_k from --s or --s1..--s9, zero where not given

    Raises:
        ValueError: Wrong number of exponents or an exponent beyond k
    """
    if args.s_values:
        values = [parse_rational(x.strip()) for x in args.s_values.split(",") if x.strip()]
        if len(values) != k:
            raise ValueError(f"expected {k} exponents, got {len(values)}")
        return values
    values = []
    for i in range(1, MAX_S_OPTIONS + 1):
        given = getattr(args, f"s{i}")
        if i > k and given is not None:
            raise ValueError(f"--s{i} given but the case has only {k} exponents")
        if i <= k:
            values.append(parse_rational(given) if given is not None else parse_rational("0"))
    return values


def run_bfun(args) -> ExitCode:
    record = get_case(args.label)
    if not record.has_prehom:
        print_message(f"{record.label} has no prehomogeneous data", MessageType.ERROR)
        return ExitCode.USAGE
    try:
        values = _exponents(args, record.prehom_case.k)
    except ValueError as e:
        print_message(str(e), MessageType.ERROR)
        return ExitCode.USAGE

    result = CaseVerifier(_options(args)).evaluate_bfunction(record.label, values, args.roots_only)
    if "stated_roots" not in result:
        hint = "; use --roots-only" if "not computed" in result["error"] else ""
        print_message(result["error"] + hint, MessageType.ERROR)
        return ExitCode(result["exit_code"])

    print_message(f"{record.label}  s = ({', '.join(result['s'])})", MessageType.TITLE, style="divider")
    if not result["character"]:
        print_message("psi_s is not a character of G_0 for these exponents", MessageType.WARNING)
    print_message("tabulated roots: " + ", ".join(result["stated_roots"]), MessageType.RESULT)
    if result["b_exp"] is not None:
        print_message(f"b_exp = {result['b_exp']}", MessageType.RESULT)
    else:
        print_message("the tabulated roots do not fill complete cyclotomic packets", MessageType.WARNING)
    if not result["success"]:
        print_message(f"{result['error_type']}: {result['error']}", MessageType.ERROR, style="box")
    elif "match" in result:
        print_message("computed roots:  " + ", ".join(result["computed_roots"]), MessageType.RESULT)
        if result["match"]:
            print_message("computed b-function matches the tabulated roots", MessageType.SUCCESS)
        else:
            print_message("computed b-function differs from the tabulated roots", MessageType.WARNING)
    return ExitCode(result["exit_code"])


# list

def run_list(args) -> ExitCode:
    rows = []
    for record in load_catalog():
        rows.append([record.label, record.family.name.lower(), str(record.grading.m),
                     str(record.grading.rank), str(record.group_order),
                     pretty(format_group(record.invariant_factors)), str(record.orbit_count)])
    print_table(["case", "family", "m", "rank", "|W|", "I", "orbits"], rows)
    return ExitCode.OK


COMMANDS = {
    "analyze": run_analyze,
    "tables": run_tables,
    "bfun": run_bfun,
    "list": run_list,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point for the CLI

    Returns:
        int: Process exit code
    """
    args = parse_arguments(argv)
    json_mode = getattr(args, "json", False)

    log_level = getattr(logging, args.log_level)
    setup_logging(args.log_file or None, level=log_level, terminal=not json_mode)

    # Disable colors if requested or if not in a terminal
    if args.no_color or not should_use_colors():
        Colors.disable_colors()

    if not json_mode:
        print_message("", style="divider")
        print_message("Cuspidal Tables", MessageType.TITLE, style="box")
        print_message("Exact character sheaf combinatorics of stably graded exceptional Lie algebras",
                      MessageType.INFO)
        print_message("", style="divider")

    try:
        return int(COMMANDS[args.command](args))
    except KeyboardInterrupt:
        print_message("\nInterrupted.", MessageType.WARNING, style="box")
        return 130
    except CatalogError as e:
        logger.error(str(e))
        print_message(str(e), MessageType.ERROR, style="box")
        return int(ExitCode.USAGE)
    except CuspidalTablesError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print_message(f"{type(e).__name__}: {e}", MessageType.ERROR, style="box")
        return int(ExitCode.INCONSISTENT)


if __name__ == "__main__":
    sys.exit(main())
