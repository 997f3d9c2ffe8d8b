"""
Embedded catalog of stable gradings and their expected tables
"""

import json
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Tuple

from cuspidal_tables.config import CATALOG_PATH, CATALOG_VERSION
from cuspidal_tables.core.bfunction import CompositeIdentity, IGenerator, PrehomCase, principal_case
from cuspidal_tables.core.enums import CaseFamily
from cuspidal_tables.core.exceptions import CatalogError, CuspidalTablesError
from cuspidal_tables.core.grading import GradingCase
from cuspidal_tables.core.hecke import CycloFactorization, parse_hecke_notation
from cuspidal_tables.core.lattice import parse_rational
from cuspidal_tables.core.rootsys import CARTAN_DATA, build_root_system

logger = logging.getLogger(__name__)

FAMILIES = {
    "reflection": CaseFamily.REFLECTION,
    "involution": CaseFamily.INVOLUTION,
    "rank_one": CaseFamily.RANK_ONE,
}
THETA_KEYS = {"search", "e_word", "word", "twist", "power", "coxeter", "negate"}
W_GENERATOR_KEYS = {"word", "theta_power", "coxeter"}
ENDOSCOPIC_SOURCES = re.compile(r"^(computed|cited|rank_one:.+|case:.+)$")
REQUIRED_KEYS = ("label", "type", "twist", "m", "rank", "family", "I", "orbits", "group", "rows")

_LABEL_ALIASES = str.maketrans({"²": "2", "³": "3", "_": "", " ": ",", "(": None, ")": None})


def normalize_label(text: str) -> str:
    """
    Canonical form of a case label

    "(E8, 5_s)", "E8 5s" and "E8,5s" all become "E8,5s"; superscript twists
    are written as digits.
    """
    label = text.strip().translate(_LABEL_ALIASES)
    label = re.sub(r",+", ",", label).strip(",")
    return label


@dataclass(frozen=True)
class EndoscopicCell:
    """The Hecke cell of the endoscopic group and where it comes from"""
    notation: str
    source: str

    @property
    def derivable(self) -> bool:
        return self.source != "cited"


@dataclass(frozen=True)
class ExpectedRow:
    """
    One tabulated (case, chi) row

    Attributes:
        chi: Row name, chi0 for the trivial character
        stabilizer_order: |W_chi|
        hecke: Hecke cell in catalog notation
        count: Number of orbits sharing the row
        endoscopy: Label of the endoscopic group, None for the group itself
        endoscopic_hecke: Hecke cell of the endoscopic group when tabulated
        s: Exponents s_1..s_k of the character psi for rank-one rows
        cited: The cell is quoted rather than derived
    """
    chi: str
    stabilizer_order: int
    hecke: str
    count: int = 1
    endoscopy: Optional[str] = None
    endoscopic_hecke: Optional[EndoscopicCell] = None
    s: Optional[Tuple[str, ...]] = None
    cited: bool = False

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExpectedRow":
        cell = data.get("endoscopic_hecke")
        return cls(
            chi=data["chi"],
            stabilizer_order=int(data["stabilizer_order"]),
            hecke=data["hecke"],
            count=int(data.get("count", 1)),
            endoscopy=data.get("endoscopy"),
            endoscopic_hecke=EndoscopicCell(cell["notation"], cell["source"]) if cell else None,
            s=tuple(data["s"]) if "s" in data else None,
            cited=bool(data.get("cited", False)),
        )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"chi": self.chi}
        if self.count != 1:
            data["count"] = self.count
        data["stabilizer_order"] = self.stabilizer_order
        data["hecke"] = self.hecke
        if self.cited:
            data["cited"] = True
        if self.s is not None:
            data["s"] = list(self.s)
        if self.endoscopy is not None:
            data["endoscopy"] = self.endoscopy
        if self.endoscopic_hecke is not None:
            data["endoscopic_hecke"] = {"notation": self.endoscopic_hecke.notation,
                                        "source": self.endoscopic_hecke.source}
        return data

    def exponents(self) -> Optional[List[Fraction]]:
        return [parse_rational(x) for x in self.s] if self.s is not None else None


@dataclass
class CaseRecord:
    """
    A grading together with everything the tables claim about it

    Attributes:
        grading: Type, twist, order, rank, theta and characteristic polynomial
        invariant_factors: Expected invariant factors of I
        orbit_count: Expected number of W-orbits on the characters of I
        group: Expected little Weyl group: label, order, reflection census
            and the class families that produce it
        rows: Expected per-character rows
        carter: Conjugacy class label of w, when tabulated
        rank_one_types: Rank-one gradings attached to the reflections
        golden: Printed generator tables used as oracles
        prehom: Prehomogeneous data of a rank-one case
        principal: The case is a Coxeter-number grading
        marks: Affine marks stored for twisted Coxeter-number gradings
        center: Generator of Z_G as an order and coroot coordinates
        w_generator: How a generator of the cyclic W is written
        s_fixed: The stated b-function has constant roots
        errata: Print errors corrected or skipped in this record
    """
    grading: GradingCase
    invariant_factors: Tuple[int, ...]
    orbit_count: int
    group: Dict[str, Any]
    rows: Tuple[ExpectedRow, ...]
    carter: Optional[str] = None
    rank_one_types: Tuple[str, ...] = ()
    golden: Optional[Dict[str, Any]] = None
    prehom: Optional[Dict[str, Any]] = None
    principal: bool = False
    marks: Optional[Tuple[int, ...]] = None
    center: Optional[Dict[str, Any]] = None
    w_generator: Optional[Dict[str, Any]] = None
    s_fixed: bool = False
    errata: Tuple[str, ...] = field(default=())

    @property
    def label(self) -> str:
        return self.grading.label

    @property
    def family(self) -> CaseFamily:
        return self.grading.family

    @property
    def group_order(self) -> int:
        return int(self.group["order"])

    @property
    def has_theta(self) -> bool:
        return bool(self.grading.theta_spec)

    @property
    def has_prehom(self) -> bool:
        return self.principal or self.prehom is not None

    def expected_census(self) -> Dict[int, int]:
        return {int(k): int(v) for k, v in self.group.get("census", {}).items()}

    def expanded_rows(self) -> List[ExpectedRow]:
        """Rows repeated by their count, one per orbit"""
        return [row for row in self.rows for _ in range(row.count)]

    @cached_property
    def prehom_case(self) -> PrehomCase:
        """
        The prehomogeneous representation of a rank-one case

        Coxeter-number cases are built from their affine marks; the others
        from the stored variables, weights and semi-invariants.

        Raises:
            CatalogError: The case carries no prehomogeneous data
        """
        if self.principal:
            return self._principal_case()
        if self.prehom is None:
            raise CatalogError(f"{self.label} has no prehomogeneous data")
        return PrehomCase.from_dict(self.label, self.prehom)

    def _principal_case(self) -> PrehomCase:
        base = self.grading.base_type
        if self.marks is not None:
            marks, cartan = self.marks, None
        else:
            cartan = CARTAN_DATA[base][0]
            marks = build_root_system(base).highest_root
        generators = []
        if self.center is not None:
            q = [parse_rational(x) for x in self.center["q"]]
            n = len(q)
            psi = tuple(sum((q[i] * cartan[i][j] for i in range(n)), Fraction(0)) for j in range(n))
            generators.append(IGenerator(int(self.center["order"]), psi))
        return principal_case(self.label, marks, cartan, self.group_order, generators)

    def row_exponents(self, row: ExpectedRow) -> List[Fraction]:
        """s_1..s_k of a rank-one row, zero when the roots do not depend on them"""
        values = row.exponents()
        if values is None:
            if not self.s_fixed and row.chi != "chi0":
                raise CatalogError(f"{self.label} {row.chi} has no exponents")
            return [Fraction(0)] * self.prehom_case.k
        return values

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CaseRecord":
        grading = GradingCase(
            label=data["label"],
            base_type=data["type"],
            twist=int(data["twist"]),
            m=int(data["m"]),
            rank=int(data["rank"]),
            theta_spec=data.get("theta"),
            charpoly=data.get("charpoly"),
            family=FAMILIES[data["family"]],
        )
        return cls(
            grading=grading,
            invariant_factors=tuple(int(d) for d in data["I"]),
            orbit_count=int(data["orbits"]),
            group=data["group"],
            rows=tuple(ExpectedRow.from_dict(r) for r in data["rows"]),
            carter=data.get("carter"),
            rank_one_types=tuple(data.get("rank_one_types", ())),
            golden=data.get("golden"),
            prehom=data.get("prehom"),
            principal=bool(data.get("principal", False)),
            marks=tuple(int(a) for a in data["marks"]) if "marks" in data else None,
            center=data.get("center"),
            w_generator=data.get("w_generator"),
            s_fixed=bool(data.get("s_fixed", False)),
            errata=tuple(data.get("errata", ())),
        )

    def to_dict(self) -> Dict[str, Any]:
        g = self.grading
        family = next(name for name, value in FAMILIES.items() if value is g.family)
        data: Dict[str, Any] = {"label": g.label, "type": g.base_type, "twist": g.twist, "m": g.m,
                                "rank": g.rank, "family": family}
        if g.theta_spec is not None:
            data["theta"] = g.theta_spec
        if g.charpoly is not None:
            data["charpoly"] = g.charpoly
        if self.carter is not None:
            data["carter"] = self.carter
        if self.rank_one_types:
            data["rank_one_types"] = list(self.rank_one_types)
        if self.w_generator is not None:
            data["w_generator"] = self.w_generator
        data["I"] = list(self.invariant_factors)
        data["orbits"] = self.orbit_count
        data["group"] = self.group
        if self.principal:
            data["principal"] = True
        if self.marks is not None:
            data["marks"] = list(self.marks)
        if self.center is not None:
            data["center"] = self.center
        if self.s_fixed:
            data["s_fixed"] = True
        data["rows"] = [row.to_dict() for row in self.rows]
        if self.golden is not None:
            data["golden"] = self.golden
        if self.prehom is not None:
            data["prehom"] = self.prehom
        if self.errata:
            data["errata"] = list(self.errata)
        return data


# Validation

def _fail(position: int, label: str, message: str) -> None:
    raise CatalogError(f"catalog case #{position} ({label}): {message}")


def validate_case(data: Dict[str, Any], position: int = 0) -> None:
    """
    Check one case document before it is parsed

    Raises:
        CatalogError: Naming the case and the first violated rule
    """
    label = data.get("label", "?") if isinstance(data, dict) else "?"
    if not isinstance(data, dict):
        _fail(position, label, "not an object")
    missing = [key for key in REQUIRED_KEYS if key not in data]
    if missing:
        _fail(position, label, f"missing keys {', '.join(missing)}")
    if data["type"] not in CARTAN_DATA:
        _fail(position, label, f"unknown type {data['type']}")
    if data["family"] not in FAMILIES:
        _fail(position, label, f"unknown family {data['family']}")
    if int(data["m"]) < 2 or int(data["rank"]) < 1:
        _fail(position, label, "order and rank must be positive")
    theta = data.get("theta")
    if theta is not None and (not theta or set(theta) - THETA_KEYS):
        _fail(position, label, f"bad theta specification {theta}")
    if data["family"] != "rank_one" and theta is None:
        _fail(position, label, "rank >= 2 cases need a theta specification")
    w_gen = data.get("w_generator")
    if w_gen is not None and (len(w_gen) != 1 or set(w_gen) - W_GENERATOR_KEYS):
        _fail(position, label, f"bad W generator {w_gen}")
    try:
        if data.get("charpoly"):
            CycloFactorization.parse(data["charpoly"])
        for row in data["rows"]:
            parse_hecke_notation(row["hecke"])
            cell = row.get("endoscopic_hecke")
            if cell is not None:
                parse_hecke_notation(cell["notation"])
                if not ENDOSCOPIC_SOURCES.match(cell["source"]):
                    _fail(position, label, f"unknown endoscopic source {cell['source']}")
            for x in row.get("s", ()):
                parse_rational(x)
    except CatalogError:
        raise
    except (CuspidalTablesError, KeyError, ValueError, ZeroDivisionError) as e:
        _fail(position, label, f"unreadable row: {e}")
    counted = sum(int(row.get("count", 1)) for row in data["rows"])
    if counted != int(data["orbits"]):
        _fail(position, label, f"{counted} rows for {data['orbits']} orbits")
    if data["rows"][0].get("chi") != "chi0":
        _fail(position, label, "the first row must be the trivial character")
    if data["family"] == "rank_one":
        if not data.get("principal") and "prehom" not in data:
            _fail(position, label, "rank-one cases need prehomogeneous data or affine marks")
        if data.get("principal") and data["type"] not in ("G2", "F4", "E6", "E7", "E8") \
                and "marks" not in data:
            _fail(position, label, "twisted Coxeter-number cases need stored marks")


def _validate_document(document: Dict[str, Any]) -> None:
    if not isinstance(document, dict) or "cases" not in document:
        raise CatalogError("catalog document has no cases")
    version = document.get("version")
    if version != CATALOG_VERSION:
        raise CatalogError(f"catalog version {version} does not match {CATALOG_VERSION}")
    seen = set()
    for position, case in enumerate(document["cases"], start=1):
        validate_case(case, position)
        if case["label"] in seen:
            _fail(position, case["label"], "duplicate label")
        seen.add(case["label"])


# Loading

@lru_cache(maxsize=None)
def _read_document(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CatalogError(f"cannot read catalog {path}: {e}") from e
    _validate_document(document)
    return document


def parse_catalog(document: Dict[str, Any]) -> List[CaseRecord]:
    """Validate a catalog document and build its records"""
    _validate_document(document)
    return [CaseRecord.from_dict(case) for case in document["cases"]]


@lru_cache(maxsize=None)
def _records(path: str) -> Tuple[CaseRecord, ...]:
    records = tuple(CaseRecord.from_dict(case) for case in _read_document(path)["cases"])
    logger.debug(f"Loaded {len(records)} catalog cases from {path}")
    return records


def load_catalog(path: Optional[str] = None) -> List[CaseRecord]:
    """
    Load and validate the embedded catalog

    Args:
        path: Alternative catalog file

    Returns:
        list: Case records in catalog order

    Raises:
        CatalogError: Unreadable file or schema violation, naming the case
    """
    return list(_records(path or CATALOG_PATH))


def load_identities(path: Optional[str] = None) -> List[CompositeIdentity]:
    """Differential identities on small ambient spaces shipped with the catalog"""
    document = _read_document(path or CATALOG_PATH)
    return [CompositeIdentity.from_dict(item) for item in document.get("identities", [])]


def case_labels(path: Optional[str] = None) -> List[str]:
    return [record.label for record in load_catalog(path)]


def get_case(label: str, path: Optional[str] = None) -> CaseRecord:
    """
    Look up a case by label

    Raises:
        CatalogError: No case has this label
    """
    wanted = normalize_label(label)
    for record in load_catalog(path):
        if record.label == wanted:
            return record
    raise CatalogError(f"unknown case {label!r}")


def dump_catalog(records: List[CaseRecord], identities: Optional[List[Dict[str, Any]]] = None
                 ) -> Dict[str, Any]:
    """The catalog document for a list of records"""
    document: Dict[str, Any] = {"version": CATALOG_VERSION}
    if identities:
        document["identities"] = identities
    document["cases"] = [record.to_dict() for record in records]
    return document


def raw_identities(path: Optional[str] = None) -> List[Dict[str, Any]]:
    return list(_read_document(path or CATALOG_PATH).get("identities", []))
