"""
Enumerations for Cuspidal Tables
"""

from enum import Enum, IntEnum, auto


class MessageType(Enum):
    """Types of messages for terminal output"""
    INFO = auto()
    SUCCESS = auto()
    WARNING = auto()
    ERROR = auto()
    TITLE = auto()
    SYSTEM = auto()
    RESULT = auto()
    FINAL = auto()


class Verdict(Enum):
    """Outcome of comparing one computed field with the catalog"""
    MATCH = "MATCH"
    MISMATCH = "MISMATCH"
    SKIPPED = "SKIPPED"
    CITED = "CITED"

    @classmethod
    def of(cls, ok: bool) -> "Verdict":
        return cls.MATCH if ok else cls.MISMATCH


class ExitCode(IntEnum):
    """Process exit codes of the command line driver"""
    OK = 0
    MISMATCH = 1
    USAGE = 2
    INCONSISTENT = 3


class HeckeSource(Enum):
    """Where the roots behind a rank-one Hecke cell come from"""
    TABULATED_ROOTS = "tabulated roots"
    COMPUTED_B_FUNCTION = "computed b-function"


class CaseFamily(Enum):
    """Analysis route a catalog case is dispatched to"""
    REFLECTION = auto()
    INVOLUTION = auto()
    RANK_ONE = auto()


class OrbitLabel(Enum):
    """G_0-orbits in the nilpotent cone of the (G2, 3s) grading"""
    Z1 = "O_z1"
    Z2 = "O_z2"
    Z3 = "O_z3"
    Z4 = "O_z4"
    Z5 = "O_z5"
    Z6 = "O_z6"
    ZERO = "0"

    @property
    def dimension(self) -> int:
        return {"O_z1": 4, "O_z2": 4, "O_z3": 3, "O_z4": 3, "O_z5": 2, "O_z6": 1, "0": 0}[self.value]
