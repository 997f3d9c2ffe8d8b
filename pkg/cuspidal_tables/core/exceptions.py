"""
Exceptions raised by the computational core
"""


class CuspidalTablesError(Exception):
    """Base class of all library errors"""


class UnknownTypeError(CuspidalTablesError):
    """Root system type or diagram automorphism not supported"""


class NotARootError(CuspidalTablesError):
    """A vector expected to be a root is not in R"""


class NotInGroupError(CuspidalTablesError):
    """Discrete log failed: the torus element is not in the finite group"""


class NonStableGradingError(CuspidalTablesError):
    """The lattice automorphism does not define a stable grading of the expected kind"""


class CatalogError(CuspidalTablesError):
    """The catalog is malformed or a case label is unknown"""


class GroupEnumerationError(CuspidalTablesError):
    """Group closure exceeded its order bound"""


class NotExpressibleError(CuspidalTablesError):
    """A cyclotomic product is not a polynomial in z^e"""


class IncompleteCyclotomicError(CuspidalTablesError):
    """Roots of unity do not assemble into full Galois packets"""


class BFunctionInconsistency(CuspidalTablesError):
    """Two independent evaluations of a b-function disagree"""


class NotNilpotentError(CuspidalTablesError):
    """Point is not in the nilpotent cone of the (G2, 3s) grading"""


class LatticeConditionError(CuspidalTablesError):
    """The exponents do not define a character of G_0"""


class NoLiftError(CuspidalTablesError):
    """No theta-fixed dual torus element lifts the character"""
