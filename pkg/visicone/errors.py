"""Exception hierarchy shared by the library and the command line front end.

The CLI maps the three families to its exit codes: InputError and
GeometryError exit 1, NumericalError exits 2, SuiteFailure exits 3.
"""


class VisiconeError(Exception):
    """Base class for every error raised by visicone"""


# Malformed input
class InputError(VisiconeError):
    """Input that cannot be turned into a well-formed query"""


class DimensionMismatch(InputError, ValueError):
    """Vectors or bodies of different ambient dimension were combined"""


class InvalidBody(InputError, ValueError):
    """A body violates its construction invariants"""


class ProblemFormatError(InputError):
    """A problem file is malformed; the message names the field"""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


# Geometric preconditions
class GeometryError(VisiconeError):
    """A query violates a geometric precondition"""


class NotInAffineHull(GeometryError):
    pass


class VNotInBody(GeometryError):
    """The candidate (or target) point does not belong to the body"""


class NotDisjoint(GeometryError):
    """The segment meets the polytope, so no strong separation exists"""


class Unsupported(GeometryError):
    pass


class UnsupportedBody(Unsupported):
    pass


# Numerical failures
class NumericalError(VisiconeError):
    pass


class NotPositiveDefinite(NumericalError):
    """A pivot fell below the singularity threshold"""

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class DegenerateFlat(NotPositiveDefinite):
    """Flat directions (or simplex edges) are linearly dependent"""


class MaxIterationsExceeded(NumericalError):
    pass


class SubsetBudgetExceeded(NumericalError):
    pass


class BudgetExceeded(NumericalError):
    pass


class CertificateInvalid(NumericalError):
    """A computed certificate failed its a posteriori check"""


# Property suites
class SuiteFailure(VisiconeError):
    """One or more property suites reported failures"""

    def __init__(self, failed_suites):
        names = ', '.join(failed_suites)
        super().__init__(f"property suites failed: {names}")
        self.failed_suites = list(failed_suites)
