"""Exception hierarchy shared by the library and the command line."""


class RandSympError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ConvergenceError(RandSympError):
    """A dense factorization backend failed to converge."""

    exit_code = 7


class RankError(RandSympError):
    """The numerical rank of a matrix is too small for the requested basis size."""

    exit_code = 3


class GapError(RandSympError):
    """No usable singular value gap at the truncation index."""

    exit_code = 4


class AssumptionViolation(RandSympError):
    """A precondition of an error bound does not hold, so it cannot be evaluated."""

    exit_code = 5


class StructureError(RandSympError):
    """Input does not have the required orthonormal / symplectic structure."""

    exit_code = 8


class SnapshotFormatError(RandSympError):
    """Malformed snapshot or basis file."""

    exit_code = 6
