"""
Exception hierarchy. Negative verdicts are values; these signal bad input or broken invariants.
"""


class ColouringError(Exception):
    """Base class for all package errors."""
    exit_code = 2


class SpecParseError(ColouringError):
    """Malformed group spec string."""


class UnsupportedFamilyError(ColouringError):
    """Group family exists in the mini-language but not with these parameters."""


class GuardViolation(ColouringError):
    """Input exceeds a configured size or shape guard."""


class NotNormalError(ColouringError):
    """Subgroup is not normal where normality is required."""


class ConjugationError(ColouringError):
    """t b t^-1 is not of the form b^(1+3m) c^l."""


class InvalidPermutationError(ColouringError):
    """Image list is not a permutation of the group, or belongs to another group."""


class NotAutomorphismError(ColouringError):
    """Map offered as an automorphism is not one."""


class LiftPreconditionError(ColouringError):
    """Inputs of a lifting construction do not satisfy its hypotheses."""


class PermFileError(ColouringError):
    """Permutation file cannot be parsed against its group."""


class InvariantFailure(ColouringError):
    """An internal invariant failed; indicates a bug rather than bad input."""
    exit_code = 3


class TableMismatchError(InvariantFailure):
    """Embedded table disagrees with recomputation."""

    def __init__(self, table: str, row: str, expected: str, got: str):
        self.table = table
        self.row = row
        self.expected = expected
        self.got = got
        super().__init__(f"{table} row {row}: expected {expected}, got {got}")
