import dataclasses
from typing import Any, List, Optional, Sequence


class ToricVOAError(Exception):
    """
    Base class of every error raised by toricvoa.
    """


class InputError(ToricVOAError, ValueError):
    """
    The input data is malformed or violates a precondition.
    """


class SideMismatchError(InputError):
    pass


class NotGorensteinError(InputError):
    pass


class NotReflexiveError(InputError):
    pass


class FanValidationError(InputError):
    pass


class HeightCertificateError(InputError):
    """
    A height function failed the strict convexity check.

    Parameters
    ----------
    message : str
        Description of the failure.
    pair : Optional[Sequence[Any]]
        The generator pair (or single generator) violating the check.
    """

    def __init__(self, message: str, pair: Optional[Sequence[Any]] = None):
        super().__init__(message)
        self.pair = pair


class ConfigurationError(InputError):
    pass


@dataclasses.dataclass(frozen=True)
class ValidationIssue:
    path: str
    line: Optional[int]
    message: str

    def __str__(self) -> str:
        where = self.path if self.line is None else f"{self.path} (line {self.line})"
        return f"{where}: {self.message}"


class ProblemFileError(InputError):
    """
    A problem file could not be parsed. Carries every issue found.

    Parameters
    ----------
    issues : List[ValidationIssue]
        All validation issues, in document order.
    """

    def __init__(self, issues: List[ValidationIssue]):
        super().__init__("; ".join(str(issue) for issue in issues))
        self.issues = issues


class CapabilityError(ToricVOAError):
    """
    The request is outside the supported range (rank, simpliciality).
    """


class FinitenessError(ToricVOAError):
    """
    A block request does not match any certified finite pattern.
    """


class MathematicalFailure(ToricVOAError):
    """
    A computed identity or comparison did not hold.
    """


class NilpotencyError(MathematicalFailure):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class BlockClosureError(MathematicalFailure):
    pass


class GenericityFailure(MathematicalFailure):
    pass


class PipelineDisagreement(MathematicalFailure):
    pass


class NotStabilizedError(MathematicalFailure):
    pass
