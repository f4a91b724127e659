import dataclasses
import logging
from typing import Any, Callable, List, Optional, Sequence, Tuple

import dataclasses_json

from toricvoa.utils.errors import NotStabilizedError

logger = logging.getLogger(__name__)

STABILIZED = "stabilized"
NOT_STABILIZED = "not stabilized"


def _verdict(values: Sequence[Any], s: int) -> Tuple[str, Optional[int]]:
    """Verdict and index where the final run of ``s`` equal values starts."""
    if s < 1:
        raise ValueError(f"Invalid run length {s}. Valid run lengths are positive integers.")
    for end in range(s, len(values) + 1):
        window = values[end - s : end]
        if all(v == window[0] for v in window):
            start = end - s
            while start > 0 and values[start - 1] == window[0]:
                start -= 1
            return STABILIZED, start
    return NOT_STABILIZED, None


@dataclasses_json.dataclass_json
@dataclasses.dataclass
class StabilizationReport:
    """
    Values of a truncated computation at increasing cutoffs.

    Attributes
    ----------
    sequence : List[Tuple[int, Any]]
        ``(cutoff, value)`` pairs in the order computed.
    s : int
        Number of consecutive equal values required.
    verdict : str
        ``"stabilized"`` or ``"not stabilized"``.
    stabilized_at : Optional[int]
        First cutoff of the run of equal values.
    """

    sequence: List[Tuple[int, Any]]
    s: int
    verdict: str
    stabilized_at: Optional[int] = None

    @property
    def stabilized(self) -> bool:
        return self.verdict == STABILIZED

    @property
    def value(self) -> Any:
        """The stabilized value; None when not stabilized."""
        if not self.stabilized:
            return None
        return self.sequence[-1][1]

    def recompute_verdict(self) -> str:
        return _verdict([value for _, value in self.sequence], self.s)[0]

    def require(self) -> Any:
        """
        Return the stabilized value.

        Raises
        ------
        NotStabilizedError
            If the sequence never stabilized.
        """
        if not self.stabilized:
            raise NotStabilizedError(f"Values did not stabilize over cutoffs {[c for c, _ in self.sequence]}.")
        return self.value


def stabilize(compute: Callable[[int], Any], schedule: Sequence[int], s: int = 3) -> StabilizationReport:
    """
    Evaluate ``compute`` at increasing cutoffs until ``s`` consecutive results agree.

    Parameters
    ----------
    compute : Callable[[int], Any]
        Deterministic function of the cutoff.
    schedule : Sequence[int]
        Increasing cutoffs; the budget.
    s : int
        Length of the run of equal values that counts as stable.

    Returns
    -------
    StabilizationReport
        Verdict ``"not stabilized"`` when the schedule is exhausted first.

    Examples
    --------
    >>> stabilize(lambda cutoff: 2, [1, 2, 3, 4]).stabilized_at
    1
    """
    if list(schedule) != sorted(set(schedule)):
        raise ValueError(f"Invalid schedule {list(schedule)}. Valid schedules are strictly increasing.")
    sequence: List[Tuple[int, Any]] = []
    for cutoff in schedule:
        sequence.append((cutoff, compute(cutoff)))
        verdict, start = _verdict([value for _, value in sequence], s)
        if verdict == STABILIZED:
            assert start is not None
            logger.info("stabilized at cutoff %s after %d windows", sequence[start][0], len(sequence))
            return StabilizationReport(sequence, s, verdict, sequence[start][0])
    logger.warning("not stabilized over cutoffs %s", list(schedule))
    return StabilizationReport(sequence, s, NOT_STABILIZED)
