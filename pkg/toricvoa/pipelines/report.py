"""Cohomology reports, their text rendering and the two-variable character."""
import dataclasses
import logging
from typing import Any, Dict, List, Optional, Tuple

import dataclasses_json

from toricvoa.utils.canonical import CONVENTION_VERSION

logger = logging.getLogger(__name__)

EXACT = "exact"
STABILIZED = "stabilized"
NOT_STABILIZED = "not stabilized"


@dataclasses_json.dataclass_json
@dataclasses.dataclass
class ReportEntry:
    """
    One graded dimension.

    Attributes
    ----------
    l : int
        L0 (or LXA0) value.
    j : int
        J0 value.
    dim : int
        Cohomology dimension.
    provenance : str
        ``"exact"``, ``"stabilized"`` or ``"not stabilized"``.
    charge : Optional[List[int]]
        A[0] charge for chart-level pipelines.
    degree : Optional[int]
        Cohomological (or Cech total) degree when the pipeline resolves it.
    """

    l: int
    j: int
    dim: int
    provenance: str = EXACT
    charge: Optional[List[int]] = None
    degree: Optional[int] = None

    def key(self) -> Tuple[Any, ...]:
        return (self.l, self.j, tuple(self.charge or ()), -1 if self.degree is None else self.degree)


@dataclasses_json.dataclass_json
@dataclasses.dataclass
class CohomologyReport:
    """
    Dimensions computed by one pipeline on one problem.

    Attributes
    ----------
    pipeline : str
        Pipeline name.
    entries : List[ReportEntry]
        Non-zero dimensions, sorted.
    problem_hash : str
        Content hash of the problem instance.
    parameters : Dict[str, Any]
        Window, seed and resolved coefficients.
    notes : List[str]
        Cross-checks performed and their outcomes.
    convention_version : str
        Version of the mode and sign conventions.
    character : str
        ``sum dim q^L w^J``.
    """

    pipeline: str
    entries: List[ReportEntry] = dataclasses.field(default_factory=list)
    problem_hash: str = ""
    parameters: Dict[str, Any] = dataclasses.field(default_factory=dict)
    notes: List[str] = dataclasses.field(default_factory=list)
    convention_version: str = CONVENTION_VERSION
    character: str = "0"

    def add(self, entry: ReportEntry) -> None:
        if entry.dim:
            self.entries.append(entry)

    def finish(self) -> "CohomologyReport":
        """Sort the entries and fill in the character."""
        self.entries.sort(key=ReportEntry.key)
        self.character = character(self)
        return self

    def dims(self) -> Dict[Tuple[int, int], int]:
        """Total dimension per ``(L, J)``."""
        table: Dict[Tuple[int, int], int] = {}
        for entry in self.entries:
            table[(entry.l, entry.j)] = table.get((entry.l, entry.j), 0) + entry.dim
        return dict(sorted(table.items()))

    @property
    def stabilized(self) -> bool:
        return all(entry.provenance != NOT_STABILIZED for entry in self.entries)

    def unstabilized(self) -> List[ReportEntry]:
        return [entry for entry in self.entries if entry.provenance == NOT_STABILIZED]


def _monomial(variable: str, power: int) -> str:
    if power == 0:
        return ""
    if power == 1:
        return variable
    return f"{variable}^{power}"


def character(report: CohomologyReport) -> str:
    """
    ``sum dim q^L w^J`` with terms ordered by L, then J.

    Examples
    --------
    >>> character(CohomologyReport("demo", [ReportEntry(0, 0, 2)]))
    '2'
    >>> character(CohomologyReport("demo"))
    '0'
    """
    terms = []
    for (l_value, j_value), dim in report.dims().items():
        if not dim:
            continue
        variables = "*".join(v for v in (_monomial("q", l_value), _monomial("w", j_value)) if v)
        if not variables:
            terms.append(str(dim))
        elif dim == 1:
            terms.append(variables)
        else:
            terms.append(f"{dim}*{variables}")
    return " + ".join(terms) if terms else "0"


def format_entry(entry: ReportEntry) -> str:
    fields = []
    if entry.charge is not None:
        fields.append("m=(" + ",".join(str(c) for c in entry.charge) + ")")
    fields.append(f"L={entry.l}")
    fields.append(f"J={entry.j}")
    if entry.degree is not None:
        fields.append(f"t={entry.degree}")
    fields.append(f"dim={entry.dim}")
    if entry.provenance != EXACT:
        fields.append(f"[{entry.provenance}]")
    return " ".join(fields)


def format_report(report: CohomologyReport) -> str:
    """Plain text table of a report; identical reports render to identical bytes."""
    lines = [
        f"# pipeline {report.pipeline}",
        f"# problem {report.problem_hash}",
        f"# conventions {report.convention_version}",
    ]
    for key in sorted(report.parameters):
        lines.append(f"# {key} {report.parameters[key]}")
    lines += [format_entry(entry) for entry in report.entries]
    lines += [f"# note {note}" for note in report.notes]
    lines.append(f"character {report.character}")
    return "\n".join(lines) + "\n"


def mirror_report(report: CohomologyReport) -> CohomologyReport:
    """
    Re-grade a hypersurface report by the mirror gradings.

    Under the mirror swap ``LXB0`` becomes ``LXA0`` of the mirror and
    ``J0`` changes sign; with ``LXB0 = LXA0 + J0`` an entry at ``(L, J)``
    moves to ``(L + J, -J)``.
    """
    mirrored = CohomologyReport(
        report.pipeline,
        [dataclasses.replace(e, l=e.l + e.j, j=-e.j) for e in report.entries],
        report.problem_hash,
        dict(report.parameters),
        list(report.notes),
    )
    return mirrored.finish()
