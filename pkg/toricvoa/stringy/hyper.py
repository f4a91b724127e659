"""Cech hypercohomology of string-differential forms over a complete fan."""
import dataclasses
import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import dataclasses_json

from toricvoa.geometry.cone import Cone
from toricvoa.geometry.fan import Fan
from toricvoa.geometry.lattice import N, Coords, dot
from toricvoa.linalg.cohomology import CohomologySpace, cohomology_of_sequence, induced_map
from toricvoa.linalg.double import DoubleComplex, cech_total_cohomology
from toricvoa.linalg.sparse import SparseMatrix
from toricvoa.linalg.stabilize import StabilizationReport, stabilize
from toricvoa.utils.errors import InputError, MathematicalFailure

from .forms import StringComplexSlice, StringForm, build_string_complex, chart_degree

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]

DEFAULT_SCHEDULE = (0, 1, 2, 3, 4)


@dataclasses_json.dataclass_json
@dataclasses.dataclass
class StringCohomology:
    """
    String cohomology of a fan, summed over charges ``|m|_1 <= truncation``.

    Attributes
    ----------
    hyper : Dict[int, int]
        Hypercohomology by total degree ``Cech level + J``.
    plain : List[Tuple[int, int, int]]
        ``(Cech level, J, dim)`` of the cohomology of the sheaf of BRST classes, without ``d``.
    stabilization : Optional[StabilizationReport]
        Protocol record over the truncation schedule.
    """

    hyper: Dict[int, int]
    plain: List[Tuple[int, int, int]]
    stabilization: Optional[StabilizationReport] = None


def _meet(charts: Sequence[Cone], face: Face) -> Cone:
    common = set(charts[face[0]].generators)
    for i in face[1:]:
        common &= set(charts[i].generators)
    return Cone(tuple(sorted(common)), N, charts[0].rank)


def restriction(source: Sequence[StringForm], target: Sequence[StringForm]) -> SparseMatrix:
    """Localization to a face: a form survives exactly when its ``n`` lies in the face."""
    index = {form: i for i, form in enumerate(target)}
    matrix = SparseMatrix(len(target), len(source))
    for col, form in enumerate(source):
        row = index.get(form)
        if row is not None:
            matrix.add_entry(row, col, 1)
    return matrix


class _ChargeComplex:
    """Cech double complex of BRST classes at one charge ``m``."""

    def __init__(self, charts: Sequence[Cone], g: Mapping[Coords, Fraction], m: Coords, j_max: int):
        self.m = m
        self.j_max = j_max
        size = len(charts)
        self.faces: Dict[int, List[Face]] = {
            p: list(itertools.combinations(range(size), p + 1)) for p in range(size)
        }
        self.slices: Dict[Face, StringComplexSlice] = {}
        self.spaces: Dict[Tuple[Face, int], CohomologySpace] = {}
        for faces in self.faces.values():
            for face in faces:
                cone = _meet(charts, face)
                degree = chart_degree(charts[face[0]])
                for i in face[1:]:
                    other = chart_degree(charts[i])
                    if any(dot(degree, r.coords) != dot(other, r.coords) for r in cone.generators):
                        raise MathematicalFailure(f"J gradings of the charts {face} disagree on {cone}.")
                local_g = {r.coords: g.get(r.coords, Fraction(0)) for r in cone.generators}
                built = build_string_complex(cone, local_g, j_max=j_max, charges=[m], degree=degree)
                self.slices[face] = built
                for j_value in range(0, j_max + 2):
                    forms = built.block(m, j_value)
                    brst = built.brst.get((m, j_value))
                    self.spaces[(face, j_value)] = CohomologySpace(len(forms), brst, brst)

    def dim(self, face: Face, j_value: int) -> int:
        return self.spaces[(face, j_value)].dimension

    def cells(self) -> Dict[Tuple[int, int], int]:
        cells = {}
        for p, faces in self.faces.items():
            for j_value in range(0, self.j_max + 2):
                total = sum(self.dim(face, j_value) for face in faces)
                if total:
                    cells[(p, j_value)] = total
        return cells

    def _offsets(self, p: int, j_value: int) -> Dict[Face, int]:
        offsets, offset = {}, 0
        for face in self.faces[p]:
            offsets[face] = offset
            offset += self.dim(face, j_value)
        return offsets

    def cech(self, p: int, j_value: int) -> SparseMatrix:
        """``delta`` from level ``p`` to ``p + 1`` on the classes of weight J."""
        source, target = self._offsets(p, j_value), self._offsets(p + 1, j_value)
        n_rows = sum(self.dim(f, j_value) for f in self.faces.get(p + 1, []))
        n_cols = sum(self.dim(f, j_value) for f in self.faces[p])
        matrix = SparseMatrix(n_rows, n_cols)
        for big in self.faces.get(p + 1, []):
            target_space = self.spaces[(big, j_value)]
            if not target_space.dimension:
                continue
            for position in range(len(big)):
                small = big[:position] + big[position + 1 :]
                source_space = self.spaces[(small, j_value)]
                if not source_space.dimension:
                    continue
                res = restriction(self.slices[small].block(self.m, j_value), self.slices[big].block(self.m, j_value))
                induced = induced_map(res, source_space, target_space)
                sign = -1 if position % 2 else 1
                for (r, c), value in induced.entries():
                    matrix.add_entry(target[big] + r, source[small] + c, sign * value)
        return matrix

    def de_rham(self, p: int, j_value: int) -> SparseMatrix:
        """``d`` from weight J to ``J + 1`` at Cech level ``p``."""
        source, target = self._offsets(p, j_value), self._offsets(p, j_value + 1)
        n_rows = sum(self.dim(f, j_value + 1) for f in self.faces[p])
        n_cols = sum(self.dim(f, j_value) for f in self.faces[p])
        matrix = SparseMatrix(n_rows, n_cols)
        for face in self.faces[p]:
            source_space, target_space = self.spaces[(face, j_value)], self.spaces[(face, j_value + 1)]
            if not source_space.dimension or not target_space.dimension:
                continue
            induced = induced_map(self.slices[face].de_rham[(self.m, j_value)], source_space, target_space)
            for (r, c), value in induced.entries():
                matrix.add_entry(target[face] + r, source[face] + c, value)
        return matrix

    def double_complex(self) -> DoubleComplex:
        cells = self.cells()
        horizontal = {(p, j): self.cech(p, j) for p, j in cells if (p + 1, j) in cells}
        vertical = {(p, j): self.de_rham(p, j) for p, j in cells if (p, j + 1) in cells and j <= self.j_max}
        return DoubleComplex(cells, horizontal, vertical, sign_twist=True)

    def plain(self) -> Dict[Tuple[int, int], int]:
        table = {}
        levels = sorted(self.faces)
        for j_value in range(0, self.j_max + 1):
            dims = [sum(self.dim(f, j_value) for f in self.faces[p]) for p in levels]
            maps = [self.cech(p, j_value) for p in levels[:-1]]
            for p, dim in zip(levels, cohomology_of_sequence(dims, maps)):
                if dim:
                    table[(p, j_value)] = dim
        return table


def _charges(rank: int, truncation: int) -> List[Coords]:
    span = range(-truncation, truncation + 1)
    return sorted(m for m in itertools.product(span, repeat=rank) if sum(abs(c) for c in m) <= truncation)


def _merge(total: Dict, part: Mapping) -> None:
    for key, value in part.items():
        total[key] = total.get(key, 0) + value


def string_hypercohomology(
    fan: Fan,
    g: Optional[Mapping[Coords, Fraction]] = None,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
    s: int = 3,
    j_max: Optional[int] = None,
) -> StringCohomology:
    """
    Hypercohomology of the complex of string-differential forms over ``fan``.

    The Cech complex of the cover by maximal cones is taken on the BRST
    classes of every chart and their intersections, with the de Rham map
    ``w -> w ^ m`` as second differential. Both differentials preserve ``m``,
    so the computation splits by charge and is summed over ``|m|_1`` up to
    each cutoff of ``schedule``.

    Parameters
    ----------
    fan : Fan
        Complete fan in N whose maximal cones are Gorenstein.
    g : Optional[Mapping[Tuple[int, ...], Fraction]]
        BRST coefficients on the rays; 1 by default.
    schedule : Sequence[int]
        Increasing charge cutoffs.
    s : int
        Stabilization run length.
    j_max : Optional[int]
        Largest J and total degree reported; ``2 * rank`` by default.

    Returns
    -------
    StringCohomology
        Values at the stabilized cutoff, or at the last cutoff with a
        not-stabilized verdict.
    """
    if fan.side != N:
        raise InputError(f"String cohomology needs a fan in N, got side {fan.side}.")
    charts = list(fan.maximal_cones)
    coefficients = {r.coords: Fraction(1) for r in fan.rays} if g is None else {k: Fraction(v) for k, v in g.items()}
    top = 2 * fan.rank if j_max is None else j_max
    per_charge: Dict[Coords, Tuple[Dict[int, int], Dict[Tuple[int, int], int]]] = {}

    def at_charge(m: Coords) -> Tuple[Dict[int, int], Dict[Tuple[int, int], int]]:
        if m not in per_charge:
            complex_ = _ChargeComplex(charts, coefficients, m, top)
            grid = complex_.double_complex()
            hyper = {t: d for t, d in cech_total_cohomology(grid).items() if t <= top and d}
            per_charge[m] = (hyper, complex_.plain())
            if hyper:
                logger.debug("string hypercohomology at m=%s: %s", m, hyper)
        return per_charge[m]

    def compute(cutoff: int) -> Tuple[Dict[int, int], Dict[Tuple[int, int], int]]:
        hyper: Dict[int, int] = {}
        plain: Dict[Tuple[int, int], int] = {}
        for m in _charges(fan.rank, cutoff):
            part_hyper, part_plain = at_charge(m)
            _merge(hyper, part_hyper)
            _merge(plain, part_plain)
        return dict(sorted(hyper.items())), dict(sorted(plain.items()))

    report = stabilize(compute, schedule, s)
    hyper, plain = report.sequence[-1][1]
    rows = [(p, j, dim) for (p, j), dim in sorted(plain.items())]
    summary = StabilizationReport(
        [(cutoff, sorted(value[0].items())) for cutoff, value in report.sequence],
        report.s,
        report.verdict,
        report.stabilized_at,
    )
    logger.info("string hypercohomology %s (%s)", hyper, report.verdict)
    return StringCohomology(hyper, rows, summary)
