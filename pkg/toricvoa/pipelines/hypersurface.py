"""Hypersurface and master family cohomology over dual reflexive Gorenstein cones."""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

from toricvoa.brst.ideal import IdealSolution, solve_ideal_membership
from toricvoa.brst.operator import CachedBrst, hypersurface_brst
from toricvoa.fock.enumerate import ConeRegion, dual_cone_block
from toricvoa.geometry.fan import Fan
from toricvoa.geometry.polytope import PolytopeData
from toricvoa.linalg.cohomology import charge_graded_cohomology
from toricvoa.linalg.stabilize import StabilizationReport, stabilize
from toricvoa.utils.errors import GenericityFailure, PipelineDisagreement

from .problem import WindowConfig
from .report import NOT_STABILIZED, STABILIZED, CohomologyReport, ReportEntry

logger = logging.getLogger(__name__)

GradedDims = Dict[Tuple[int, int, int], int]


def genericity_certificates(data: PolytopeData) -> List[IdealSolution]:
    """
    Ideal membership certificates for every vertex of Delta and of Delta*.

    Raises
    ------
    GenericityFailure
        If ``x^{k m0}`` is outside the ideal of the log derivatives for some vertex.
    """
    certificates = []
    for side, side_data in (("Delta", data), ("Delta*", data.mirror())):
        for vertex in side_data.cone_k().generators:
            try:
                certificates.append(solve_ideal_membership(side_data, vertex.coords))
            except GenericityFailure as err:
                raise GenericityFailure(f"Coefficients on {side} are not generic at vertex {vertex}: {err}") from err
    return certificates


def graded_dims(
    operator: CachedBrst, region: ConeRegion, lxa: int, j_value: int, degrees: Tuple[int, int], workers: int = 1
) -> Dict[int, int]:
    """
    Cohomology of the region at fixed ``(LXA0, J0)`` for cohomological degrees in ``degrees``.

    Blocks one degree below and above the window are built so the window
    values are true cohomology of the region. Degrees whose block is empty
    contribute nothing and their neighbours skip the matching differential.
    """
    low, high = degrees
    blocks = {c: dual_cone_block(region, lxa, j_value, degree=c) for c in range(low - 1, high + 2)}
    differentials = {
        c: operator.build(blocks[c], blocks[c + 1], workers).matrix
        for c in range(low - 1, high + 1)
        if len(blocks[c]) and len(blocks[c + 1])
    }
    dims = {c: len(block) for c, block in blocks.items()}
    cohomology = charge_graded_cohomology(dims, differentials)
    logger.debug("LXA0=%d J0=%d blocks %s cohomology %s", lxa, j_value, dims, cohomology)
    return {c: cohomology[c] for c in range(low, high + 1) if cohomology[c]}


def _region_dims(
    operator: CachedBrst, region: ConeRegion, window: WindowConfig, degrees: Tuple[int, int], workers: int
) -> GradedDims:
    grid = window.grid()

    def one(cell: Tuple[int, int]) -> Dict[int, int]:
        return graded_dims(operator, region, cell[0], cell[1], degrees)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(one, grid))
    else:
        results = [one(cell) for cell in grid]
    table: GradedDims = {}
    for (lxa, j_value), per_degree in zip(grid, results):
        for c, dim in per_degree.items():
            table[(lxa, j_value, c)] = dim
    return dict(sorted(table.items()))


def _report(
    pipeline: str, stabilization: StabilizationReport, parameters: Dict, notes: List[str]
) -> CohomologyReport:
    table: GradedDims = stabilization.sequence[-1][1]
    provenance = STABILIZED if stabilization.stabilized else NOT_STABILIZED
    report = CohomologyReport(pipeline, parameters=parameters, notes=list(notes))
    for (lxa, j_value, c), dim in table.items():
        report.add(ReportEntry(lxa, j_value, dim, provenance, degree=c))
    verdict = stabilization.verdict
    if stabilization.stabilized:
        verdict += f" at R={stabilization.stabilized_at}"
    report.notes.append(f"truncation R over {[r for r, _ in stabilization.sequence]}: {verdict}")
    if not stabilization.stabilized:
        logger.warning("%s: %d entries not stabilized", pipeline, len(report.entries))
    return report.finish()


def hypersurface_cohomology(
    data: PolytopeData,
    fan: Optional[Fan] = None,
    window: WindowConfig = WindowConfig(),
    workers: int = 1,
    check_genericity: bool = True,
    cocycle: bool = True,
) -> CohomologyReport:
    """
    BRST_{f,g} cohomology of ``Fock_{M + K*}`` per ``(LXA0, J0)``.

    The M side is truncated to ``K - R deg`` and the result is followed
    along ``window.schedule`` until ``window.stabilize_s`` consecutive
    truncations agree; the cohomological degree ``deg . n + deg_star . m``
    is summed over ``window.degree_range``.

    Parameters
    ----------
    data : PolytopeData
        Reflexive data with coefficients ``f`` and ``g``.
    fan : Optional[Fan]
        Subdivision of K* used for the degenerate vertex operators.
    window : WindowConfig
        Graded window, degree range and truncation schedule.
    workers : int
        Threads over ``(LXA0, J0)`` windows.
    check_genericity : bool
        Run the ideal membership certificates first.
    cocycle : bool
        Include the cocycle signs of the vertex operators.

    Raises
    ------
    GenericityFailure
        If ``f`` or ``g`` fails the genericity certificates.
    """
    if check_genericity:
        genericity_certificates(data)
    operator = CachedBrst(hypersurface_brst(data, fan, cocycle))
    degrees = window.degree_range(data.rank)
    k, k_star = data.cone_k(), data.cone_k_star()
    logger.info("hypersurface cohomology: rank %d, degrees %s, fan %s", data.rank, degrees, fan is not None)

    def compute(shift: int) -> GradedDims:
        return _region_dims(operator, ConeRegion(k, k_star, shift, 0), window, degrees, workers)

    stabilization = stabilize(compute, window.schedule, window.stabilize_s)
    parameters = {
        "f": sorted(data.f.items()),
        "g": sorted(data.g.items()),
        "degrees": list(degrees),
        "fan": fan is not None,
        "window": [window.l_max, window.j_min, window.j_max],
    }
    return _report("hypersurface", stabilization, parameters, [])


def master_family_cohomology(
    data: PolytopeData,
    fan: Optional[Fan] = None,
    window: WindowConfig = WindowConfig(),
    workers: int = 1,
    check_genericity: bool = True,
) -> CohomologyReport:
    """
    BRST_{f,g} cohomology over the full lattice ``M + N``, as a limit of truncations.

    Both sides are truncated, to ``K - R deg`` and ``K* - R deg_star``,
    and every entry carries the stabilization verdict over
    ``window.schedule``. When a fan is given the stabilized result is
    compared with :func:`hypersurface_cohomology`.

    Raises
    ------
    PipelineDisagreement
        If both computations stabilized and their tables differ.
    """
    if check_genericity:
        genericity_certificates(data)
    operator = CachedBrst(hypersurface_brst(data))
    degrees = window.degree_range(data.rank)
    k, k_star = data.cone_k(), data.cone_k_star()
    logger.info("master family cohomology: rank %d, degrees %s", data.rank, degrees)

    def compute(shift: int) -> GradedDims:
        return _region_dims(operator, ConeRegion(k, k_star, shift, shift), window, degrees, workers)

    stabilization = stabilize(compute, window.schedule, window.stabilize_s)
    parameters = {
        "f": sorted(data.f.items()),
        "g": sorted(data.g.items()),
        "degrees": list(degrees),
        "window": [window.l_max, window.j_min, window.j_max],
    }
    notes = []
    if fan is not None:
        exact = hypersurface_cohomology(data, fan, window, workers, check_genericity=False)
        if stabilization.stabilized and exact.stabilized:
            if stabilization.sequence[-1][1] != _table(exact):
                raise PipelineDisagreement(
                    f"Full-lattice dims {stabilization.sequence[-1][1]} differ from the K* dims {_table(exact)}."
                )
            notes.append("agrees with the fan-degenerate K* computation")
        else:
            notes.append("comparison with the fan-degenerate K* computation skipped: not stabilized")
    return _report("master", stabilization, parameters, notes)


def _table(report: CohomologyReport) -> GradedDims:
    return {(e.l, e.j, e.degree if e.degree is not None else 0): e.dim for e in report.entries}
