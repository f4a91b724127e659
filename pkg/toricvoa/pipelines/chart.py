"""BRST cohomology of single charts and of toric bundles."""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, TypeVar

from toricvoa.brst.operator import BrstSpec, apply_brst, build_brst, chart_brst
from toricvoa.fields.operator import vector_to_coordinates
from toricvoa.fock.enumerate import Block, chart_block, chart_box_block
from toricvoa.fock.state import StateVector
from toricvoa.geometry.cone import Cone, contains_coords, degree_vector
from toricvoa.geometry.fan import Fan
from toricvoa.geometry.lattice import M, N, Coords, LatticeVector, dot
from toricvoa.linalg.cohomology import charge_graded_cohomology
from toricvoa.linalg.double import DoubleComplex, cech_total_cohomology
from toricvoa.linalg.sparse import SparseMatrix, rank
from toricvoa.utils.errors import InputError, NotGorensteinError, PipelineDisagreement

from .problem import WindowConfig
from .report import CohomologyReport, ReportEntry

logger = logging.getLogger(__name__)

Window = Tuple[Coords, int, int]

T = TypeVar("T")


def _with_degree(cone: Cone) -> Cone:
    if cone.degree is not None:
        return cone
    return cone.with_degree(degree_vector(cone))


def ray_coefficients(
    rays: Sequence[LatticeVector], g: Optional[Mapping[Coords, Fraction]] = None
) -> Dict[Coords, Fraction]:
    """Coefficient of every ray, 1 when ``g`` is not given and 0 when ``g`` misses the ray."""
    if g is None:
        return {r.coords: Fraction(1) for r in rays}
    return {r.coords: Fraction(g.get(r.coords, 0)) for r in rays}


def _height_slices(block: Block, degree: Coords) -> Dict[int, List[int]]:
    slices: Dict[int, List[int]] = {}
    for i, state in enumerate(block.basis):
        slices.setdefault(dot(degree, state.n), []).append(i)
    return slices


def graded_block_cohomology(matrix: SparseMatrix, block: Block, degree: Coords) -> Dict[int, int]:
    """
    Cohomology of a BRST endomorphism of a block, split by ``u = degree . n``.

    The operator raises ``u`` by one, so the block is a cochain complex in ``u``.
    """
    slices = _height_slices(block, degree)
    dims = {u: len(indices) for u, indices in slices.items()}
    differentials = {}
    for u, indices in slices.items():
        if u + 1 in slices:
            differentials[u] = matrix.submatrix(slices[u + 1], indices)
    return {u: d for u, d in charge_graded_cohomology(dims, differentials).items() if d}


CHART_METHODS = ("auto", "box", "full")


def kernel_dim(spec: BrstSpec, block: Block) -> int:
    """Dimension of the kernel of a BRST operator on ``block``, with the target built from the images."""
    images = [apply_brst(spec, StateVector.basis(state)) for state in block.basis]
    target = Block({"image": block.label()}, [t for v in images for t in v.states()])
    columns = [vector_to_coordinates(v, target) for v in images]
    return len(block) - rank(SparseMatrix.from_columns(len(target), columns))


def chart_window_dim(
    cone: Cone, g: Mapping[Coords, Fraction], m: Coords, l_value: int, j_value: int, method: str = "auto"
) -> int:
    """
    BRST_g cohomology of ``Fock_{M + C*}`` at fixed ``(m, L, J)``.

    Parameters
    ----------
    method : str
        ``"full"`` ranks the BRST complex of the whole chart block, one
        height slice at a time. ``"box"`` takes the kernel on the Box
        sectors only, which is the whole cohomology of a full-dimensional
        simplicial chart. ``"auto"`` picks ``"box"`` whenever it applies.

    Raises
    ------
    ValueError
        If ``method`` is unknown.
    CapabilityError
        If ``"box"`` is requested for a non-simplicial cone.
    """
    if method not in CHART_METHODS:
        options = ", ".join(f'"{x}"' for x in CHART_METHODS)
        raise ValueError(f'Invalid method "{method}". Valid options are: {options}')
    if method == "auto":
        method = "box" if cone.is_simplicial() and cone.dim == cone.rank else "full"
    spec = chart_brst(g)
    if method == "box":
        return kernel_dim(spec, chart_box_block(cone, m, l_value, j_value))
    block = chart_block([cone], m, l_value, j_value)
    if not len(block):
        return 0
    assert cone.degree is not None
    matrix = build_brst(spec, block, block).matrix
    return sum(graded_block_cohomology(matrix, block, cone.degree.coords).values())


def _map_windows(compute: Callable[..., T], windows: List[Window], workers: int) -> List[T]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda w: compute(*w), windows))
    return [compute(*w) for w in windows]


def chart_cohomology(
    cone: Cone,
    g: Optional[Mapping[Coords, Fraction]] = None,
    window: WindowConfig = WindowConfig(),
    workers: int = 1,
    charges: Optional[Sequence[Coords]] = None,
) -> CohomologyReport:
    """
    Chart cohomology per ``(m, L, J)``, exact through the chart finiteness pattern.

    Parameters
    ----------
    cone : Cone
        Gorenstein cone in N.
    g : Optional[Mapping[Tuple[int, ...], Fraction]]
        Coefficients on the rays; 1 by default.
    window : WindowConfig
        ``L`` up to ``l_max``, ``J`` in ``[j_min, j_max]`` and charges with
        ``|m_i| <= charge_bound``.
    workers : int
        Threads over windows.
    charges : Optional[Sequence[Tuple[int, ...]]]
        Explicit charges replacing the window bound.

    Raises
    ------
    NotGorensteinError
        If the cone has no integral degree vector.
    """
    if cone.side != N:
        raise InputError(f"Chart cones live in N, got {cone}.")
    cone = _with_degree(cone)
    coefficients = ray_coefficients(cone.generators, g)
    chosen = list(charges) if charges is not None else window.charges(cone.rank)
    windows = [(m, l, j) for m in chosen for l, j in window.grid()]
    logger.info("chart cohomology of %s over %d windows", cone, len(windows))
    dims = _map_windows(lambda m, l, j: chart_window_dim(cone, coefficients, m, l, j), windows, workers)
    report = CohomologyReport("chart", parameters={"cone": str(cone), "g": sorted(coefficients.items())})
    for (m, l_value, j_value), dim in zip(windows, dims):
        report.add(ReportEntry(l_value, j_value, dim, charge=list(m)))
    return report.finish()


def _common_degree(cones: Sequence[Cone]) -> Coords:
    degrees = set()
    for cone in cones:
        try:
            degrees.add(degree_vector(cone).coords)
        except NotGorensteinError as err:
            raise InputError(f"Bundle chart {cone} is not Gorenstein.") from err
    if len(degrees) != 1:
        raise InputError(f"Bundle charts do not share a degree vector: {sorted(degrees)}.")
    return degrees.pop()


class CechGrid:
    """
    Cech double complex of chart Fock spaces at one ``(m, L, J)``.

    Columns are Cech levels over the maximal cones, rows are ``u = deg . n``;
    horizontal maps drop states whose ``n`` leaves the smaller face, vertical
    maps are the BRST operators of the faces.
    """

    def __init__(self, charts: Sequence[Cone], degree: Coords, g: Mapping[Coords, Fraction], window: Window):
        self.window = window
        m, l_value, j_value = window
        size = len(charts)
        self.faces = {p: list(itertools.combinations(range(size), p + 1)) for p in range(size)}
        self.blocks: Dict[Tuple[int, ...], Block] = {}
        self.brst: Dict[Tuple[int, ...], SparseMatrix] = {}
        self.rows: Dict[Tuple[int, ...], Dict[int, List[int]]] = {}
        for faces in self.faces.values():
            for face in faces:
                common = set(charts[face[0]].generators)
                for i in face[1:]:
                    common &= set(charts[i].generators)
                cone = Cone(tuple(sorted(common)), N, charts[0].rank, LatticeVector(degree, M))
                block = chart_block([cone], m, l_value, j_value)
                self.blocks[face] = block
                self.brst[face] = build_brst(chart_brst(ray_coefficients(cone.generators, g)), block, block).matrix
                self.rows[face] = _height_slices(block, degree)

    def _offsets(self, p: int, u: int) -> Tuple[Dict[Tuple[int, ...], int], int]:
        offsets, offset = {}, 0
        for face in self.faces.get(p, []):
            offsets[face] = offset
            offset += len(self.rows[face].get(u, []))
        return offsets, offset

    def double_complex(self) -> DoubleComplex:
        cells: Dict[Tuple[int, int], int] = {}
        for p, faces in self.faces.items():
            for face in faces:
                for u, indices in self.rows[face].items():
                    cells[(p, u)] = cells.get((p, u), 0) + len(indices)
        horizontal, vertical = {}, {}
        for p, u in cells:
            source, n_cols = self._offsets(p, u)
            if (p + 1, u) in cells:
                target, n_rows = self._offsets(p + 1, u)
                matrix = SparseMatrix(n_rows, n_cols)
                for big in self.faces[p + 1]:
                    target_index = {self.blocks[big].basis[i]: k for k, i in enumerate(self.rows[big].get(u, []))}
                    for position in range(len(big)):
                        small = big[:position] + big[position + 1 :]
                        sign = -1 if position % 2 else 1
                        for k, i in enumerate(self.rows[small].get(u, [])):
                            row = target_index.get(self.blocks[small].basis[i])
                            if row is not None:
                                matrix.add_entry(target[big] + row, source[small] + k, sign)
                horizontal[(p, u)] = matrix
            if (p, u + 1) in cells:
                target, n_rows = self._offsets(p, u + 1)
                matrix = SparseMatrix(n_rows, n_cols)
                for face in self.faces[p]:
                    lower, upper = self.rows[face].get(u, []), self.rows[face].get(u + 1, [])
                    if not lower or not upper:
                        continue
                    piece = self.brst[face].submatrix(upper, lower)
                    for (r, c), value in piece.entries():
                        matrix.add_entry(target[face] + r, source[face] + c, value)
                vertical[(p, u)] = matrix
        return DoubleComplex(cells, horizontal, vertical, sign_twist=True)


def bundle_cohomology(
    fan: Fan,
    deg_star: Coords,
    g: Optional[Mapping[Coords, Fraction]] = None,
    window: WindowConfig = WindowConfig(),
    workers: int = 1,
    charges: Optional[Sequence[Coords]] = None,
) -> CohomologyReport:
    """
    Bundle cohomology computed through the Cech double complex and through the fan-degenerate Fock space.

    Parameters
    ----------
    fan : Fan
        Lifted fan in N; every maximal cone must contain ``deg_star``.
    deg_star : Tuple[int, ...]
        The lifting direction.
    g : Optional[Mapping[Tuple[int, ...], Fraction]]
        Coefficients on the rays; 1 by default.
    window : WindowConfig
        Graded window and charge bound.
    workers : int
        Threads over windows.
    charges : Optional[Sequence[Tuple[int, ...]]]
        Explicit charges replacing the window bound.

    Returns
    -------
    CohomologyReport
        Entries per ``(m, L, J, t)`` from the direct computation; the Cech
        agreement is recorded in the notes.

    Raises
    ------
    InputError
        If a maximal cone misses ``deg_star`` or the charts have different degree vectors.
    PipelineDisagreement
        If the two computations disagree on some window.
    """
    charts = list(fan.maximal_cones)
    for cone in charts:
        if not contains_coords(cone, deg_star):
            raise InputError(f"Maximal cone {cone} does not contain the lifting direction {deg_star}.")
    degree = _common_degree(charts)
    charts = [c if c.degree is not None else c.with_degree(LatticeVector(degree, M)) for c in charts]
    coefficients = ray_coefficients(fan.rays, g)
    chosen = list(charges) if charges is not None else window.charges(fan.rank)
    windows = [(m, l, j) for m in chosen for l, j in window.grid()]
    direct_spec = chart_brst(coefficients, fan if len(charts) > 1 else None)

    def both(m: Coords, l_value: int, j_value: int) -> Tuple[Dict[int, int], Dict[int, int]]:
        block = chart_block(charts, m, l_value, j_value)
        if not len(block):
            return {}, {}
        direct = graded_block_cohomology(build_brst(direct_spec, block, block).matrix, block, degree)
        grid = CechGrid(charts, degree, coefficients, (m, l_value, j_value)).double_complex()
        cech = {t: d for t, d in cech_total_cohomology(grid).items() if d}
        return direct, cech

    logger.info("bundle cohomology over %d charts and %d windows", len(charts), len(windows))
    results = _map_windows(both, windows, workers)
    report = CohomologyReport(
        "bundle", parameters={"charts": len(charts), "lift": list(deg_star), "g": sorted(coefficients.items())}
    )
    for (m, l_value, j_value), (direct, cech) in zip(windows, results):
        if direct != cech:
            raise PipelineDisagreement(
                f"Cech and fan-degenerate computations disagree at m={m} L={l_value} J={j_value}: {cech} != {direct}."
            )
        for t, dim in sorted(direct.items()):
            report.add(ReportEntry(l_value, j_value, dim, charge=list(m), degree=t))
    report.notes.append(f"cech double complex agrees with the fan-degenerate computation on {len(windows)} windows")
    return report.finish()
