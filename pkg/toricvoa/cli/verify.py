"""Verification suites run by ``toricvoa verify``."""
import dataclasses
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from toricvoa.brst.homotopy import anticommutator, m0_homotopy_terms, simple_homotopy_terms
from toricvoa.brst.ideal import solve_ideal_membership
from toricvoa.brst.operator import (
    BrstSpec,
    apply_brst,
    apply_terms,
    brst_f_terms,
    brst_g_terms,
    chart_brst,
    check_nilpotent,
    conservation_violations,
    hypersurface_brst,
    m_height,
    n_height,
    support_shift_violations,
)
from toricvoa.fields.composite import CompositeFieldTerm
from toricvoa.fields.mirror import mirror_term, mirror_vector
from toricvoa.fields.operator import vector_to_coordinates
from toricvoa.fields.quadratic import apply_field_mode
from toricvoa.fields.vertex import VertexOpSpec
from toricvoa.fock.enumerate import Block, ConeRegion, chart_block, dual_cone_block, fixed_charge_block
from toricvoa.fock.grading import GradingConfig
from toricvoa.fock.orbifold import flat_count, orbifold_mode_table, orbifold_prediction
from toricvoa.fock.state import PHI, PSI, FockState, ModeKey, StateVector, vacuum
from toricvoa.geometry.cone import Cone, box_elements
from toricvoa.geometry.lattice import N, Coords, dot
from toricvoa.linalg.sparse import SparseMatrix, rank
from toricvoa.pipelines.chart import bundle_cohomology, chart_window_dim
from toricvoa.pipelines.hypersurface import hypersurface_cohomology, master_family_cohomology
from toricvoa.pipelines.problem import ProblemInstance, WindowConfig
from toricvoa.pipelines.runner import mirror_check
from toricvoa.stringy.forms import build_string_complex
from toricvoa.utils.errors import MathematicalFailure

from .problem import parse

logger = logging.getLogger(__name__)

SLOW_SUITES = ("elliptic",)


@dataclasses.dataclass
class SuiteResult:
    """
    Outcome of one verification suite.

    Attributes
    ----------
    name : str
        Suite name.
    passed : bool
        Whether every check held.
    lines : List[str]
        Table of the individual checks.
    """

    name: str
    passed: bool = True
    lines: List[str] = dataclasses.field(default_factory=list)

    def check(self, ok: bool, line: str) -> None:
        self.lines.append(("ok   " if ok else "FAIL ") + line)
        self.passed = self.passed and ok

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return "\n".join([f"# suite {self.name}"] + self.lines + [f"{status} {self.name}"]) + "\n"


@dataclasses.dataclass(frozen=True)
class SuiteOptions:
    """
    Size parameters of the suites.

    Parameters
    ----------
    rank : int
        Rank of the smooth chart in ``dimone``.
    l_max : Optional[int]
        Largest L; each suite has its own default.
    charge_bound : Optional[int]
        Largest ``|m_i|`` of chart charges; each suite has its own default.
    """

    rank: int = 1
    l_max: Optional[int] = None
    charge_bound: Optional[int] = None

    def levels(self, default: int) -> range:
        return range(0, (default if self.l_max is None else self.l_max) + 1)

    def bound(self, default: int) -> int:
        return default if self.charge_bound is None else self.charge_bound

    def describe(self, levels: range, bound: int) -> str:
        return f"window L <= {max(levels)}, |m_i| <= {bound}"


def orthant(rank: int) -> Cone:
    """The smooth cone spanned by the standard basis of N, with its degree vector."""
    basis = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
    return Cone.from_coords(basis, N, (1,) * rank)


def a1_cone() -> Cone:
    return Cone.from_coords([(1, 0), (1, 2)], N, (1, 0))


def _charges(rank: int, bound: int) -> List[Coords]:
    return WindowConfig(charge_bound=bound).charges(rank)


def tame_charges(rank: int, bound: int, generators: Sequence[Coords], reach: int = 1) -> List[Coords]:
    """
    Charges with ``m . g >= -reach`` on every generator.

    The weight of the chart states grows by ``-m . g`` per unit of height,
    so these are the charges whose full blocks stay small.

    Examples
    --------
    >>> tame_charges(2, 1, [(-1, 1), (0, 1), (1, 1)])
    [(-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1), (1, 0), (1, 1)]
    """
    return [m for m in _charges(rank, bound) if all(dot(m, g) >= -reach for g in generators)]


def _unit_coefficients(cone: Cone) -> Dict[Coords, Fraction]:
    return {g.coords: Fraction(1) for g in cone.generators}


def _j_range(rank: int, l_value: int) -> range:
    return range(-rank * (l_value + 1), rank * (l_value + 1) + 1)


def suite_dimone(options: SuiteOptions) -> SuiteResult:
    """Smooth chart cohomology against the flat a, b, phi, psi count."""
    result = SuiteResult("dimone")
    cone = orthant(options.rank)
    g = _unit_coefficients(cone)
    levels, bound = options.levels(4), options.bound(4)
    result.lines.append(f"     {options.describe(levels, bound)}")
    for m in _charges(options.rank, bound):
        for l_value in levels:
            for j_value in _j_range(options.rank, l_value):
                dim = chart_window_dim(cone, g, m, l_value, j_value)
                expected = flat_count(m, l_value, j_value)
                if dim or expected:
                    result.check(dim == expected, f"m={m} L={l_value} J={j_value} dim={dim} flat={expected}")
    if options.rank == 1:
        spec = chart_brst(g)
        phi0 = ModeKey(PHI, 0, 0)
        image = apply_brst(spec, StateVector.basis(FockState((0,), (0,), (), (phi0,))))
        target = vacuum((0,), (1,))
        ok = list(image.states()) == [target] and image.coefficient(target) != 0
        result.check(ok, f"BRST Phi1[0]|0;0> = {image}")
        for k in range(-1, -bound - 1, -1):
            images = [
                apply_brst(spec, StateVector.basis(vacuum((k,), (0,)))),
                apply_brst(spec, StateVector.basis(FockState((k,), (0,), (), (phi0,)))),
            ]
            states = sorted({s for v in images for s in v.states()}, key=FockState.sort_key)
            block = Block({"k": k}, states)
            columns = [vector_to_coordinates(v, block) for v in images]
            independent = rank(SparseMatrix.from_columns(len(block), columns)) == 2
            result.check(independent, f"images of |{k};0> and Phi1[0]|{k};0> independent")
    return result


def suite_dimany(options: SuiteOptions) -> SuiteResult:
    """Rank-two smooth chart cohomology as a product of rank-one answers."""
    result = SuiteResult("dimany")
    line, plane = orthant(1), orthant(2)
    g1, g2 = _unit_coefficients(line), _unit_coefficients(plane)
    levels, bound = options.levels(3), options.bound(1)
    result.lines.append(f"     {options.describe(levels, bound)}")
    one: Dict[tuple, int] = {}
    for c in range(-bound, bound + 1):
        for l_value in levels:
            for j_value in _j_range(1, l_value):
                one[(c, l_value, j_value)] = chart_window_dim(line, g1, (c,), l_value, j_value)
    for m in _charges(2, bound):
        for l_value in levels:
            for j_value in _j_range(2, l_value):
                product = sum(
                    one.get((m[0], l1, j1), 0) * one.get((m[1], l_value - l1, j_value - j1), 0)
                    for l1 in range(0, l_value + 1)
                    for j1 in _j_range(1, l1)
                )
                dim = chart_window_dim(plane, g2, m, l_value, j_value)
                if dim or product:
                    result.check(dim == product, f"m={m} L={l_value} J={j_value} dim={dim} product={product}")
    return result


def suite_orbiloc(options: SuiteOptions) -> SuiteResult:
    """A_1 chart cohomology as untwisted plus twisted-sector counts."""
    result = SuiteResult("orbiloc")
    cone = a1_cone()
    g = _unit_coefficients(cone)
    levels, bound = options.levels(3), options.bound(1)
    result.lines.append(f"     {options.describe(levels, bound)}")
    for element in box_elements(cone):
        try:
            orbifold_mode_table(cone, element, 3)
            result.check(True, f"mode table of sector {element.coords} is non-negative")
        except MathematicalFailure as err:
            result.check(False, f"mode table of sector {element.coords}: {err}")
    lowest = None
    for m in _charges(2, bound):
        for l_value in levels:
            for j_value in _j_range(2, l_value):
                dim = chart_window_dim(cone, g, m, l_value, j_value)
                sectors = orbifold_prediction(cone, m, l_value, j_value)
                expected = sum(sectors.values())
                if dim and (lowest is None or l_value < lowest):
                    lowest = l_value
                if dim or expected:
                    split = " ".join(f"{b}:{d}" for b, d in sorted(sectors.items()) if d)
                    result.check(dim == expected, f"m={m} L={l_value} J={j_value} dim={dim} sectors {split}")
    result.check(lowest == 0, f"lowest L with cohomology is {lowest}")
    return result


def suite_easyderham(options: SuiteOptions) -> SuiteResult:
    """String-form BRST cohomology against the L=0 Fock chart computation."""
    result = SuiteResult("easyderham")
    truncation = options.bound(2)
    result.lines.append(f"     {options.describe(range(1), truncation)}")
    for name, cone in (("line", orthant(1)), ("plane", orthant(2)), ("A1", a1_cone())):
        g = _unit_coefficients(cone)
        forms = build_string_complex(cone, g, truncation=truncation).brst_cohomology()
        j_top = 2 * cone.rank
        for m in _charges(cone.rank, truncation):
            if sum(abs(c) for c in m) > truncation:
                continue
            for j_value in range(-1, j_top + 1):
                expected = forms.get((m, j_value), 0)
                dim = chart_window_dim(cone, g, m, 0, j_value)
                if dim or expected:
                    result.check(dim == expected, f"{name} m={m} J={j_value} fock={dim} forms={expected}")
    return result


def suite_toricbundle(options: SuiteOptions) -> SuiteResult:
    """Cech and fan-degenerate computations on the canonical bundle of P^1."""
    result = SuiteResult("toricbundle")
    problem = parse("p1_canonical_bundle")
    assert problem.fan is not None and problem.deg_star is not None
    levels, bound = options.levels(1), options.bound(1)
    window = dataclasses.replace(problem.window, l_max=max(levels), charge_bound=bound)
    rays = [ray.coords for ray in problem.fan.rays]
    charges = tame_charges(problem.fan.rank, bound, rays)
    result.lines.append(f"     {options.describe(levels, bound)}, m . ray >= -1 ({len(charges)} charges)")
    try:
        report = bundle_cohomology(problem.fan, problem.deg_star, window=window, charges=charges)
        result.check(True, f"{len(report.entries)} non-zero entries agree")
        for note in report.notes:
            result.lines.append(f"     {note}")
    except MathematicalFailure as err:
        result.check(False, str(err))
    return result


def _two_points(options: SuiteOptions) -> ProblemInstance:
    problem = parse("p1_two_points")
    return problem.with_window(dataclasses.replace(problem.window, l_max=max(options.levels(problem.window.l_max))))


def suite_conebig(options: SuiteOptions) -> SuiteResult:
    """The two points of P^1: dimension 2 at (0, 0) and nothing else."""
    result = SuiteResult("conebig")
    problem = _two_points(options)
    assert problem.data is not None
    report = hypersurface_cohomology(problem.data, problem.fan, problem.window)
    dims = report.dims()
    result.check(dims == {(0, 0): 2}, f"dims {dims}")
    result.check(report.stabilized, f"provenance {sorted({e.provenance for e in report.entries})}")
    return result


def suite_wholen(options: SuiteOptions) -> SuiteResult:
    """Full-lattice stabilized dims against the K* computation."""
    result = SuiteResult("wholeN")
    problem = _two_points(options)
    assert problem.data is not None
    try:
        report = master_family_cohomology(problem.data, problem.fan, problem.window)
    except MathematicalFailure as err:
        result.check(False, str(err))
        return result
    result.check(report.stabilized, f"dims {report.dims()} ({'; '.join(report.notes)})")
    result.check(report.dims() == {(0, 0): 2}, "agrees with the K* dims")
    return result


def suite_elliptic(options: SuiteOptions) -> SuiteResult:
    """Elliptic curve in P^2: total dimension 4 at LXA0 = 0."""
    result = SuiteResult("elliptic")
    problem = parse("elliptic_curve")
    assert problem.data is not None
    report = hypersurface_cohomology(problem.data, problem.fan, problem.window)
    total = sum(dim for (l_value, _), dim in report.dims().items() if l_value == 0)
    result.check(total == 4, f"total at LXA0=0 is {total}: {report.character}")
    return result


def _two_points_family(options: SuiteOptions) -> List[FockState]:
    problem = _two_points(options)
    assert problem.data is not None
    data = problem.data
    region = ConeRegion(data.cone_k(), data.cone_k_star(), 1, 0)
    states: List[FockState] = []
    for lxa in range(0, problem.window.l_max + 1):
        for j_value in range(-2, 3):
            for c in range(-1, 2):
                states.extend(dual_cone_block(region, lxa, j_value, degree=c).basis)
    return states


def suite_mirror(options: SuiteOptions) -> SuiteResult:
    """Mirror involution on terms, on the L_X fields and on whole reports."""
    result = SuiteResult("mirror")
    problem = _two_points(options)
    assert problem.data is not None
    data = problem.data
    family = _two_points_family(options)
    for term in hypersurface_brst(data).terms:
        bad = 0
        for state in family:
            v = StateVector.basis(state)
            if mirror_vector(apply_terms([term], v)) != apply_terms([mirror_term(term)], mirror_vector(v)):
                bad += 1
        result.check(not bad, f"term {term.vop.m_shift}/{term.vop.n_shift} conjugates on {len(family)} states")
    config = GradingConfig(data.deg.coords, data.deg_star.coords)
    for k in range(-2, 3):
        bad = 0
        count = 0
        for m, n in (((0, 0), (0, 0)), ((1, 0), (0, 1)), ((-1, 1), (0, 1))):
            for state in fixed_charge_block(m, n, dot(m, n) + 2).basis:
                count += 1
                v = StateVector.basis(state)
                lhs = apply_field_mode("LXB", k, v, config)
                rhs = apply_field_mode("LXA", k, v, config) + apply_field_mode("J", k, v, config).scaled(k + 1)
                if lhs != rhs:
                    bad += 1
        result.check(not bad, f"LXB[{k}] = LXA[{k}] + ({k + 1}) J[{k}] on {count} states")
    try:
        report = mirror_check(problem)
        result.check(True, f"mirror instance re-graded: {report.character}")
    except MathematicalFailure as err:
        result.check(False, str(err))
    return result


def suite_grading(options: SuiteOptions) -> SuiteResult:
    """Conserved gradings and the degree shifts of BRST_f and BRST_g."""
    result = SuiteResult("grading")
    problem = _two_points(options)
    assert problem.data is not None
    data = problem.data
    family = _two_points_family(options)
    spec = hypersurface_brst(data, problem.fan)
    violations = conservation_violations(spec, family)
    result.check(not violations, f"LXA0 and J0 conserved on {len(family)} states ({len(violations)} violations)")
    f_shift = support_shift_violations(brst_f_terms(data), family, m_height(data.deg_star.coords))
    result.check(not f_shift, f"BRST_f raises deg_star . m by one ({len(f_shift)} violations)")
    g_shift = support_shift_violations(brst_g_terms(data.g, problem.fan), family, n_height(data.deg.coords))
    result.check(not g_shift, f"BRST_g raises deg . n by one ({len(g_shift)} violations)")
    return result


def cocycle_control(cocycle: bool) -> BrstSpec:
    """Rank-one operator ``Phi e^{int B} + Psi e^{int A}`` with or without cocycle signs."""
    terms = (
        CompositeFieldTerm(VertexOpSpec((1,), (0,), None, cocycle), (PHI, (1,))),
        CompositeFieldTerm(VertexOpSpec((0,), (1,), None, cocycle), (PSI, (1,))),
    )
    return BrstSpec(terms)


def suite_nilpotency(options: SuiteOptions, include_slow: bool = False) -> SuiteResult:
    """BRST squares to zero on the blocks of the bundled examples."""
    result = SuiteResult("nilpotency")
    family = _two_points_family(options)
    problem = _two_points(options)
    assert problem.data is not None
    for label, fan in (("plain", None), ("fan", problem.fan)):
        check = check_nilpotent(hypersurface_brst(problem.data, fan), family)
        result.check(bool(check), f"P1 two points ({label}) on {len(family)} states, witness {check.witness}")
    cone = a1_cone()
    spec = chart_brst(_unit_coefficients(cone))
    states = [
        s
        for m in tame_charges(2, options.bound(1), [g.coords for g in cone.generators])
        for l_value in options.levels(2)
        for j_value in range(-2, 3)
        for s in chart_block([cone], m, l_value, j_value).basis
    ]
    check = check_nilpotent(spec, states)
    result.check(bool(check), f"A1 chart on {len(states)} states, witness {check.witness}")
    if include_slow:
        elliptic = parse("elliptic_curve")
        assert elliptic.data is not None
        region = ConeRegion(elliptic.data.cone_k(), elliptic.data.cone_k_star())
        states = [s for c in range(0, 2) for s in dual_cone_block(region, 0, 0, degree=c).basis]
        check = check_nilpotent(hypersurface_brst(elliptic.data), states)
        result.check(bool(check), f"elliptic curve on {len(states)} states, witness {check.witness}")
    witness = FockState((-1,), (0,), (), (ModeKey(PHI, 0, 0), ModeKey(PSI, 0, -1)))
    with_signs = check_nilpotent(cocycle_control(True), [witness])
    without_signs = check_nilpotent(cocycle_control(False), [witness])
    result.check(
        bool(with_signs) and not without_signs,
        f"cocycle signs are needed: without them the square is {without_signs.image} on {witness}",
    )
    return result


def suite_homotopy(options: SuiteOptions) -> SuiteResult:
    """Contracting homotopies of the rank-one chart and of the two points of P^1."""
    result = SuiteResult("homotopy")
    line = orthant(1)
    spec = chart_brst(_unit_coefficients(line))
    terms = simple_homotopy_terms()
    checked, bad = 0, 0
    bound = options.bound(1)
    for c in range(-bound, bound + 1):
        for l_value in options.levels(2):
            for j_value in _j_range(1, l_value):
                for state in chart_block([line], (c,), l_value, j_value).basis:
                    if state.n[0] < 1:
                        continue
                    checked += 1
                    v = StateVector.basis(state)
                    if anticommutator(terms, spec, v) != v:
                        bad += 1
    result.check(not bad, f"{{R, BRST_g}} = 1 on {checked} states with n >= 1")
    image = anticommutator(terms, spec, StateVector.basis(vacuum((0,), (0,))))
    result.check(image.is_zero(), f"{{R, BRST_g}}|0;0> = {image}")
    problem = _two_points(options)
    assert problem.data is not None
    data = problem.data
    for vertex in data.cone_k().generators:
        m0 = vertex.coords
        solution = solve_ideal_membership(data, m0)
        homotopy = m0_homotopy_terms(solution)
        full = hypersurface_brst(data)
        family = _two_points_family(options)
        bad = 0
        for state in family:
            v = StateVector.basis(state)
            rest = anticommutator(homotopy, full, v) - v
            if any(dot(m0, t.n) <= dot(m0, state.n) for t in rest.states()):
                bad += 1
        result.check(not bad, f"{{R_m0, BRST}} - 1 raises m0 . n for m0={m0} (k={solution.k}) on {len(family)} states")
    return result


SUITES: Dict[str, Callable[[SuiteOptions], SuiteResult]] = {
    "dimone": suite_dimone,
    "dimany": suite_dimany,
    "orbiloc": suite_orbiloc,
    "easyderham": suite_easyderham,
    "toricbundle": suite_toricbundle,
    "wholeN": suite_wholen,
    "conebig": suite_conebig,
    "elliptic": suite_elliptic,
    "mirror": suite_mirror,
    "grading": suite_grading,
    "nilpotency": suite_nilpotency,
    "homotopy": suite_homotopy,
}


def run_suite(name: str, options: SuiteOptions = SuiteOptions(), include_slow: bool = False) -> List[SuiteResult]:
    """
    Run one suite, or every suite for ``"all"``.

    Raises
    ------
    ValueError
        If ``name`` is not a suite.
    """
    if name == "all":
        names = [n for n in SUITES if include_slow or n not in SLOW_SUITES]
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f'Invalid suite "{name}". Valid options are: "all", ' + ", ".join(f'"{n}"' for n in SUITES))
    results = []
    for suite in names:
        logger.info("running suite %s", suite)
        if suite == "nilpotency":
            results.append(suite_nilpotency(options, include_slow))
        else:
            results.append(SUITES[suite](options))
    return results
