import dataclasses
import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from toricvoa.fields.composite import CompositeFieldTerm, residue_mode
from toricvoa.fields.operator import BlockOperator, assemble_operator
from toricvoa.fields.vertex import VertexOpSpec
from toricvoa.fock.enumerate import Block
from toricvoa.fock.grading import J0, L0, LXA0, GradingConfig, cohomological_degree
from toricvoa.fock.state import PHI, PSI, FockState, StateVector
from toricvoa.geometry.fan import Fan
from toricvoa.geometry.lattice import Coords, dot
from toricvoa.geometry.polytope import PolytopeData

logger = logging.getLogger(__name__)

HYPERSURFACE_GRADINGS = ("LXA0", "J0")
CHART_GRADINGS = ("L0", "m")


def grading_value(name: str, state: FockState, config: Optional[GradingConfig] = None) -> object:
    """
    Value of a named conserved grading on a basis state.

    Valid names are ``L0``, ``J0``, ``LXA0``, ``m`` and ``c``.
    """
    if name == "L0":
        return L0(state)
    if name == "m":
        return state.m
    config = config or GradingConfig()
    if name == "J0":
        return J0(state, config)
    if name == "LXA0":
        return LXA0(state, config)
    if name == "c":
        return cohomological_degree(state, config)
    raise ValueError(f'Invalid grading "{name}". Valid options are: "L0", "J0", "LXA0", "m", "c".')


@dataclasses.dataclass(frozen=True)
class BrstSpec:
    """
    A BRST operator as a sum of composite field residues.

    Parameters
    ----------
    terms : Tuple[CompositeFieldTerm, ...]
        Summands; the operator is the sum of their ``z^{-1}`` coefficients.
    conserved : Tuple[str, ...]
        Gradings the operator commutes with.
    config : GradingConfig
        Degree vectors for the conserved gradings.
    """

    terms: Tuple[CompositeFieldTerm, ...]
    conserved: Tuple[str, ...] = ()
    config: GradingConfig = GradingConfig()

    def __add__(self, other: "BrstSpec") -> "BrstSpec":
        conserved = tuple(name for name in self.conserved if name in other.conserved)
        return BrstSpec(self.terms + other.terms, conserved, self.config)


def brst_f_terms(data: PolytopeData, cocycle: bool = True) -> Tuple[CompositeFieldTerm, ...]:
    """Summands ``f_m (m . Phi)(z) e^{int m . B(z)}`` for the points of Delta with ``f_m != 0``."""
    zero = (0,) * data.rank
    return tuple(
        CompositeFieldTerm(VertexOpSpec(m, zero, None, cocycle), (PHI, m), value)
        for m, value in sorted(data.f.items())
        if value
    )


def brst_g_terms(
    points: Mapping[Coords, Fraction], fan: Optional[Fan] = None, cocycle: bool = True
) -> Tuple[CompositeFieldTerm, ...]:
    """Summands ``g_n (n . Psi)(z) e^{int n . A(z)}``, fan-degenerate when ``fan`` is given."""
    terms = []
    for n, value in sorted(points.items()):
        if value:
            zero = (0,) * len(n)
            terms.append(CompositeFieldTerm(VertexOpSpec(zero, n, fan, cocycle), (PSI, n), Fraction(value)))
    return tuple(terms)


def hypersurface_brst(data: PolytopeData, fan: Optional[Fan] = None, cocycle: bool = True) -> BrstSpec:
    """``BRST_{f,g}`` conserving LXA0 and J0."""
    config = GradingConfig(data.deg.coords, data.deg_star.coords)
    terms = brst_f_terms(data, cocycle) + brst_g_terms(data.g, fan, cocycle)
    return BrstSpec(terms, HYPERSURFACE_GRADINGS, config)


def chart_brst(generators: Mapping[Coords, Fraction], fan: Optional[Fan] = None) -> BrstSpec:
    """Chart-level ``BRST_g`` over the given generator coefficients, conserving L0 and the M charge."""
    return BrstSpec(brst_g_terms(generators, fan), CHART_GRADINGS)


def apply_terms(terms: Iterable[CompositeFieldTerm], v: StateVector, power: int = -1) -> StateVector:
    result = StateVector()
    for term in terms:
        result.add(residue_mode(term, v, power))
    return result


def apply_brst(spec: BrstSpec, v: StateVector) -> StateVector:
    """The BRST operator applied to ``v``."""
    return apply_terms(spec.terms, v)


def build_brst(spec: BrstSpec, source: Block, target: Block, workers: int = 1) -> BlockOperator:
    """
    Matrix of a BRST operator between two blocks.

    Raises
    ------
    BlockClosureError
        If an image leaves ``target``.
    """
    return assemble_operator(lambda v: apply_brst(spec, v), source, target, workers)


class CachedBrst:
    """
    A BRST operator that remembers the image of every basis state it has applied to.

    Truncated regions are nested, so most states recur from one cutoff to
    the next and their images are computed once.
    """

    def __init__(self, spec: BrstSpec):
        self.spec = spec
        self.images: Dict[FockState, StateVector] = {}

    def image(self, state: FockState) -> StateVector:
        found = self.images.get(state)
        if found is None:
            found = apply_brst(self.spec, StateVector.basis(state))
            self.images[state] = found
        return found

    def __call__(self, v: StateVector) -> StateVector:
        result = StateVector()
        for state, coefficient in v.items():
            result.add(self.image(state), coefficient)
        return result

    def build(self, source: Block, target: Block, workers: int = 1) -> BlockOperator:
        return assemble_operator(self, source, target, workers)


@dataclasses.dataclass(frozen=True)
class NilpotencyCheck:
    ok: bool
    witness: Optional[FockState] = None
    image: Optional[StateVector] = None

    def __bool__(self) -> bool:
        return self.ok


def check_nilpotent(spec: BrstSpec, family: Iterable[FockState]) -> NilpotencyCheck:
    """
    Check that the operator squares to zero on every state of ``family``.

    Returns
    -------
    NilpotencyCheck
        ``ok`` is False with the first violating basis state as witness.
    """
    count = 0
    for state in family:
        count += 1
        once = apply_brst(spec, StateVector.basis(state))
        twice = apply_brst(spec, once)
        if not twice.is_zero():
            logger.debug("square is non-zero on %s", state)
            return NilpotencyCheck(False, state, twice)
    logger.debug("operator squares to zero on %d states", count)
    return NilpotencyCheck(True)


def conservation_violations(spec: BrstSpec, family: Iterable[FockState]) -> List[Tuple[FockState, FockState, str]]:
    """Triples ``(source, image, grading)`` where an image state changes a conserved grading."""
    violations = []
    for state in family:
        image = apply_brst(spec, StateVector.basis(state))
        for name in spec.conserved:
            before = grading_value(name, state, spec.config)
            for target in image:
                if grading_value(name, target, spec.config) != before:
                    violations.append((state, target, name))
    return violations


def support_shift_violations(
    terms: Sequence[CompositeFieldTerm],
    family: Iterable[FockState],
    measure: Callable[[FockState], int],
    shift: int = 1,
) -> List[Tuple[FockState, FockState]]:
    """
    Pairs ``(source, image)`` where a term fails to shift ``measure`` by exactly ``shift``.

    Used for ``deg_star . m`` under ``BRST_f`` and ``deg . n`` under ``BRST_g``.
    """
    violations = []
    for state in family:
        expected = measure(state) + shift
        image = apply_terms(terms, StateVector.basis(state))
        violations.extend((state, target) for target in image if measure(target) != expected)
    return violations


def m_height(vector: Coords) -> Callable[[FockState], int]:
    return lambda state: dot(vector, state.m)


def n_height(vector: Coords) -> Callable[[FockState], int]:
    return lambda state: dot(vector, state.n)
