"""Contracting homotopies for BRST operators."""
import logging
from fractions import Fraction
from typing import Optional, Tuple

from toricvoa.fields.composite import CompositeFieldTerm
from toricvoa.fields.operator import BlockOperator, assemble_operator
from toricvoa.fields.vertex import VertexOpSpec
from toricvoa.fock.enumerate import Block
from toricvoa.fock.state import PHI, PSI, StateVector

from .ideal import IdealSolution
from .operator import BrstSpec, apply_brst, apply_terms

logger = logging.getLogger(__name__)

SIMPLE = "simple"
M0 = "m0"

HOMOTOPY_POWER = 0


def simple_homotopy_terms(g: Fraction = Fraction(1)) -> Tuple[CompositeFieldTerm, ...]:
    """``g^{-1} Phi(z) e^{-int A(z)}`` in rank one."""
    if not g:
        raise ValueError("The coefficient g must be non-zero.")
    return (CompositeFieldTerm(VertexOpSpec((0,), (-1,)), (PHI, (1,)), 1 / Fraction(g)),)


def m0_homotopy_terms(solution: IdealSolution) -> Tuple[CompositeFieldTerm, ...]:
    """
    ``e^{-int k m0 . B(z)} sum_i h_i(e^{int Delta . B}) (n_i . Psi)(z)`` split into single vertex operators.

    Vertex operators of B alone multiply without singular terms, so the product
    ``e^{-int k m0 . B} e^{int mu . B}`` is the single operator ``e^{int (mu - k m0) . B}``.
    """
    terms = []
    rank = len(solution.m0)
    zero = (0,) * rank
    for n_i, h_i in zip(solution.basis, solution.h):
        for mu, value in sorted(h_i.items()):
            shift = tuple(a - solution.k * b for a, b in zip(mu, solution.m0))
            terms.append(CompositeFieldTerm(VertexOpSpec(shift, zero), (PSI, n_i), value))
    return tuple(terms)


def homotopy_terms(
    kind: str, *, g: Fraction = Fraction(1), solution: Optional[IdealSolution] = None
) -> Tuple[CompositeFieldTerm, ...]:
    if kind == SIMPLE:
        return simple_homotopy_terms(g)
    if kind == M0:
        if solution is None:
            raise ValueError("The m0 homotopy needs an ideal membership solution.")
        return m0_homotopy_terms(solution)
    raise ValueError(f'Invalid homotopy kind "{kind}". Valid options are: "{SIMPLE}", "{M0}".')


def apply_homotopy(terms: Tuple[CompositeFieldTerm, ...], v: StateVector) -> StateVector:
    """The weight-zero mode (coefficient of ``z^0``) of the homotopy field."""
    return apply_terms(terms, v, HOMOTOPY_POWER)


def homotopy_operator(
    kind: str,
    source: Block,
    target: Block,
    *,
    g: Fraction = Fraction(1),
    solution: Optional[IdealSolution] = None,
    workers: int = 1,
) -> BlockOperator:
    """
    Matrix of a homotopy operator between blocks.

    Parameters
    ----------
    kind : str
        ``"simple"`` for ``Phi e^{-int A}`` in rank one, ``"m0"`` for the operator built
        from an ideal membership certificate.
    source, target : Block
        Blocks; the homotopy lowers the cohomological degree by one.
    g : Fraction
        The BRST coefficient in rank one.
    solution : Optional[IdealSolution]
        Certificate for ``"m0"``.
    """
    terms = homotopy_terms(kind, g=g, solution=solution)
    return assemble_operator(lambda v: apply_homotopy(terms, v), source, target, workers)


def anticommutator(terms: Tuple[CompositeFieldTerm, ...], spec: BrstSpec, v: StateVector) -> StateVector:
    """``{R, d} v = R d v + d R v``."""
    return apply_homotopy(terms, apply_brst(spec, v)) + apply_brst(spec, apply_homotopy(terms, v))
