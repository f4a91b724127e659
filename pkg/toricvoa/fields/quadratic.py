"""
Normal-ordered quadratic fields of the free-field realization.

Every field is a sum of normal-ordered products ``:X_i Y_i:`` summed over the
direction ``i`` and of linear terms ``u . X``, where ``X, Y`` are free fields
or their first derivatives.
"""
import dataclasses
import logging
from fractions import Fraction
from typing import Optional, Tuple, Union

from toricvoa.fock.enumerate import Block
from toricvoa.fock.grading import GradingConfig, oscillator_weight
from toricvoa.fock.state import A, B, PHI, PSI, ModeKey, StateVector, normal_form
from toricvoa.geometry.lattice import Coords

from .operator import BlockOperator, assemble_operator

logger = logging.getLogger(__name__)

CONFORMAL_WEIGHTS = {A: 1, B: 1, PHI: 0, PSI: 1}

FIELD_NAMES = ("L", "J", "G", "Q", "LXA", "LXB", "LN2")

HALF = Fraction(1, 2)


@dataclasses.dataclass(frozen=True)
class PairTerm:
    """``coefficient * sum_i :X_i^{(dx)} Y_i^{(dy)}:`` with ``left = (X, dx)``, ``right = (Y, dy)``."""

    coefficient: Fraction
    left: Tuple[int, int]
    right: Tuple[int, int]


@dataclasses.dataclass(frozen=True)
class LinearTerm:
    """``coefficient * sum_i vector_i X_i^{(derivative)}``."""

    coefficient: Fraction
    species: int
    derivative: int
    vector: Coords


FieldTerm = Union[PairTerm, LinearTerm]


def mode_factor(species: int, derivative: int, k: int) -> int:
    """Factor relating ``(d^derivative X)[k]`` to ``X[k]``: ``(d X)[k] = (-k - h_X) X[k]``."""
    factor = 1
    weight = CONFORMAL_WEIGHTS[species]
    for step in range(derivative):
        factor *= -k - weight - step
    return factor


def field_terms(which: str, config: Optional[GradingConfig] = None) -> Tuple[FieldTerm, ...]:
    """
    Terms of a named field.

    Parameters
    ----------
    which : str
        One of ``L, J, G, Q, LXA, LXB, LN2``.
    config : Optional[GradingConfig]
        Degree vectors; required by every field except ``L``.

    Raises
    ------
    ValueError
        If ``which`` is not a known field.
    ConfigurationError
        If a needed degree vector is missing.
    """
    config = config or GradingConfig()
    one = Fraction(1)
    if which == "L":
        return PairTerm(one, (B, 0), (A, 0)), PairTerm(one, (PHI, 1), (PSI, 0))
    if which == "LXA":
        return field_terms("L", config) + (LinearTerm(-one, A, 1, config.require_deg_star()),)
    if which == "LXB":
        return (
            PairTerm(one, (B, 0), (A, 0)),
            PairTerm(-one, (PHI, 0), (PSI, 1)),
            LinearTerm(-one, B, 1, config.require_deg()),
        )
    if which == "LN2":
        return (
            PairTerm(one, (B, 0), (A, 0)),
            PairTerm(HALF, (PHI, 1), (PSI, 0)),
            PairTerm(-HALF, (PHI, 0), (PSI, 1)),
            LinearTerm(-HALF, A, 1, config.require_deg_star()),
            LinearTerm(-HALF, B, 1, config.require_deg()),
        )
    if which == "J":
        return (
            PairTerm(one, (PHI, 0), (PSI, 0)),
            LinearTerm(one, B, 0, config.require_deg()),
            LinearTerm(-one, A, 0, config.require_deg_star()),
        )
    if which == "Q":
        return PairTerm(one, (A, 0), (PHI, 0)), LinearTerm(-one, PHI, 1, config.require_deg())
    if which == "G":
        return PairTerm(one, (B, 0), (PSI, 0)), LinearTerm(-one, PSI, 1, config.require_deg_star())
    raise ValueError(f'Invalid field "{which}". Valid options are: {", ".join(FIELD_NAMES)}.')


def _apply_pair(term: PairTerm, k: int, v: StateVector) -> StateVector:
    (x, dx), (y, dy) = term.left, term.right
    result = StateVector()
    for state, coefficient in v.items():
        bound = oscillator_weight(state) + abs(k) + 2
        for j in range(-bound, bound + 1):
            factor = term.coefficient * mode_factor(x, dx, j) * mode_factor(y, dy, k - j)
            if not factor:
                continue
            for i in range(state.rank):
                left, right = ModeKey(x, i, j), ModeKey(y, i, k - j)
                if not left.is_creation and right.is_creation:
                    sign = -1 if left.is_fermion and right.is_fermion else 1
                    raw = [right, left]
                else:
                    sign = 1
                    raw = [left, right]
                result.add(normal_form(raw, state), coefficient * factor * sign)
    return result


def _apply_linear(term: LinearTerm, k: int, v: StateVector) -> StateVector:
    factor = term.coefficient * mode_factor(term.species, term.derivative, k)
    result = StateVector()
    if not factor:
        return result
    for i, value in enumerate(term.vector):
        if not value:
            continue
        key = ModeKey(term.species, i, k)
        for state, coefficient in v.items():
            result.add(normal_form([key], state), coefficient * factor * value)
    return result


def apply_field_mode(which: str, k: int, v: StateVector, config: Optional[GradingConfig] = None) -> StateVector:
    """
    The ``k``-th mode of a named quadratic field applied to ``v``.

    Examples
    --------
    >>> from toricvoa.fock.state import FockState
    >>> apply_field_mode("L", 0, StateVector.basis(FockState((1,), (1,))))
    (1)*|1;1>
    """
    result = StateVector()
    for term in field_terms(which, config):
        if isinstance(term, PairTerm):
            result.add(_apply_pair(term, k, v))
        else:
            result.add(_apply_linear(term, k, v))
    return result


def quadratic_field_mode(
    which: str,
    k: int,
    block: Block,
    config: Optional[GradingConfig] = None,
    target: Optional[Block] = None,
    workers: int = 1,
) -> BlockOperator:
    """
    Matrix of the ``k``-th mode of a quadratic field from ``block`` to ``target``.

    Parameters
    ----------
    which : str
        Field name, see :data:`FIELD_NAMES`.
    k : int
        Mode number.
    block : Block
        Source block.
    config : Optional[GradingConfig]
        Degree vectors used by the field.
    target : Optional[Block]
        Target block; defaults to ``block``.
    workers : int
        Threads for column assembly.

    Raises
    ------
    BlockClosureError
        If the mode maps a basis state outside ``target``.
    """
    field_terms(which, config)
    return assemble_operator(
        lambda v: apply_field_mode(which, k, v, config), block, target if target is not None else block, workers
    )
