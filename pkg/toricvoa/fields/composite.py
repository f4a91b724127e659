import dataclasses
from fractions import Fraction
from typing import Optional, Tuple

from toricvoa.fock.state import PHI, PSI, FockState, ModeKey, StateVector, apply_free_mode  # noqa: F401
from toricvoa.geometry.lattice import Coords

from .vertex import VertexOpSpec, lowest_power, vertex_op_series

Prefactor = Tuple[int, Coords]


@dataclasses.dataclass(frozen=True)
class CompositeFieldTerm:
    """
    ``scalar * (u . X)(z) * e^{int (m . B + n . A)}(z)`` with ``X`` one of Phi, Psi.

    Parameters
    ----------
    vop : VertexOpSpec
        The vertex operator factor.
    prefactor : Optional[Tuple[int, Tuple[int, ...]]]
        ``(PHI or PSI, u)``; None for a bare vertex operator.
    scalar : Fraction
        Overall coefficient.
    """

    vop: VertexOpSpec
    prefactor: Optional[Prefactor] = None
    scalar: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.prefactor is not None:
            species, vector = self.prefactor
            if species not in (PHI, PSI):
                raise ValueError(f"Invalid prefactor species {species}. Valid options are: PHI, PSI.")
            if len(vector) != self.vop.rank:
                raise ValueError(f"Prefactor {vector} does not match the rank {self.vop.rank}.")


def _fermion_range(term: CompositeFieldTerm, state: FockState, power: int) -> Tuple[int, int, int]:
    """Mode range ``[k_min, k_max]`` of the prefactor that can contribute, and the power offset."""
    assert term.prefactor is not None
    species = term.prefactor[0]
    low = lowest_power(term.vop, state)
    partner = PSI if species == PHI else PHI
    depth = max((-k.mode for k in state.fermions if k.species == partner), default=None)
    if species == PHI:
        # Phi(z) = sum Phi[k] z^{-k}: vertex power p = power + k
        offset = 0
        k_max = max(0, depth if depth is not None else 0)
    else:
        # Psi(z) = sum Psi[k] z^{-k-1}: vertex power p = power + k + 1
        offset = 1
        k_max = max(-1, depth if depth is not None else -1)
    return low - power - offset, k_max, offset


def residue_mode(term: CompositeFieldTerm, v: StateVector, power: int = -1) -> StateVector:
    """
    Coefficient of ``z^power`` of the composite field applied to ``v``.

    With the default ``power=-1`` this is the contour integral of the field;
    weight-zero fields use ``power=0`` for the mode commuting with L0.

    Parameters
    ----------
    term : CompositeFieldTerm
        The field.
    v : StateVector
        Input vector.
    power : int
        Power of ``z`` to extract.

    Returns
    -------
    StateVector
        The exact result.

    Examples
    --------
    >>> term = CompositeFieldTerm(VertexOpSpec((0,), (1,)), (PSI, (1,)))
    >>> residue_mode(term, StateVector.basis(FockState((0,), (0,), (), (ModeKey(PHI, 0, 0),))))
    (1)*|0;1>
    """
    result = StateVector()
    for state, coefficient in v.items():
        factor = coefficient * term.scalar
        if term.prefactor is None:
            series = vertex_op_series(term.vop, state, range(power, power + 1))
            result.add(series.coefficient(power), factor)
            continue
        species, vector = term.prefactor
        k_min, k_max, offset = _fermion_range(term, state, power)
        if k_min > k_max:
            continue
        series = vertex_op_series(term.vop, state, range(power + k_min + offset, power + k_max + offset + 1))
        for k in range(k_min, k_max + 1):
            coefficient_vector = series.coefficient(power + k + offset)
            if coefficient_vector.is_zero():
                continue
            result.add(apply_free_mode(species, k, vector, coefficient_vector), factor)
    return result
