"""The mirror involution exchanging the M and N sides."""
from typing import List

from toricvoa.fock.state import A, B, PHI, PSI, FockState, ModeKey, StateVector, normal_form, vacuum
from toricvoa.geometry.lattice import dot
from toricvoa.utils.errors import CapabilityError

from .composite import CompositeFieldTerm
from .vertex import VertexOpSpec


def mirror_mode(key: ModeKey) -> ModeKey:
    """``A <-> B`` at the same mode, ``Phi[k] -> Psi[k-1]`` and ``Psi[k] -> Phi[k+1]``."""
    species, direction, mode = key
    if species == A:
        return ModeKey(B, direction, mode)
    if species == B:
        return ModeKey(A, direction, mode)
    if species == PHI:
        return ModeKey(PSI, direction, mode - 1)
    return ModeKey(PHI, direction, mode + 1)


def mirror_state(state: FockState) -> StateVector:
    """
    ``|m, n> -> (-1)^{m . n} |n, m>`` extended to monomials by :func:`mirror_mode`.

    Examples
    --------
    >>> mirror_state(FockState((1,), (1,)))
    (-1)*|1;1>
    """
    raw: List[ModeKey] = [mirror_mode(k) for k in state.bosons + state.fermions]
    sign = -1 if dot(state.m, state.n) % 2 else 1
    return normal_form(raw, vacuum(state.n, state.m)).scaled(sign)


def mirror_vector(v: StateVector) -> StateVector:
    result = StateVector()
    for state, coefficient in v.items():
        result.add(mirror_state(state), coefficient)
    return result


def mirror_term(term: CompositeFieldTerm) -> CompositeFieldTerm:
    """
    The term with M and N interchanged: ``(u . Phi) e^{int m . B}`` becomes ``(u . Psi) e^{int m . A}``.

    Raises
    ------
    CapabilityError
        If the term carries a fan degeneration.
    """
    if term.vop.degeneration is not None:
        raise CapabilityError("Mirroring a fan-degenerate vertex operator is not supported.")
    vop = VertexOpSpec(term.vop.n_shift, term.vop.m_shift, None, term.vop.cocycle)
    prefactor = None
    if term.prefactor is not None:
        species, vector = term.prefactor
        prefactor = (PSI if species == PHI else PHI, vector)
    return CompositeFieldTerm(vop, prefactor, term.scalar)
