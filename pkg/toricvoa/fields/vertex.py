import dataclasses
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from toricvoa.fock.state import A, B, FockState, ModeKey, StateVector, mode_order
from toricvoa.geometry.fan import Fan, common_cone_coords
from toricvoa.geometry.lattice import Coords, dot

logger = logging.getLogger(__name__)

Monomial = Tuple[ModeKey, ...]


@dataclasses.dataclass(frozen=True)
class VertexOpSpec:
    """
    Vertex operator ``e^{int (m . B + n . A)}`` with optional fan degeneration.

    Parameters
    ----------
    m_shift : Tuple[int, ...]
        Shift of the M charge.
    n_shift : Tuple[int, ...]
        Shift of the N charge.
    degeneration : Optional[Fan]
        If given, the operator vanishes on states whose N charge shares no cone with ``n_shift``.
    cocycle : bool
        Whether the sign ``(-1)^{m . n_1}`` is applied. Only test fixtures turn it off.
    """

    m_shift: Coords
    n_shift: Coords
    degeneration: Optional[Fan] = None
    cocycle: bool = True

    @property
    def rank(self) -> int:
        return len(self.m_shift)


class SeriesSlice:
    """
    Finitely many coefficients of a vertex operator series, keyed by power of ``z``.
    """

    def __init__(self, terms: Optional[Dict[int, StateVector]] = None):
        self.terms: Dict[int, StateVector] = {p: v for p, v in (terms or {}).items() if not v.is_zero()}

    def coefficient(self, power: int) -> StateVector:
        return self.terms.get(power, StateVector())

    def powers(self) -> List[int]:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms


def _merge(first: Monomial, second: Monomial) -> Monomial:
    return tuple(sorted(first + second, key=mode_order))


def _alpha_creation(m: Coords, n: Coords, j: int) -> List[Tuple[ModeKey, int]]:
    """``alpha[-j] = m . B[-j] + n . A[-j]`` as (mode, coefficient) pairs."""
    parts = []
    for i, value in enumerate(n):
        if value:
            parts.append((ModeKey(A, i, -j), value))
    for i, value in enumerate(m):
        if value:
            parts.append((ModeKey(B, i, -j), value))
    return parts


@lru_cache(maxsize=4096)
def creation_polynomial(m: Coords, n: Coords, max_weight: int) -> Tuple[Tuple[int, Monomial, Fraction], ...]:
    """
    Terms of ``exp(sum_{j>=1} alpha[-j] z^j / j)`` up to ``z^max_weight``.

    Returns
    -------
    Tuple[Tuple[int, Monomial, Fraction], ...]
        ``(power, creation monomial, coefficient)`` triples.
    """
    poly: Dict[Monomial, Fraction] = {(): Fraction(1)}
    for j in range(1, max_weight + 1):
        parts = _alpha_creation(m, n, j)
        if not parts:
            continue
        result: Dict[Monomial, Fraction] = {}
        for mono, coefficient in poly.items():
            weight = sum(-k.mode for k in mono)
            # term alpha[-j]^t / (j^t t!)
            layer: Dict[Monomial, Fraction] = {mono: coefficient}
            t = 0
            while layer:
                for key, value in layer.items():
                    result[key] = result.get(key, Fraction(0)) + value
                t += 1
                if weight + t * j > max_weight:
                    break
                nxt: Dict[Monomial, Fraction] = {}
                for key, value in layer.items():
                    for mode, factor in parts:
                        merged = _merge(key, (mode,))
                        nxt[merged] = nxt.get(merged, Fraction(0)) + value * Fraction(factor, j * t)
                layer = nxt
        poly = {k: v for k, v in result.items() if v}
    return tuple(sorted(((sum(-k.mode for k in mono), mono, c) for mono, c in poly.items()), key=lambda x: x[0]))


def _alpha_annihilate(m: Coords, n: Coords, j: int, mono: Monomial) -> List[Tuple[Monomial, int]]:
    """``alpha[j]`` on a creation monomial: B_i[j] contracts A_i[-j], A_i[j] contracts B_i[-j]."""
    images = []
    for i, value in enumerate(m):
        if value:
            key = ModeKey(A, i, -j)
            count = mono.count(key)
            if count:
                position = mono.index(key)
                images.append((mono[:position] + mono[position + 1 :], value * j * count))
    for i, value in enumerate(n):
        if value:
            key = ModeKey(B, i, -j)
            count = mono.count(key)
            if count:
                position = mono.index(key)
                images.append((mono[:position] + mono[position + 1 :], value * j * count))
    return images


def annihilation_terms(m: Coords, n: Coords, bosons: Monomial) -> List[Tuple[int, Monomial, Fraction]]:
    """
    ``exp(-sum_{j>=1} alpha[j] z^{-j} / j)`` applied to a creation monomial.

    Returns ``(removed weight, remaining monomial, coefficient)`` triples.
    """
    current: Dict[Tuple[int, Monomial], Fraction] = {(0, bosons): Fraction(1)}
    for j in sorted({-k.mode for k in bosons}):
        result: Dict[Tuple[int, Monomial], Fraction] = {}
        for (removed, mono), coefficient in current.items():
            layer: Dict[Monomial, Fraction] = {mono: coefficient}
            t = 0
            while layer:
                for key, value in layer.items():
                    slot = (removed + t * j, key)
                    result[slot] = result.get(slot, Fraction(0)) + value
                t += 1
                nxt: Dict[Monomial, Fraction] = {}
                for key, value in layer.items():
                    for image, factor in _alpha_annihilate(m, n, j, key):
                        nxt[image] = nxt.get(image, Fraction(0)) - value * Fraction(factor, j * t)
                layer = {k: v for k, v in nxt.items() if v}
        current = {k: v for k, v in result.items() if v}
    return [(removed, mono, c) for (removed, mono), c in current.items()]


def leading_power(spec: VertexOpSpec, state: FockState) -> int:
    """``p_0 = m . n_1 + n . m_1``."""
    return dot(spec.m_shift, state.n) + dot(spec.n_shift, state.m)


def lowest_power(spec: VertexOpSpec, state: FockState) -> int:
    """Smallest power that can carry a non-zero coefficient."""
    return leading_power(spec, state) - sum(-k.mode for k in state.bosons)


def vertex_op_series(spec: VertexOpSpec, state: FockState, powers: range) -> SeriesSlice:
    """
    Coefficients of ``e^{int (m . B + n . A)}(z)`` applied to ``state`` for the requested powers.

    The result at power ``p`` is
    ``(-1)^{m . n_1} [z^{p - p_0}] exp(sum alpha[-j] z^j / j) exp(-sum alpha[j] z^{-j} / j) |m_1 + m, n_1 + n>``
    with ``alpha = m . B + n . A``; it shifts L0 by ``p + m . n``.

    Parameters
    ----------
    spec : VertexOpSpec
        The operator.
    state : FockState
        Input basis state.
    powers : range
        Powers of ``z`` to compute.

    Returns
    -------
    SeriesSlice
        Non-zero coefficients among ``powers``.

    Examples
    --------
    >>> series = vertex_op_series(VertexOpSpec((1,), (0,)), FockState((0,), (0,)), range(0, 2))
    >>> series.coefficient(1)
    (1)*B1[-1] |1;0>
    """
    if not len(powers):
        return SeriesSlice()
    m, n = spec.m_shift, spec.n_shift
    if spec.degeneration is not None and not common_cone_coords(spec.degeneration, n, state.n):
        return SeriesSlice()
    sign = -1 if spec.cocycle and dot(m, state.n) % 2 else 1
    p0 = leading_power(spec, state)
    new_m = tuple(a + b for a, b in zip(state.m, m))
    new_n = tuple(a + b for a, b in zip(state.n, n))
    top = powers[-1]
    out: Dict[int, StateVector] = {}
    for removed, rest, c_ann in annihilation_terms(m, n, state.bosons):
        base = p0 - removed
        budget = top - base
        if budget < 0:
            continue
        for weight, mono, c_cre in creation_polynomial(m, n, budget):
            p = base + weight
            if p not in powers:
                continue
            target = FockState(new_m, new_n, _merge(rest, mono), state.fermions)
            out.setdefault(p, StateVector()).add_term(target, sign * c_ann * c_cre)
    return SeriesSlice(out)
