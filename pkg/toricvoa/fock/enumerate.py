import dataclasses
import logging
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from toricvoa.geometry.cone import Cone, box_elements, points_at_height
from toricvoa.geometry.lattice import Coords, dot
from toricvoa.utils.errors import FinitenessError

from .grading import GradingConfig
from .state import A, B, PHI, PSI, FockState, ModeKey

logger = logging.getLogger(__name__)

Monomial = Tuple[ModeKey, ...]


def _bosonic_slots(rank: int, weight: int) -> List[ModeKey]:
    return [ModeKey(s, d, -k) for s in (A, B) for d in range(rank) for k in range(1, weight + 1)]


@lru_cache(maxsize=None)
def bosonic_monomials(rank: int, weight: int) -> Tuple[Monomial, ...]:
    """All canonically ordered A/B creation monomials of the given weight."""
    slots = _bosonic_slots(rank, weight)
    result: List[Monomial] = []

    def walk(index: int, remaining: int, chosen: Monomial) -> None:
        if remaining == 0:
            result.append(chosen)
            return
        if index == len(slots):
            return
        slot = slots[index]
        for count in range(remaining // slot.weight, -1, -1):
            walk(index + 1, remaining - count * slot.weight, chosen + (slot,) * count)

    walk(0, weight, ())
    return tuple(result)


@lru_cache(maxsize=None)
def fermionic_monomials(rank: int, weight: int) -> Tuple[Tuple[Monomial, int], ...]:
    """All ordered Phi/Psi creation monomials of the given weight with their fermion number."""
    slots = [ModeKey(PHI, d, -k) for d in range(rank) for k in range(0, weight + 1)]
    slots += [ModeKey(PSI, d, -k) for d in range(rank) for k in range(1, weight + 1)]
    result: List[Tuple[Monomial, int]] = []

    def walk(index: int, remaining: int, chosen: Monomial, number: int) -> None:
        if index == len(slots):
            if remaining == 0:
                result.append((chosen, number))
            return
        slot = slots[index]
        walk(index + 1, remaining, chosen, number)
        if slot.weight <= remaining:
            sign = 1 if slot.species == PHI else -1
            walk(index + 1, remaining - slot.weight, chosen + (slot,), number + sign)

    walk(0, weight, (), 0)
    return tuple(result)


@lru_cache(maxsize=None)
def oscillator_monomials(rank: int, weight: int) -> Dict[int, Tuple[Tuple[Monomial, Monomial], ...]]:
    """
    Creation monomials of total weight ``weight`` grouped by fermion number.

    Parameters
    ----------
    rank : int
        Rank of the lattices.
    weight : int
        Total oscillator weight (sum of minus mode numbers).

    Returns
    -------
    Dict[int, Tuple[Tuple[Monomial, Monomial], ...]]
        ``{fermion number: ((bosons, fermions), ...)}``.
    """
    grouped: Dict[int, List[Tuple[Monomial, Monomial]]] = {}
    if weight < 0:
        return {}
    for bosonic_weight in range(weight + 1):
        fermions = fermionic_monomials(rank, weight - bosonic_weight)
        for bosons in bosonic_monomials(rank, bosonic_weight):
            for monomial, number in fermions:
                grouped.setdefault(number, []).append((bosons, monomial))
    return {number: tuple(items) for number, items in grouped.items()}


def _lowest_weight(rank: int, count: int, offset: int) -> int:
    return sum(k // rank + offset for k in range(count))


def min_fermion_weight(rank: int, fermion_number: int) -> int:
    """
    Smallest oscillator weight carrying the given fermion number.

    ``Phi[0]`` has weight zero and ``Psi[-1]`` weight one, so ``F >= 0``
    costs the ``F`` cheapest Phi modes and ``F < 0`` the ``-F`` cheapest Psi modes.

    Examples
    --------
    >>> [min_fermion_weight(1, f) for f in (-3, -1, 0, 1, 2)]
    [6, 1, 0, 0, 1]
    """
    if fermion_number >= 0:
        return _lowest_weight(rank, fermion_number, 0)
    return _lowest_weight(rank, -fermion_number, 1)


@lru_cache(maxsize=None)
def _distinct_modes(species: int, rank: int, count: int, weight: int) -> Tuple[Monomial, ...]:
    low = 0 if species == PHI else 1
    slots = [ModeKey(species, d, -k) for d in range(rank) for k in range(low, weight + 1)]
    result: List[Monomial] = []

    def walk(index: int, left: int, remaining: int, chosen: Monomial) -> None:
        if left == 0:
            if remaining == 0:
                result.append(chosen)
            return
        if len(slots) - index < left or remaining < 0:
            return
        slot = slots[index]
        if slot.weight <= remaining:
            walk(index + 1, left - 1, remaining - slot.weight, chosen + (slot,))
        walk(index + 1, left, remaining, chosen)

    walk(0, count, weight, ())
    return tuple(result)


@lru_cache(maxsize=None)
def fermionic_monomials_with_number(rank: int, weight: int, fermion_number: int) -> Tuple[Monomial, ...]:
    """Ordered Phi/Psi creation monomials of exactly the given weight and fermion number."""
    result: List[Monomial] = []
    psi_count = max(0, -fermion_number)
    while True:
        phi_count = fermion_number + psi_count
        floor = _lowest_weight(rank, phi_count, 0) + _lowest_weight(rank, psi_count, 1)
        if floor > weight:
            break
        for phi_weight in range(0, weight + 1):
            phis = _distinct_modes(PHI, rank, phi_count, phi_weight)
            if not phis:
                continue
            psis = _distinct_modes(PSI, rank, psi_count, weight - phi_weight)
            result.extend(a + b for a in phis for b in psis)
        psi_count += 1
    return tuple(result)


def _states(
    m: Coords, n: Coords, weight: int, fermion_number: Optional[int] = None
) -> Iterator[FockState]:
    rank = len(m)
    if fermion_number is None:
        groups = oscillator_monomials(rank, weight)
        for number in sorted(groups):
            for bosons, fermions in groups[number]:
                yield FockState(m, n, bosons, fermions)
        return
    for fermion_weight in range(min_fermion_weight(rank, fermion_number), weight + 1):
        fermion_part = fermionic_monomials_with_number(rank, fermion_weight, fermion_number)
        if not fermion_part:
            continue
        for bosons in bosonic_monomials(rank, weight - fermion_weight):
            for fermions in fermion_part:
                yield FockState(m, n, bosons, fermions)


class Block:
    """
    Finite graded piece of a Fock space with a deterministic basis.

    Parameters
    ----------
    constraints : Dict[str, Any]
        The grading values and charge region defining the block.
    basis : Sequence[FockState]
        Basis states; sorted canonically on construction.

    Attributes
    ----------
    basis : Tuple[FockState, ...]
        Canonically ordered basis.
    """

    def __init__(self, constraints: Dict[str, Any], basis: Sequence[FockState]):
        self.constraints = dict(constraints)
        self.basis: Tuple[FockState, ...] = tuple(sorted(set(basis), key=FockState.sort_key))
        self._index = {state: i for i, state in enumerate(self.basis)}

    def __len__(self) -> int:
        return len(self.basis)

    def __contains__(self, state: object) -> bool:
        return state in self._index

    def index_of(self, state: FockState) -> int:
        return self._index[state]

    def get_index(self, state: FockState) -> Optional[int]:
        return self._index.get(state)

    def label(self) -> str:
        return " ".join(f"{key}={value}" for key, value in sorted(self.constraints.items()))

    def __repr__(self) -> str:
        return f"Block({self.label()}, dim={len(self)})"


def format_block(block: Block) -> str:
    """Text listing of a block, one basis state per line."""
    lines = [f"# {block.label()} dim={len(block)}"]
    lines += [str(state) for state in block.basis]
    return "\n".join(lines) + "\n"


def fixed_charge_block(
    m: Coords, n: Coords, l_value: int, j_value: Optional[int] = None, config: Optional[GradingConfig] = None
) -> Block:
    """
    Pattern (i): fixed charges and fixed L.

    Examples
    --------
    >>> len(fixed_charge_block((0,), (0,), 1))
    8
    """
    weight = l_value - dot(m, n)
    fermion_number = None
    if j_value is not None:
        config = config or GradingConfig()
        fermion_number = j_value - dot(config.require_deg(), n) + dot(config.require_deg_star(), m)
    constraints: Dict[str, Any] = {"m": m, "n": n, "L": l_value}
    if j_value is not None:
        constraints["J"] = j_value
    return Block(constraints, list(_states(tuple(m), tuple(n), weight, fermion_number)) if weight >= 0 else [])


def chart_height_bound(cones: Sequence[Cone], m: Coords, l_value: int, j_value: int) -> int:
    """
    Exclusive bound on ``u = deg_C . n`` for a chart block at fixed ``(m, L, J)``.

    The slice of the cones at height ``u`` is ``u`` times the convex hull of
    the generators, so the oscillator weight ``L - m . n`` is at most
    ``L + r u`` with ``r = max(-m . g)``. The fermion number ``J - u`` needs
    at least :func:`min_fermion_weight` of it. Past ``u = J`` that cost grows
    by at least ``(u - J) // rank + 1`` per step, so once it exceeds the
    budget and outpaces ``r`` no larger height contributes.

    Examples
    --------
    >>> from toricvoa.geometry.cone import Cone
    >>> line = Cone.from_coords([(1,)], "N", (1,))
    >>> chart_height_bound([line], (0,), 0, 0), chart_height_bound([line], (-2,), 2, 3)
    (1, 9)
    """
    rank = len(m)
    degree = cones[0].degree.coords  # type: ignore
    slopes = []
    for cone in cones:
        for g in cone.generators:
            if dot(degree, g.coords) != 1:
                raise FinitenessError(f"{cone} does not have degree vector {degree}.")
            slopes.append(-dot(m, g.coords))
    r = max(slopes) if slopes else 0
    u = 0
    while True:
        budget = l_value + r * u
        feasible = budget >= 0 and min_fermion_weight(rank, j_value - u) <= budget
        if not feasible and u >= j_value and (u - j_value) // rank + 1 >= r:
            return u
        u += 1


def chart_block(cones: Sequence[Cone], m: Coords, l_value: int, j_value: int) -> Block:
    """
    Pattern (iii): fixed ``m``, ``n`` in the union of ``cones``, fixed L and chart J.

    The chart J grading is ``(#Phi - #Psi) + deg_C . n``.

    Raises
    ------
    FinitenessError
        If a cone has no degree vector.
    """
    if not cones or any(c.degree is None for c in cones):
        raise FinitenessError("Chart blocks need cones with a degree vector deg_C.")
    degree = cones[0].degree.coords  # type: ignore
    bound = chart_height_bound(cones, m, l_value, j_value)
    states: List[FockState] = []
    for u in range(bound):
        points = sorted({p for cone in cones for p in points_at_height(cone, degree, u)})
        for n in points:
            weight = l_value - dot(m, n)
            if weight >= 0:
                states.extend(_states(tuple(m), n, weight, j_value - u))
    constraints = {"m": tuple(m), "L": l_value, "J": j_value, "region": "|".join(str(c) for c in cones)}
    block = Block(constraints, states)
    logger.debug("chart block %s: dim %d (height bound %d)", block.label(), len(block), bound)
    return block


def chart_box_block(cone: Cone, m: Coords, l_value: int, j_value: int) -> Block:
    """
    The part of :func:`chart_block` whose N charge lies in the Box of a simplicial cone.

    BRST_g moves ``n`` by a ray, so nothing maps into these states; on a
    simplicial chart the cohomology is the kernel of BRST_g on this block.

    Raises
    ------
    FinitenessError
        If the cone has no degree vector.
    CapabilityError
        If the cone is not simplicial.
    """
    if cone.degree is None:
        raise FinitenessError("Chart blocks need cones with a degree vector deg_C.")
    states: List[FockState] = []
    for element in box_elements(cone):
        n = element.coords
        weight = l_value - dot(m, n)
        if weight >= 0:
            states.extend(_states(tuple(m), n, weight, j_value - dot(cone.degree.coords, n)))
    constraints = {"m": tuple(m), "L": l_value, "J": j_value, "region": f"box {cone}"}
    return Block(constraints, states)


@dataclasses.dataclass(frozen=True)
class ConeRegion:
    """
    Charge region ``(K - R deg) x (K* - S deg_star)`` for dual-cone blocks.

    Parameters
    ----------
    k : Cone
        Cone in M with degree vector ``deg_star``.
    k_star : Cone
        Cone in N with degree vector ``deg``.
    m_shift : int
        Truncation ``R`` of the M side.
    n_shift : int
        Truncation ``S`` of the N side.
    """

    k: Cone
    k_star: Cone
    m_shift: int = 0
    n_shift: int = 0

    @property
    def config(self) -> GradingConfig:
        assert self.k.degree is not None and self.k_star.degree is not None
        return GradingConfig(self.k_star.degree.coords, self.k.degree.coords)


def dual_cone_block(region: ConeRegion, lxa: int, j_value: int, degree: Optional[int] = None) -> Block:
    """
    Pattern (ii): ``m`` and ``n`` in the (shifted) dual cones with fixed LXA0 and J0.

    Parameters
    ----------
    region : ConeRegion
        Cones and truncation shifts.
    lxa : int
        Value of LXA0.
    j_value : int
        Value of J0.
    degree : Optional[int]
        Cohomological degree ``deg . n + deg_star . m``; required when a shift is non-zero.

    Raises
    ------
    FinitenessError
        If the region is shifted and no degree is given.
    """
    config = region.config
    deg, deg_star = config.require_deg(), config.require_deg_star()
    pairing_dd = dot(deg, deg_star)
    shifted = region.m_shift or region.n_shift
    if degree is None:
        if shifted:
            raise FinitenessError(
                "A truncated dual-cone region is infinite at fixed (LXA0, J0); fix the cohomological degree too."
            )
        rank = region.k.rank
        degrees = range(j_value - rank * (lxa + 1), j_value + (2 + rank) * lxa + 1)
        states = [s for c in degrees for s in _dual_cone_states(region, lxa, j_value, c, deg, deg_star, pairing_dd)]
    else:
        states = list(_dual_cone_states(region, lxa, j_value, degree, deg, deg_star, pairing_dd))
    constraints: Dict[str, Any] = {"LXA": lxa, "J": j_value, "R": region.m_shift, "S": region.n_shift}
    if degree is not None:
        constraints["c"] = degree
    return Block(constraints, states)


def _dual_cone_states(
    region: ConeRegion, lxa: int, j_value: int, degree: int, deg: Coords, deg_star: Coords, pairing_dd: int
) -> Iterator[FockState]:
    shift_m = tuple(region.m_shift * x for x in deg)
    shift_n = tuple(region.n_shift * x for x in deg_star)
    top = degree + (region.m_shift + region.n_shift) * pairing_dd
    for lifted_h in range(0, top + 1):
        h = lifted_h - region.m_shift * pairing_dd
        u = degree - h
        lifted_u = u + region.n_shift * pairing_dd
        if lifted_u < 0:
            continue
        m_points = points_at_height(region.k, deg_star, lifted_h)
        n_points = points_at_height(region.k_star, deg, lifted_u)
        for lifted_m in m_points:
            m = tuple(a - b for a, b in zip(lifted_m, shift_m))
            for lifted_n in n_points:
                n = tuple(a - b for a, b in zip(lifted_n, shift_n))
                weight = lxa - dot(m, n) - h
                if weight < 0:
                    continue
                yield from _states(m, n, weight, j_value - u + h)


def enumerate_block(
    *,
    l_value: int,
    j_value: Optional[int] = None,
    m: Optional[Coords] = None,
    n: Optional[Coords] = None,
    cones: Optional[Sequence[Cone]] = None,
    region: Optional[ConeRegion] = None,
    degree: Optional[int] = None,
    config: Optional[GradingConfig] = None,
) -> Block:
    """
    Enumerate a block whose finiteness follows from one of three patterns.

    (i) ``m`` and ``n`` fixed with ``l_value``; (ii) a ``region`` of dual cones
    with ``l_value`` as LXA0 and ``j_value``; (iii) fixed ``m`` with ``cones``
    for the N charge, ``l_value`` and chart ``j_value``.

    Raises
    ------
    FinitenessError
        If the constraints match none of the patterns.
    """
    if m is not None and n is not None:
        return fixed_charge_block(m, n, l_value, j_value, config)
    if region is not None and j_value is not None:
        return dual_cone_block(region, l_value, j_value, degree)
    if m is not None and cones and j_value is not None:
        return chart_block(cones, m, l_value, j_value)
    raise FinitenessError(
        "Block constraints are not certifiably finite: give fixed (m, n, L), "
        "a dual-cone region with (LXA0, J0), or fixed m with chart cones and (L, J)."
    )
