"""Twisted-sector bookkeeping for simplicial Gorenstein charts."""
import dataclasses
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from toricvoa.geometry.cone import Cone, box_elements
from toricvoa.geometry.lattice import Coords, LatticeVector, dot, solve_rational
from toricvoa.utils.errors import CapabilityError, MathematicalFailure


@dataclasses.dataclass(frozen=True)
class ModeShift:
    """L0 contribution of one flat-generator mode in a twisted sector."""

    generator: str
    direction: int
    mode: int
    shift: Fraction


def box_coefficients(cone: Cone, element: LatticeVector) -> Tuple[Fraction, ...]:
    """Coefficients ``alpha_i`` of ``element = sum alpha_i n_i``."""
    if not cone.is_simplicial():
        raise CapabilityError(f"{cone} is not simplicial.")
    columns = [g.coords for g in cone.generators]
    rows = [[col[axis] for col in columns] for axis in range(cone.rank)]
    return solve_rational(rows, list(element.coords))


def orbifold_mode_table(cone: Cone, element: LatticeVector, max_mode: int) -> List[ModeShift]:
    """
    L0 shifts of the flat generators ``a_i, b^i, phi^i, psi_i`` in the sector of a Box element.

    ``a_i[-k]`` and ``psi_i[-k]`` (``k >= 1``) contribute ``k - alpha_i``;
    ``b^i[-k]`` and ``phi^i[-k]`` (``k >= 0``) contribute ``k + alpha_i``.

    Raises
    ------
    MathematicalFailure
        If an entry is negative.
    """
    alphas = box_coefficients(cone, element)
    table = []
    for i, alpha in enumerate(alphas):
        for k in range(0, max_mode + 1):
            for name in ("b", "phi"):
                table.append(ModeShift(name, i, -k, k + alpha))
            if k >= 1:
                for name in ("a", "psi"):
                    table.append(ModeShift(name, i, -k, k - alpha))
    negative = [entry for entry in table if entry.shift < 0]
    if negative:
        raise MathematicalFailure(f"Negative L0 contribution in the mode table: {negative[0]}")
    return table


def a0_bound(cone: Cone, level: int) -> int:
    """
    ``D(level)``: A[0] eigenvalues on ``L0 = level`` lie in ``C - D deg_C``.

    Each occurrence of ``a_i`` or ``psi_i`` lowers ``m . n_i`` by one and costs
    at least ``1 - alpha_i`` of L0.
    """
    bound = 0
    for element in box_elements(cone):
        for alpha in box_coefficients(cone, element):
            bound = max(bound, math.floor(Fraction(level) / (1 - alpha)))
    return bound


@lru_cache(maxsize=None)
def flat_direction_counts(charge: int, max_weight: int) -> Dict[Tuple[int, int], int]:
    """
    Monomials in one flat direction with the given charge, by (weight, J).

    Generators: ``b[-k]`` and ``phi[-k]`` for ``k >= 0`` with charge +1,
    ``a[-k]`` and ``psi[-k]`` for ``k >= 1`` with charge -1; ``phi`` has
    J = 1 and ``psi`` has J = -1.
    """
    cap = max(charge + max_weight, 0)
    table: Dict[Tuple[int, int, int], int] = {(0, 0, 0): 1}

    def extend(step: Dict[Tuple[int, int, int], int], d_charge: int, weight: int, d_j: int, most: int) -> None:
        for (c, w, j), count in list(step.items()):
            for times in range(1, most + 1):
                new_w = w + times * weight
                new_c = c + times * d_charge
                if new_w > max_weight or new_c > cap:
                    break
                key = (new_c, new_w, j + times * d_j)
                step[key] = step.get(key, 0) + count

    for k in range(0, max_weight + 1):
        extend(table, 1, k, 0, cap if k == 0 else max_weight // k)
        extend(table, 1, k, 1, 1)
    for k in range(1, max_weight + 1):
        extend(table, -1, k, 0, max_weight // k)
        extend(table, -1, k, -1, 1)
    return {(w, j): count for (c, w, j), count in table.items() if c == charge}


def flat_count(charges: Coords, l_value: int, j_value: int) -> int:
    """Dimension of the flat algebra in the dual basis at the given charges, L and J."""
    totals: Dict[Tuple[int, int], int] = {(0, 0): 1}
    for charge in charges:
        direction = flat_direction_counts(charge, max(l_value, 0))
        merged: Dict[Tuple[int, int], int] = {}
        for (w1, j1), c1 in totals.items():
            for (w2, j2), c2 in direction.items():
                if w1 + w2 <= l_value:
                    key = (w1 + w2, j1 + j2)
                    merged[key] = merged.get(key, 0) + c1 * c2
        totals = merged
    return totals.get((l_value, j_value), 0)


def orbifold_prediction(cone: Cone, m: Coords, l_value: int, j_value: int) -> Dict[Coords, int]:
    """
    Predicted chart cohomology at ``(m, L, J)`` split by Box sector.

    The sector of ``n_b`` contributes the flat count at charges ``m . n_i``,
    weight ``L - m . n_b`` and ``J - deg_C . n_b``.
    """
    if cone.degree is None:
        raise CapabilityError(f"{cone} has no degree vector.")
    charges = tuple(dot(m, g.coords) for g in cone.generators)
    result = {}
    for element in box_elements(cone):
        weight = l_value - dot(m, element.coords)
        shift_j = dot(cone.degree.coords, element.coords)
        result[element.coords] = flat_count(charges, weight, j_value - shift_j) if weight >= 0 else 0
    return result
