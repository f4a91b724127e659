"""Regular-sequence ideal membership in the semigroup ring of K."""
import dataclasses
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from toricvoa.geometry.cone import points_at_height
from toricvoa.geometry.lattice import Coords, dot
from toricvoa.geometry.polytope import PolytopeData
from toricvoa.utils.errors import GenericityFailure, InputError

logger = logging.getLogger(__name__)

Polynomial = Dict[Coords, Fraction]


def _add(a: Coords, b: Coords) -> Coords:
    return tuple(x + y for x, y in zip(a, b))


def standard_basis(rank: int) -> Tuple[Coords, ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))


def log_derivatives(data: PolytopeData, basis: Sequence[Coords]) -> List[Polynomial]:
    """``F_i = sum_m f_m (m . n_i) x^m`` for each basis vector ``n_i``."""
    result = []
    for n_i in basis:
        poly = {m: value * dot(m, n_i) for m, value in data.f.items() if value and dot(m, n_i)}
        result.append(poly)
    return result


@dataclasses.dataclass(frozen=True)
class IdealSolution:
    """
    Certificate ``x^{k m0} = sum_i h_i F_i`` with ``h_i`` of degree ``k - 1``.

    Attributes
    ----------
    k : int
        Exponent.
    m0 : Tuple[int, ...]
        Vertex of Delta.
    basis : Tuple[Tuple[int, ...], ...]
        Basis ``n_i`` of N used for ``F_i``.
    h : Tuple[Dict[Tuple[int, ...], Fraction], ...]
        Coefficients of ``h_i`` by exponent.
    """

    k: int
    m0: Coords
    basis: Tuple[Coords, ...]
    h: Tuple[Polynomial, ...]

    def residual(self, data: PolytopeData) -> Polynomial:
        """``sum_i h_i F_i - x^{k m0}``; empty for a valid certificate."""
        total: Polynomial = {}
        for h_i, f_i in zip(self.h, log_derivatives(data, self.basis)):
            for mu, a in h_i.items():
                for m, b in f_i.items():
                    key = _add(mu, m)
                    total[key] = total.get(key, Fraction(0)) + a * b
        target = tuple(self.k * x for x in self.m0)
        total[target] = total.get(target, Fraction(0)) - 1
        return {key: value for key, value in total.items() if value}

    def verify(self, data: PolytopeData) -> bool:
        return not self.residual(data)


def _solve_degree(
    data: PolytopeData, m0: Coords, basis: Sequence[Coords], k: int
) -> Optional[Tuple[Polynomial, ...]]:
    cone = data.cone_k()
    deg_star = data.deg_star.coords
    exponents = points_at_height(cone, deg_star, k - 1)
    derivatives = log_derivatives(data, basis)
    unknowns = [(i, mu) for i in range(len(basis)) for mu in exponents]
    monomials = sorted(set(points_at_height(cone, deg_star, k)) | {tuple(k * x for x in m0)})
    row_of = {mono: r for r, mono in enumerate(monomials)}
    matrix = sympy.zeros(len(monomials), len(unknowns))
    for col, (i, mu) in enumerate(unknowns):
        for m, value in derivatives[i].items():
            matrix[row_of[_add(mu, m)], col] += sympy.Rational(value.numerator, value.denominator)
    rhs = sympy.zeros(len(monomials), 1)
    rhs[row_of[tuple(k * x for x in m0)], 0] = 1
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    solution = solution.subs({p: 0 for p in params})
    h: List[Polynomial] = [{} for _ in basis]
    for col, (i, mu) in enumerate(unknowns):
        value = sympy.Rational(solution[col, 0])
        if value:
            h[i][mu] = Fraction(int(value.p), int(value.q))
    return tuple(h)


def solve_ideal_membership(
    data: PolytopeData, m0: Coords, basis: Optional[Sequence[Coords]] = None
) -> IdealSolution:
    """
    Find the least ``k <= rank`` with ``x^{k m0}`` in the ideal generated by the ``F_i``.

    One exact linear system is solved per degree ``k`` of the graded ring.

    Parameters
    ----------
    data : PolytopeData
        Delta with coefficients ``f``.
    m0 : Tuple[int, ...]
        A vertex of Delta.
    basis : Optional[Sequence[Tuple[int, ...]]]
        Basis ``n_i`` of N; the standard basis by default.

    Raises
    ------
    InputError
        If ``m0`` is not a vertex of Delta.
    GenericityFailure
        If no ``k <= rank`` works, which signals a non-generic ``f``.
    """
    vertices = {g.coords for g in data.cone_k().generators}
    if tuple(m0) not in vertices or tuple(m0) not in data.f:
        raise InputError(f"m0 = {tuple(m0)} is not a vertex of Delta; vertices are {sorted(vertices)}.")
    basis = tuple(tuple(n) for n in (basis or standard_basis(data.rank)))
    for k in range(1, data.rank + 1):
        h = _solve_degree(data, tuple(m0), basis, k)
        if h is None:
            logger.debug("x^(%d m0) is not in the ideal", k)
            continue
        solution = IdealSolution(k, tuple(m0), basis, h)
        if not solution.verify(data):
            raise GenericityFailure(f"Ideal membership certificate at k={k} failed resubstitution.")
        logger.info("x^(k m0) lies in the ideal for k=%d", k)
        return solution
    raise GenericityFailure(
        f"x^(k m0) is not in the ideal of the log derivatives of f for any k <= {data.rank}; "
        "the coefficients f are not generic."
    )
