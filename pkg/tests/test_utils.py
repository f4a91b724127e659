import itertools
from typing import Dict, List, Tuple

import sympy

from toricvoa.linalg.sparse import SparseMatrix


def dense_rank(matrix: SparseMatrix) -> int:
    """Rank through sympy, independent of the fraction-free elimination."""
    if not matrix.n_rows or not matrix.n_cols:
        return 0
    return int(sympy.Matrix(matrix.to_dense()).rank())


def _flat_generators(charge: int, weight: int) -> List[Tuple[int, int, int, bool]]:
    # (charge, weight, J, fermion) for b[-k], phi[-k] (k >= 0) and a[-k], psi[-k] (k >= 1)
    gens = []
    for k in range(0, weight + 1):
        gens.append((1, k, 0, False))
        gens.append((1, k, 1, True))
    for k in range(1, weight + 1):
        gens.append((-1, k, 0, False))
        gens.append((-1, k, -1, True))
    return gens


def flat_count_oracle(charge: int, weight: int, j_value: int) -> int:
    """
    Brute-force count of rank-one flat monomials at the given charge, L and J.

    A monomial uses each generator some number of times (fermions at most
    once); the exponent of a weight-zero boson is bounded by ``charge + weight``
    because every negative unit of charge costs at least one unit of weight.
    """
    if weight < 0:
        return 0
    gens = _flat_generators(charge, weight)
    cap = max(charge + weight, 0)
    ranges = []
    for c, w, _, fermion in gens:
        if fermion:
            ranges.append(range(0, 2))
        elif w == 0:
            ranges.append(range(0, cap + 1))
        else:
            ranges.append(range(0, weight // w + 1))
    count = 0
    for powers in itertools.product(*ranges):
        total_w = sum(p * g[1] for p, g in zip(powers, gens))
        if total_w != weight:
            continue
        total_c = sum(p * g[0] for p, g in zip(powers, gens))
        total_j = sum(p * g[2] for p, g in zip(powers, gens))
        if total_c == charge and total_j == j_value:
            count += 1
    return count


def flat_table(charge: int, weight: int) -> Dict[int, int]:
    """Non-zero oracle counts by J at one charge and weight."""
    table = {}
    for j_value in range(-weight - 1, weight + 2):
        count = flat_count_oracle(charge, weight, j_value)
        if count:
            table[j_value] = count
    return table


def read_baseline(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()
