from fractions import Fraction
from typing import List, Tuple

import pytest

from toricvoa.brst import (
    M0,
    SIMPLE,
    CachedBrst,
    anticommutator,
    apply_brst,
    build_brst,
    chart_brst,
    check_nilpotent,
    conservation_violations,
    homotopy_terms,
    hypersurface_brst,
    log_derivatives,
    m0_homotopy_terms,
    simple_homotopy_terms,
    solve_ideal_membership,
)
from toricvoa.cli.verify import cocycle_control
from toricvoa.fock import PHI, PSI, ConeRegion, FockState, ModeKey, StateVector, chart_block, dual_cone_block, vacuum
from toricvoa.geometry.lattice import dot
from toricvoa.utils.errors import GenericityFailure, InputError

from .problem_test_data import a1_cone, line_cone, p1_lifted_fan, two_points_data, unit_coefficients


def two_points_family() -> List[FockState]:
    data = two_points_data()
    region = ConeRegion(data.cone_k(), data.cone_k_star(), 1, 0)
    return [
        state
        for lxa in range(0, 2)
        for j_value in range(-2, 3)
        for c in range(-1, 2)
        for state in dual_cone_block(region, lxa, j_value, degree=c).basis
    ]


@pytest.mark.parametrize("use_fan", [pytest.param(False, id="plain"), pytest.param(True, id="fan")])
def test_two_points_brst_is_nilpotent(use_fan: bool) -> None:
    fan = p1_lifted_fan() if use_fan else None
    family = two_points_family()
    assert family
    check = check_nilpotent(hypersurface_brst(two_points_data(), fan), family)
    assert check.ok, check.witness


def test_two_points_brst_conserves_gradings() -> None:
    spec = hypersurface_brst(two_points_data())
    assert spec.conserved == ("LXA0", "J0")
    assert conservation_violations(spec, two_points_family()) == []


def test_a1_chart_brst_is_nilpotent() -> None:
    cone = a1_cone()
    spec = chart_brst(unit_coefficients(cone))
    states = [
        state
        for m in [(0, 0), (1, 0), (2, -1)]
        for l_value in range(0, 2)
        for j_value in range(-1, 3)
        for state in chart_block([cone], m, l_value, j_value).basis
    ]
    assert check_nilpotent(spec, states)


def test_cocycle_signs_are_needed() -> None:
    witness = FockState((-1,), (0,), (), (ModeKey(PHI, 0, 0), ModeKey(PSI, 0, -1)))
    assert check_nilpotent(cocycle_control(True), [witness])
    unsigned = check_nilpotent(cocycle_control(False), [witness])
    assert not unsigned
    assert unsigned.witness == witness
    assert unsigned.image is not None and not unsigned.image.is_zero()


def test_rank_one_brst_on_phi_zero() -> None:
    spec = chart_brst(unit_coefficients(line_cone()))
    image = apply_brst(spec, StateVector.basis(FockState((0,), (0,), (), (ModeKey(PHI, 0, 0),))))
    assert list(image.states()) == [vacuum((0,), (1,))]


def test_simple_homotopy_contracts_positive_n() -> None:
    cone = line_cone()
    spec = chart_brst(unit_coefficients(cone))
    terms = simple_homotopy_terms()
    checked = 0
    for c in range(-1, 2):
        for l_value in range(0, 3):
            for j_value in range(-3, 4):
                for state in chart_block([cone], (c,), l_value, j_value).basis:
                    if state.n[0] < 1:
                        continue
                    checked += 1
                    v = StateVector.basis(state)
                    assert anticommutator(terms, spec, v) == v, state
    assert checked > 0
    assert anticommutator(terms, spec, StateVector.basis(vacuum((0,), (0,)))).is_zero()


def test_homotopy_kind_errors() -> None:
    with pytest.raises(ValueError):
        homotopy_terms("other")
    with pytest.raises(ValueError):
        homotopy_terms(M0)
    with pytest.raises(ValueError):
        simple_homotopy_terms(Fraction(0))
    assert homotopy_terms(SIMPLE, g=Fraction(2))[0].scalar == Fraction(1, 2)


def test_log_derivatives() -> None:
    first, second = log_derivatives(two_points_data(), [(1, 0), (0, 1)])
    assert first == {(-1, 1): -1, (1, 1): 1}
    assert second == {(-1, 1): 1, (0, 1): 1, (1, 1): 1}


@pytest.mark.parametrize("m0", [pytest.param((-1, 1), id="left"), pytest.param((1, 1), id="right")])
def test_ideal_membership(m0: Tuple[int, int]) -> None:
    data = two_points_data()
    solution = solve_ideal_membership(data, m0)
    assert solution.k == 2
    assert solution.verify(data)
    assert solution.residual(data) == {}


def test_ideal_membership_failures() -> None:
    with pytest.raises(InputError):
        solve_ideal_membership(two_points_data(), (0, 1))
    with pytest.raises(GenericityFailure):
        solve_ideal_membership(two_points_data(f=(0, 0, 0)), (-1, 1))


@pytest.mark.slow
def test_m0_homotopy_raises_filtration() -> None:
    data = two_points_data()
    m0 = (-1, 1)
    terms = m0_homotopy_terms(solve_ideal_membership(data, m0))
    spec = hypersurface_brst(data)
    for state in two_points_family():
        v = StateVector.basis(state)
        rest = anticommutator(terms, spec, v) - v
        assert all(dot(m0, t.n) > dot(m0, state.n) for t in rest.states()), state


def test_cached_brst_matches_direct_assembly() -> None:
    cone = a1_cone()
    spec = chart_brst(unit_coefficients(cone))
    block = chart_block([cone], (1, 0), 1, 1)
    cached = CachedBrst(spec)
    assert cached.build(block, block).matrix == build_brst(spec, block, block).matrix
    assert len(cached.images) == len(block)
    images = dict(cached.images)
    cached.build(block, block)
    assert all(cached.images[state] is image for state, image in images.items())
    v = StateVector.basis(block.basis[0]) + StateVector.basis(block.basis[-1])
    assert cached(v) == apply_brst(spec, v)
