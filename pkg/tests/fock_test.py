from fractions import Fraction

import pytest

from toricvoa.fock import (
    A,
    B,
    PHI,
    PSI,
    ConeRegion,
    FockState,
    GradingConfig,
    J0,
    L0,
    LXA0,
    LXB0,
    ModeKey,
    StateVector,
    box_coefficients,
    chart_block,
    chart_box_block,
    chart_height_bound,
    cohomological_degree,
    dual_cone_block,
    fermionic_monomials,
    fermionic_monomials_with_number,
    fixed_charge_block,
    flat_count,
    format_block,
    min_fermion_weight,
    normal_form,
    orbifold_mode_table,
    orbifold_prediction,
    oscillator_monomials,
    vacuum,
)
from toricvoa.geometry.cone import Cone
from toricvoa.geometry.lattice import n_vector
from toricvoa.utils.errors import FinitenessError

from .problem_test_data import a1_cone, line_cone, two_points_data
from .test_utils import flat_count_oracle

flat_table = [
    pytest.param(charge, weight, id=f"m={charge}-L={weight}") for charge in range(-2, 3) for weight in range(0, 4)
]


def test_oscillator_monomials_at_weight_zero() -> None:
    groups = oscillator_monomials(1, 0)
    assert groups == {0: (((), ()),), 1: (((), (ModeKey(PHI, 0, 0),)),)}


def test_fixed_charge_block() -> None:
    block = fixed_charge_block((0,), (0,), 1)
    assert len(block) == 8
    assert vacuum((0,), (0,)) not in block
    assert format_block(block).splitlines()[0] == "# L=1 m=(0,) n=(0,) dim=8"
    assert all(block.index_of(state) == i for i, state in enumerate(block.basis))


def test_gradings() -> None:
    state = FockState((1,), (1,), (ModeKey(A, 0, -1),), (ModeKey(PHI, 0, 0),))
    config = GradingConfig((1,), (0,))
    assert L0(state) == 2
    assert J0(state, config) == 2
    assert LXA0(state, config) == 2
    assert LXB0(state, config) == LXA0(state, config) + J0(state, config)
    assert cohomological_degree(state, config) == 1


def test_normal_form_commutator() -> None:
    lowered = normal_form([ModeKey(B, 0, 1), ModeKey(A, 0, -1)], vacuum((0,), (0,)))
    assert lowered == StateVector.basis(vacuum((0,), (0,)))
    twice = normal_form([ModeKey(PSI, 0, -1), ModeKey(PSI, 0, -1)], vacuum((0,), (0,)))
    assert twice.is_zero()


def test_state_vector_arithmetic() -> None:
    v = StateVector.basis(vacuum((0,), (0,)))
    w = v + v.scaled(Fraction(1, 2))
    assert w.coefficient(vacuum((0,), (0,))) == Fraction(3, 2)
    assert (w - w).is_zero()
    assert repr(StateVector()) == "0"


def test_chart_block_rank_one() -> None:
    cone = line_cone()
    assert chart_block([cone], (0,), 0, 0).basis == (vacuum((0,), (0,)),)
    states = set(chart_block([cone], (0,), 0, 1).basis)
    assert states == {vacuum((0,), (1,)), FockState((0,), (0,), (), (ModeKey(PHI, 0, 0),))}


def test_chart_block_needs_degree() -> None:
    with pytest.raises(FinitenessError):
        chart_block([Cone.from_coords([(1,)], "N")], (0,), 0, 0)


def test_min_fermion_weight() -> None:
    assert [min_fermion_weight(1, f) for f in (-3, -1, 0, 1, 2)] == [6, 1, 0, 0, 1]
    assert [min_fermion_weight(2, f) for f in (-3, -2, 2, 3)] == [4, 2, 0, 1]


@pytest.mark.parametrize("rank", [1, 2])
def test_fermionic_monomials_with_number(rank: int) -> None:
    for weight in range(0, 4):
        everything = fermionic_monomials(rank, weight)
        for number in range(-3, 4):
            expected = {monomial for monomial, f in everything if f == number}
            assert set(fermionic_monomials_with_number(rank, weight, number)) == expected


def test_chart_height_bound() -> None:
    line = line_cone()
    assert chart_height_bound([line], (0,), 0, 0) == 1
    assert chart_height_bound([line], (-2,), 2, 3) == 9
    assert chart_height_bound([line], (1,), 1, 0) == 1


@pytest.mark.parametrize("j_value", [-1, 0, 1, 2])
def test_chart_block_reaches_every_height(j_value: int) -> None:
    config = GradingConfig((1,), (0,))
    block = chart_block([line_cone()], (-1,), 1, j_value)
    expected = set()
    for u in range(0, chart_height_bound([line_cone()], (-1,), 1, j_value) + 4):
        expected |= set(fixed_charge_block((-1,), (u,), 1, j_value, config).basis)
    assert set(block.basis) == expected


def test_a1_chart_box_block() -> None:
    cone = a1_cone()
    assert chart_box_block(cone, (0, 0), 0, 0).basis == (vacuum((0, 0), (0, 0)),)
    box = chart_box_block(cone, (0, 0), 0, 1)
    assert {state.n for state in box.basis} == {(0, 0), (1, 1)}
    assert len(box) == 3
    assert set(box.basis) <= set(chart_block([cone], (0, 0), 0, 1).basis)


def test_shifted_region_needs_degree() -> None:
    data = two_points_data()
    region = ConeRegion(data.cone_k(), data.cone_k_star(), 1, 0)
    with pytest.raises(FinitenessError):
        dual_cone_block(region, 0, 0)
    assert len(dual_cone_block(region, 0, 0, degree=0)) > 0


@pytest.mark.parametrize("charge,weight", flat_table)
def test_flat_count_matches_brute_force(charge: int, weight: int) -> None:
    for j_value in range(-weight - 1, weight + 2):
        assert flat_count((charge,), weight, j_value) == flat_count_oracle(charge, weight, j_value)


def test_a1_box_coefficients_and_mode_table() -> None:
    cone = a1_cone()
    assert box_coefficients(cone, n_vector(1, 1)) == (Fraction(1, 2), Fraction(1, 2))
    table = orbifold_mode_table(cone, n_vector(1, 1), 2)
    assert min(entry.shift for entry in table) == Fraction(1, 2)


def test_a1_orbifold_prediction_at_zero_charge() -> None:
    cone = a1_cone()
    assert orbifold_prediction(cone, (0, 0), 0, 0) == {(0, 0): 1, (1, 1): 0}
    assert orbifold_prediction(cone, (0, 0), 0, 1) == {(0, 0): 0, (1, 1): 1}
