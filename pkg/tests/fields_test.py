import pytest

from toricvoa.fields import (
    CompositeFieldTerm,
    VertexOpSpec,
    apply_field_mode,
    field_terms,
    mirror_state,
    mirror_term,
    mirror_vector,
    quadratic_field_mode,
    residue_mode,
    vertex_op_series,
)
from toricvoa.fock import B, L0, PHI, PSI, FockState, GradingConfig, ModeKey, StateVector, fixed_charge_block, vacuum
from toricvoa.linalg.sparse import SparseMatrix
from toricvoa.utils.errors import CapabilityError, ConfigurationError

from .problem_test_data import p1_lifted_fan


def test_vertex_operator_series() -> None:
    series = vertex_op_series(VertexOpSpec((1,), (0,)), vacuum((0,), (0,)), range(0, 2))
    assert series.coefficient(0) == StateVector.basis(vacuum((1,), (0,)))
    assert series.coefficient(1) == StateVector.basis(FockState((1,), (0,), (ModeKey(B, 0, -1),)))


def test_residue_of_psi_term() -> None:
    term = CompositeFieldTerm(VertexOpSpec((0,), (1,)), (PSI, (1,)))
    state = FockState((0,), (0,), (), (ModeKey(PHI, 0, 0),))
    assert residue_mode(term, StateVector.basis(state)) == StateVector.basis(vacuum((0,), (1,)))


def test_composite_term_validation() -> None:
    with pytest.raises(ValueError):
        CompositeFieldTerm(VertexOpSpec((0,), (1,)), (B, (1,)))
    with pytest.raises(ValueError):
        CompositeFieldTerm(VertexOpSpec((0,), (1,)), (PSI, (1, 0)))


def test_virasoro_zero_mode_is_l0() -> None:
    for state in fixed_charge_block((1,), (1,), 2).basis:
        v = StateVector.basis(state)
        assert apply_field_mode("L", 0, v) == v.scaled(L0(state))


def test_quadratic_field_mode_matrix() -> None:
    block = fixed_charge_block((1,), (1,), 2)
    operator = quadratic_field_mode("L", 0, block)
    assert operator.matrix == SparseMatrix.identity(len(block)).scaled(2)


def test_field_terms_errors() -> None:
    with pytest.raises(ValueError):
        field_terms("W")
    with pytest.raises(ConfigurationError):
        field_terms("J")
    assert len(field_terms("J", GradingConfig((1,), (0,)))) == 3


def test_mirror_state_sign() -> None:
    assert mirror_state(FockState((1,), (1,))) == StateVector.basis(vacuum((1,), (1,))).scaled(-1)
    assert mirror_state(FockState((0,), (0,), (), (ModeKey(PHI, 0, 0),))) == StateVector.basis(
        FockState((0,), (0,), (), (ModeKey(PSI, 0, -1),))
    )


def test_mirror_is_an_involution() -> None:
    for state in fixed_charge_block((1,), (0,), 2).basis:
        v = StateVector.basis(state)
        assert mirror_vector(mirror_vector(v)) == v


def test_mirror_term() -> None:
    term = CompositeFieldTerm(VertexOpSpec((1, 0), (0, 0)), (PHI, (1, 0)), 3)
    mirrored = mirror_term(term)
    assert mirrored.vop.n_shift == (1, 0)
    assert mirrored.prefactor == (PSI, (1, 0))
    assert mirror_term(mirrored) == term
    degenerate = CompositeFieldTerm(VertexOpSpec((0, 0), (0, 1), p1_lifted_fan()), (PSI, (0, 1)))
    with pytest.raises(CapabilityError):
        mirror_term(degenerate)
