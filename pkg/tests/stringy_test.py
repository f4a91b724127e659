from fractions import Fraction

import pytest

from toricvoa.geometry import Cone
from toricvoa.stringy import (
    StringForm,
    box_sector,
    build_string_complex,
    contract,
    forms_at,
    j_bigrading,
    sector_cohomology,
    string_hypercohomology,
    wedge,
)
from toricvoa.utils.errors import InputError, SideMismatchError

from .problem_test_data import a1_cone, line_cone, p1_fan


def test_contract_and_wedge() -> None:
    assert contract((1, 2), (0, 1)) == [((1,), 1), ((0,), -2)]
    assert contract((0, 2), (0,)) == []
    assert wedge((1,), (3, 0)) == [((0, 1), -3)]
    assert wedge((0,), (5, 0)) == []


def test_forms_at() -> None:
    cone = line_cone()
    assert forms_at(cone, (1,), (0,), 1) == [StringForm((0,), (1,), ()), StringForm((0,), (0,), (0,))]
    assert forms_at(cone, (1,), (1,), 1) == [StringForm((1,), (0,), (0,))]
    assert forms_at(cone, (1,), (-1,), 0) == []


def test_rank_one_brst_cohomology() -> None:
    slice_ = build_string_complex(line_cone(), truncation=1)
    slice_.check_differentials()
    assert slice_.brst_cohomology() == {
        ((0,), 0): 1,
        ((0,), 1): 0,
        ((0,), 2): 0,
        ((1,), 0): 1,
        ((1,), 1): 1,
    }
    assert j_bigrading(slice_) == {(0, 0): 2, (1, 1): 1}


def test_a1_brst_cohomology_at_zero_charge() -> None:
    slice_ = build_string_complex(a1_cone(), charges=[(0, 0)])
    slice_.check_differentials()
    cohomology = slice_.brst_cohomology()
    assert cohomology[((0, 0), 0)] == 1
    assert cohomology[((0, 0), 1)] == 1


def test_a1_twisted_sector() -> None:
    cone = a1_cone()
    assert box_sector(cone, (1, 1)) == (1, 1)
    assert box_sector(cone, (2, 2)) == (0, 0)
    table = sector_cohomology(build_string_complex(cone, charges=[(0, 0)]))
    assert table[((0, 0), 0, (0, 0))] == 1
    assert table[((0, 0), 1, (1, 1))] == 1


def test_string_complex_errors() -> None:
    with pytest.raises(SideMismatchError):
        build_string_complex(Cone.from_coords([(1,)], "M"))
    with pytest.raises(InputError):
        build_string_complex(line_cone(), {(2,): Fraction(1)})


@pytest.mark.slow
def test_p1_string_hypercohomology() -> None:
    result = string_hypercohomology(p1_fan(), schedule=(0, 1, 2, 3), s=2)
    assert result.hyper == {0: 1, 2: 1}
    assert result.stabilization is not None
    assert result.stabilization.stabilized_at is not None
