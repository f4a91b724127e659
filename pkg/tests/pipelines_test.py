import json
import os
from typing import Any, Callable, Dict

import pytest

from toricvoa.pipelines import (
    NOT_STABILIZED,
    STABILIZED,
    CohomologyReport,
    ProblemInstance,
    ReportEntry,
    RunOptions,
    WindowConfig,
    bundle_cohomology,
    character,
    chart_cohomology,
    chart_window_dim,
    format_entry,
    format_report,
    hypersurface_cohomology,
    list_blocks,
    master_family_cohomology,
    mirror_check,
    mirror_report,
    run_pipeline,
)
from toricvoa.utils.errors import ConfigurationError, GenericityFailure

from .problem_test_data import a1_cone, line_cone, p1_lifted_fan, two_points_data, unit_coefficients
from .test_utils import flat_count_oracle, read_baseline

BASELINE_DIR_PATH = "tests/baseline/report/"

chart_table = [
    pytest.param(charge, l_value, id=f"m={charge}-L={l_value}") for charge in range(-1, 2) for l_value in range(0, 3)
]


def sample_report() -> CohomologyReport:
    report = CohomologyReport("demo", problem_hash="abc", parameters={"seed": 0})
    report.add(ReportEntry(2, 1, 3))
    report.add(ReportEntry(0, 0, 2))
    report.add(ReportEntry(1, -1, 1, STABILIZED))
    report.add(ReportEntry(1, 1, 0))
    return report.finish()


@pytest.mark.parametrize("charge,l_value", chart_table)
def test_rank_one_chart_matches_flat_count(charge: int, l_value: int) -> None:
    g = unit_coefficients(line_cone())
    for j_value in range(-l_value - 1, l_value + 2):
        assert chart_window_dim(line_cone(), g, (charge,), l_value, j_value) == flat_count_oracle(
            charge, l_value, j_value
        )


def test_chart_cohomology_report() -> None:
    window = WindowConfig(l_max=1, j_min=-1, j_max=2, charge_bound=1)
    report = chart_cohomology(line_cone(), window=window)
    assert report.pipeline == "chart"
    for entry in report.entries:
        assert entry.charge is not None
        assert entry.dim == flat_count_oracle(entry.charge[0], entry.l, entry.j)
    threaded = chart_cohomology(line_cone(), window=window, workers=2)
    assert threaded.entries == report.entries


method_table = [
    pytest.param(line_cone, charge, id=f"line-m={charge}") for charge in [(-1,), (0,), (1,)]
] + [pytest.param(a1_cone, charge, id=f"a1-m={charge}") for charge in [(0, 0), (1, 0)]]


@pytest.mark.parametrize("build,charge", method_table)
def test_box_method_agrees_with_full_block(build: Callable[[], Any], charge: tuple) -> None:
    cone = build()
    g = unit_coefficients(cone)
    for l_value in range(0, 2):
        for j_value in range(-2, 3):
            box = chart_window_dim(cone, g, charge, l_value, j_value, method="box")
            assert box == chart_window_dim(cone, g, charge, l_value, j_value, method="full")
            assert box == chart_window_dim(cone, g, charge, l_value, j_value)


def test_chart_window_dim_rejects_unknown_method() -> None:
    with pytest.raises(ValueError):
        chart_window_dim(line_cone(), unit_coefficients(line_cone()), (0,), 0, 0, method="fast")


def test_canonical_bundle_cohomology() -> None:
    window = WindowConfig(l_max=0, j_min=0, j_max=1)
    report = bundle_cohomology(p1_lifted_fan(), (0, 1), window=window, charges=[(0, 0)])
    assert report.pipeline == "bundle"
    assert {(entry.j, entry.degree): entry.dim for entry in report.entries} == {(0, 0): 1, (1, 1): 1}
    assert report.notes == ["cech double complex agrees with the fan-degenerate computation on 2 windows"]


def test_report_character_and_dims() -> None:
    report = sample_report()
    assert len(report.entries) == 3
    assert [(e.l, e.j) for e in report.entries] == [(0, 0), (1, -1), (2, 1)]
    assert report.dims() == {(0, 0): 2, (1, -1): 1, (2, 1): 3}
    assert report.character == "2 + q*w^-1 + 3*q^2*w"
    assert report.stabilized
    assert character(report) == report.character
    assert character(CohomologyReport("empty")) == "0"
    report.entries.append(ReportEntry(3, 0, 1, NOT_STABILIZED))
    assert not report.stabilized
    assert report.unstabilized() == [ReportEntry(3, 0, 1, NOT_STABILIZED)]


report_baseline_table = [pytest.param(sample_report, "sample", id="sample")]


@pytest.mark.parametrize("build,key", report_baseline_table)
def test_format_report(build: Callable[[], CohomologyReport], key: str) -> None:
    expected = read_baseline(os.path.join(BASELINE_DIR_PATH, key + ".txt"))
    assert format_report(build()) == expected
    assert format_entry(ReportEntry(0, 1, 1, charge=[1, -1], degree=2)) == "m=(1,-1) L=0 J=1 t=2 dim=1"


def test_report_json() -> None:
    report = sample_report()
    payload = json.loads(report.to_json())  # type: ignore
    assert payload["character"] == report.character
    assert CohomologyReport.from_dict(payload) == report  # type: ignore


def test_mirror_report_regrades() -> None:
    mirrored = mirror_report(sample_report())
    assert mirrored.dims() == {(0, 0): 2, (0, 1): 1, (3, -1): 3}
    assert mirror_report(mirrored).dims() == sample_report().dims()


def test_window_config() -> None:
    window = WindowConfig(l_max=1, j_min=0, j_max=1, charge_bound=1)
    assert window.grid() == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert window.charges(2) == [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]
    assert window.degree_range(4) == (0, 2)
    assert WindowConfig(degrees=(1, 1)).degree_range(4) == (1, 1)


@pytest.mark.parametrize(
    "kwargs",
    [
        pytest.param({"l_max": -1}, id="negative-l"),
        pytest.param({"j_min": 2, "j_max": 1}, id="empty-j"),
        pytest.param({"stabilize_s": 0}, id="zero-s"),
        pytest.param({"schedule": (2, 1)}, id="decreasing-schedule"),
        pytest.param({"schedule": ()}, id="empty-schedule"),
    ],
)
def test_invalid_window(kwargs: Dict[str, Any]) -> None:
    with pytest.raises(ConfigurationError):
        WindowConfig(**kwargs)


def test_run_options_and_dispatch_errors() -> None:
    with pytest.raises(ConfigurationError):
        RunOptions(workers=0)
    problem = ProblemInstance("points", 2, data=two_points_data())
    with pytest.raises(ConfigurationError):
        run_pipeline(problem, "unknown")
    with pytest.raises(ConfigurationError):
        run_pipeline(problem, "chart")
    with pytest.raises(ConfigurationError):
        run_pipeline(problem, "stringy")


def test_chart_pipeline_stamps_report() -> None:
    problem = ProblemInstance(
        "line", 1, cone=line_cone(), pipeline="chart", window=WindowConfig(l_max=0, j_min=0, j_max=1), seed=4
    )
    report = run_pipeline(problem)
    assert report.problem_hash == problem.content_hash()
    assert report.parameters["seed"] == 4
    assert report.dims() == {(0, 0): 2, (0, 1): 1}


def test_list_blocks() -> None:
    problem = ProblemInstance("a1", 2, cone=a1_cone(), window=WindowConfig(l_max=0, j_min=0, j_max=0, charge_bound=0))
    text = list_blocks(problem)
    assert text.startswith("# ")
    assert "dim=" in text
    with pytest.raises(ConfigurationError):
        list_blocks(ProblemInstance("empty", 2))


def test_hypersurface_rejects_degenerate_coefficients() -> None:
    with pytest.raises(GenericityFailure):
        hypersurface_cohomology(two_points_data(f=(0, 0, 0)))


@pytest.mark.slow
@pytest.mark.parametrize("use_fan", [pytest.param(False, id="plain"), pytest.param(True, id="fan")])
def test_two_points_hypersurface(use_fan: bool) -> None:
    report = hypersurface_cohomology(two_points_data(), p1_lifted_fan() if use_fan else None)
    assert report.dims() == {(0, 0): 2}
    assert report.stabilized


@pytest.mark.slow
def test_two_points_mirror_check() -> None:
    report = mirror_check(ProblemInstance("points", 2, data=two_points_data()))
    assert report.dims() == {(0, 0): 2}


def test_master_family_small_window() -> None:
    window = WindowConfig(l_max=0, j_min=0, j_max=0, schedule=(1, 2), stabilize_s=2)
    report = master_family_cohomology(two_points_data(), p1_lifted_fan(), window)
    assert report.pipeline == "master"
    assert report.notes[-1].startswith("truncation R over [1")
    assert any("fan-degenerate K* computation" in note for note in report.notes[:-1])
    if report.stabilized:
        assert report.dims() == {(0, 0): 2}
