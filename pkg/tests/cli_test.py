import dataclasses
import json
import logging
import os
from fractions import Fraction

import pytest

from toricvoa.cli import ResultCache, bundled_problems, cache_key, parse, parse_problem, run_suite
from toricvoa.cli import cache as cache_module
from toricvoa.cli.main import build_parser, main
from toricvoa.cli.verify import SuiteOptions, SuiteResult
from toricvoa.geometry import validate_reflexive
from toricvoa.pipelines import WindowConfig, bundle_cohomology, hypersurface_cohomology
from toricvoa.utils.errors import FanValidationError, InputError, NotReflexiveError, ProblemFileError

from .problem_test_data import FLOAT_COEFFICIENT, MISSING_FACE, NON_REFLEXIVE, RANDOM_COEFFICIENTS, UNKNOWN_KEYS

bundled_table = [
    pytest.param("a1_chart", "chart", 2, id="a1_chart"),
    pytest.param("elliptic_curve", "hypersurface", 3, id="elliptic_curve"),
    pytest.param("p1_canonical_bundle", "bundle", 2, id="p1_canonical_bundle"),
    pytest.param("p1_two_points", "hypersurface", 2, id="p1_two_points"),
]


def test_bundled_problem_names() -> None:
    assert bundled_problems() == ["a1_chart", "elliptic_curve", "p1_canonical_bundle", "p1_two_points"]


@pytest.mark.parametrize("name,pipeline,rank", bundled_table)
def test_parse_bundled_problem(name: str, pipeline: str, rank: int) -> None:
    problem = parse(name)
    assert problem.name == name
    assert problem.pipeline == pipeline
    assert problem.rank == rank
    assert problem.content_hash() == parse(name).content_hash()


def test_parse_invalid_geometry() -> None:
    with pytest.raises(NotReflexiveError):
        parse_problem(NON_REFLEXIVE)
    with pytest.raises(FanValidationError):
        parse_problem(MISSING_FACE)
    with pytest.raises(InputError):
        parse("no_such_problem")


def test_parse_reports_every_issue() -> None:
    with pytest.raises(ProblemFileError) as info:
        parse_problem(UNKNOWN_KEYS, "unknown.json")
    issues = info.value.issues
    assert [issue.path for issue in issues] == ["unknown.json:colour", "unknown.json:window.speed"]
    assert [issue.line for issue in issues] == [6, 7]


def test_parse_rejects_float_coefficient() -> None:
    with pytest.raises(ProblemFileError) as info:
        parse_problem(FLOAT_COEFFICIENT)
    assert len(info.value.issues) == 1
    assert info.value.issues[0].line == 4
    with pytest.raises(ProblemFileError):
        parse_problem("[1, 2]")
    with pytest.raises(ProblemFileError):
        parse_problem("{")


def test_random_coefficients_are_recorded() -> None:
    problem = parse_problem(RANDOM_COEFFICIENTS)
    assert problem.seed == 3
    assert problem.data is not None
    assert problem.data.f[(0, 1)] == Fraction(1, 2)
    assert [(label, point) for label, point, _ in problem.random_coefficients] == [("f", (-1, 1)), ("f", (1, 1))]
    assert all(1 <= value <= 9 for _, _, value in problem.random_coefficients)
    assert parse_problem(RANDOM_COEFFICIENTS).random_coefficients == problem.random_coefficients
    assert parse_problem(RANDOM_COEFFICIENTS, seed=11).seed == 11


def test_result_cache(tmpdir, caplog, monkeypatch) -> None:
    problem = parse("a1_chart")
    key = cache_key(problem, "chart:fan=False")
    assert key != cache_key(problem, "chart:fan=True")
    cache = ResultCache(str(tmpdir))
    assert cache.get(key) is None
    assert cache.put(key, {"dims": [1, 2]})
    assert cache.get(key) == {"dims": [1, 2]}

    with open(os.path.join(str(tmpdir), f"{key}.lock"), "w"):
        pass
    assert not cache.put(key, {"dims": [3]})
    os.remove(os.path.join(str(tmpdir), f"{key}.lock"))

    with open(os.path.join(str(tmpdir), f"{key}.json"), "w") as handle:
        handle.write("{not json")
    with caplog.at_level(logging.WARNING):
        assert cache.get(key) is None
    assert "corrupt cache entry" in caplog.text

    monkeypatch.setattr(cache_module, "CONVENTION_VERSION", "test")
    assert cache_key(problem, "chart:fan=False") != key


def test_suite_result_format() -> None:
    result = SuiteResult("demo")
    result.check(True, "first")
    result.check(False, "second")
    assert not result.passed
    assert result.format() == "# suite demo\nok   first\nFAIL second\nFAIL demo\n"
    with pytest.raises(ValueError):
        run_suite("nosuch", SuiteOptions())


def test_main_verify(capsys) -> None:
    assert main(["verify", "dimone", "--lmax", "1", "--charge-bound", "1"]) == 0
    out = capsys.readouterr().out
    assert "window L <= 1, |m_i| <= 1" in out
    assert "PASS dimone" in out


def test_main_rejects_unknown_suite() -> None:
    with pytest.raises(SystemExit) as info:
        main(["verify", "nosuch"])
    assert info.value.code == 2


def test_main_input_errors(tmpdir, capsys) -> None:
    assert main(["chart", "no_such_problem"]) == 2
    path = os.path.join(str(tmpdir), "non_reflexive.json")
    with open(path, "w") as handle:
        handle.write(NON_REFLEXIVE)
    assert main(["hypersurface", path]) == 2
    assert "error:" in capsys.readouterr().err


def test_main_blocks(capsys) -> None:
    assert main(["blocks", "a1_chart", "--lmax", "0", "--jmin", "0", "--jmax", "0", "--charge-bound", "0"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# ")
    assert "dim=" in out


def test_main_chart_with_cache(tmpdir, capsys) -> None:
    cache_dir = os.path.join(str(tmpdir), "cache")
    output = os.path.join(str(tmpdir), "report.json")
    args = ["chart", "a1_chart", "--lmax", "0", "--jmin", "0", "--jmax", "1", "--cache-dir", cache_dir]
    assert main(args + ["--json", "-o", output]) == 0
    with open(output) as handle:
        report = json.load(handle)
    assert report["pipeline"] == "chart"
    assert report["problem_hash"]
    assert len([name for name in os.listdir(cache_dir) if name.endswith(".json")]) == 1

    assert main(args) == 0
    fresh = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == fresh
    assert fresh.startswith("# pipeline chart\n")


def test_main_charge_bound_override(tmpdir) -> None:
    assert build_parser().parse_args(["chart", "a1_chart"]).charge_bound is None
    output = os.path.join(str(tmpdir), "report.json")
    args = ["chart", "a1_chart", "--lmax", "0", "--jmin", "0", "--jmax", "0", "--charge-bound", "0"]
    assert main(args + ["--json", "-o", output]) == 0
    with open(output) as handle:
        report = json.load(handle)
    assert report["entries"]
    assert {tuple(entry["charge"]) for entry in report["entries"]} == {(0, 0)}


def test_bundled_two_points_window() -> None:
    problem = parse("p1_two_points")
    assert problem.window == WindowConfig(l_max=1, j_min=-1, j_max=1, schedule=(1, 2, 3), stabilize_s=2)
    assert problem.data is not None
    window = dataclasses.replace(problem.window, l_max=0)
    report = hypersurface_cohomology(problem.data, problem.fan, window)
    assert report.dims() == {(0, 0): 2}
    assert report.stabilized


def test_bundled_canonical_bundle() -> None:
    problem = parse("p1_canonical_bundle")
    assert problem.fan is not None and problem.deg_star is not None
    window = dataclasses.replace(problem.window, l_max=0, j_min=0, j_max=1)
    report = bundle_cohomology(problem.fan, problem.deg_star, window=window, charges=[(0, 0)])
    assert {(entry.j, entry.degree): entry.dim for entry in report.entries} == {(0, 0): 1, (1, 1): 1}


def test_bundled_elliptic_curve_is_reflexive() -> None:
    problem = parse("elliptic_curve")
    assert problem.data is not None
    validate_reflexive(problem.data)
    assert [g.coords for g in problem.data.cone_k().generators] == [(1, -1, -1), (1, -1, 2), (1, 2, -1)]
    assert [g.coords for g in problem.data.cone_k_star().generators] == [(1, -1, -1), (1, 0, 1), (1, 1, 0)]
    assert len(problem.data.f) == 10


suite_table = [
    pytest.param("dimone", SuiteOptions(l_max=2, charge_bound=2), id="dimone"),
    pytest.param("dimone", SuiteOptions(rank=2, l_max=1, charge_bound=1), id="dimone-rank2"),
    pytest.param("dimany", SuiteOptions(l_max=1, charge_bound=1), id="dimany"),
    pytest.param("orbiloc", SuiteOptions(l_max=1, charge_bound=1), id="orbiloc"),
    pytest.param("easyderham", SuiteOptions(charge_bound=1), id="easyderham"),
    pytest.param("toricbundle", SuiteOptions(l_max=0, charge_bound=1), id="toricbundle"),
]


@pytest.mark.parametrize("name,options", suite_table)
def test_suite_small_window(name: str, options: SuiteOptions) -> None:
    (result,) = run_suite(name, options)
    assert result.passed, result.format()
    assert result.lines[0].strip().startswith("window L <= ")


def test_main_character(capsys) -> None:
    assert main(["character", "p1_two_points", "--lmax", "0", "--jmin", "0", "--jmax", "0"]) == 0
    assert capsys.readouterr().out == "character 2\n"
