"""Dispatch of problem instances to the pipelines."""
import dataclasses
import logging
from typing import List, Optional

from toricvoa.fock.enumerate import ConeRegion, chart_block, dual_cone_block, format_block
from toricvoa.geometry.cone import degree_vector
from toricvoa.stringy.hyper import string_hypercohomology
from toricvoa.utils.errors import ConfigurationError, MathematicalFailure

from .chart import bundle_cohomology, chart_cohomology
from .hypersurface import hypersurface_cohomology, master_family_cohomology
from .problem import PIPELINES, ProblemInstance, RunOptions
from .report import NOT_STABILIZED, STABILIZED, CohomologyReport, ReportEntry, mirror_report

logger = logging.getLogger(__name__)


def _require(problem: ProblemInstance, component: str, pipeline: str) -> None:
    if getattr(problem, component) is None:
        raise ConfigurationError(f'Pipeline "{pipeline}" needs a "{component}" section in problem {problem.name}.')


def stringy_report(problem: ProblemInstance) -> CohomologyReport:
    """String hypercohomology of the problem fan as a report; ``J`` is the total degree."""
    _require(problem, "fan", "stringy")
    assert problem.fan is not None
    window = problem.window
    result = string_hypercohomology(problem.fan, schedule=window.schedule, s=window.stabilize_s)
    assert result.stabilization is not None
    provenance = STABILIZED if result.stabilization.stabilized else NOT_STABILIZED
    report = CohomologyReport("stringy", parameters={"charge cutoffs": list(window.schedule)})
    for total, dim in sorted(result.hyper.items()):
        report.add(ReportEntry(0, total, dim, provenance))
    for level, j_value, dim in result.plain:
        report.notes.append(f"cech level {level} J={j_value} brst classes {dim}")
    report.notes.append(f"truncation |m|_1 over {list(window.schedule)}: {result.stabilization.verdict}")
    return report.finish()


def run_pipeline(
    problem: ProblemInstance, pipeline: Optional[str] = None, options: RunOptions = RunOptions()
) -> CohomologyReport:
    """
    Run one pipeline on a validated problem.

    Parameters
    ----------
    problem : ProblemInstance
        Validated input.
    pipeline : Optional[str], optional
        Pipeline name; the problem's own pipeline when None.
    options : RunOptions
        Worker count and fan usage.

    Returns
    -------
    CohomologyReport
        Report stamped with the problem hash and seed.

    Raises
    ------
    ConfigurationError
        If the pipeline is unknown or the problem lacks the data it needs.
    """
    if pipeline is None:
        pipeline = problem.pipeline
    window = problem.window
    fan = problem.fan if options.use_fan else None

    if pipeline == "chart":
        _require(problem, "cone", pipeline)
        assert problem.cone is not None
        report = chart_cohomology(problem.cone, window=window, workers=options.workers)

    elif pipeline == "bundle":
        _require(problem, "fan", pipeline)
        _require(problem, "deg_star", pipeline)
        assert problem.fan is not None and problem.deg_star is not None
        report = bundle_cohomology(problem.fan, problem.deg_star, window=window, workers=options.workers)

    elif pipeline in ("hypersurface", "character"):
        _require(problem, "data", pipeline)
        assert problem.data is not None
        report = hypersurface_cohomology(problem.data, fan, window, options.workers)

    elif pipeline == "master":
        _require(problem, "data", pipeline)
        assert problem.data is not None
        report = master_family_cohomology(problem.data, fan, window, options.workers)

    elif pipeline == "stringy":
        report = stringy_report(problem)

    else:
        raise ConfigurationError(
            f'Invalid pipeline "{pipeline}". Valid options are: '
            + ", ".join(f'"{p}"' for p in PIPELINES if p != "blocks")
        )

    report.problem_hash = problem.content_hash()
    report.parameters["seed"] = problem.seed
    if problem.random_coefficients:
        report.parameters["random"] = [list(record) for record in problem.random_coefficients]
    logger.info("pipeline %s on %s: %d entries", pipeline, problem.name, len(report.entries))
    return report


def list_blocks(problem: ProblemInstance) -> str:
    """
    Text listing of the certified blocks of a problem.

    Hypersurface data list the untruncated ``K x K*`` blocks per
    ``(LXA0, J0, c)``; a chart cone lists its blocks per ``(m, L, J)``.
    """
    window = problem.window
    parts: List[str] = []
    if problem.data is not None:
        data = problem.data
        region = ConeRegion(data.cone_k(), data.cone_k_star())
        low, high = window.degree_range(data.rank)
        for lxa, j_value in window.grid():
            for c in range(low, high + 1):
                block = dual_cone_block(region, lxa, j_value, degree=c)
                if len(block):
                    parts.append(format_block(block))
    elif problem.cone is not None:
        cone = problem.cone
        if cone.degree is None:
            cone = cone.with_degree(degree_vector(cone))
        for m in window.charges(cone.rank):
            for l_value, j_value in window.grid():
                block = chart_block([cone], m, l_value, j_value)
                if len(block):
                    parts.append(format_block(block))
    else:
        raise ConfigurationError(f"Problem {problem.name} has neither polytope data nor a chart cone.")
    return "".join(parts)


def mirror_check(problem: ProblemInstance, options: RunOptions = RunOptions()) -> CohomologyReport:
    """
    Hypersurface report of the mirror instance, re-graded back by the mirror gradings.

    Raises
    ------
    MathematicalFailure
        If the re-graded mirror report differs from the report of ``problem``.
    """
    plain = dataclasses.replace(problem, fan=None, heights=None)
    original = run_pipeline(plain, "hypersurface", options)
    mirrored = mirror_report(run_pipeline(problem.mirror(), "hypersurface", options))
    if original.dims() != mirrored.dims():
        raise MathematicalFailure(f"Mirror dims {mirrored.dims()} differ from {original.dims()}.")
    mirrored.notes.append("mirror dims agree with the original instance")
    return mirrored
