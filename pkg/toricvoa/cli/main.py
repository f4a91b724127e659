"""Command line interface: ``toricvoa <command> <problem> [options]``."""
import argparse
import dataclasses
import json
import logging
import os
import sys
from typing import Optional, Sequence

from toricvoa.pipelines.problem import ProblemInstance, RunOptions
from toricvoa.pipelines.report import CohomologyReport, format_entry, format_report
from toricvoa.pipelines.runner import list_blocks, run_pipeline
from toricvoa.utils.canonical import canonical_json
from toricvoa.utils.errors import CapabilityError, FinitenessError, InputError, MathematicalFailure
from toricvoa.utils.log import configure_logging

from .cache import ResultCache, cache_key
from .problem import parse
from .verify import SUITES, SuiteOptions, run_suite

logger = logging.getLogger(__name__)

COMMANDS = ("blocks", "chart", "bundle", "hypersurface", "master", "stringy", "character", "verify")

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricvoa", description="Exact BRST cohomology of lattice vertex algebras for toric data."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("target", help="problem file or bundled problem name; suite name (or 'all') for verify")
    parser.add_argument("--lmax", type=int, default=None, help="largest L (or LXA0)")
    parser.add_argument("--jmin", type=int, default=None, help="smallest J")
    parser.add_argument("--jmax", type=int, default=None, help="largest J")
    parser.add_argument("--seed", type=int, default=None, help='seed for "random" coefficients')
    parser.add_argument("--charge-bound", type=int, default=None, help="largest |m_i| of chart charges")
    parser.add_argument("--cache-dir", default=None, help="directory of the result cache")
    parser.add_argument("--stabilize-s", type=int, default=None, help="consecutive equal truncations required")
    parser.add_argument("--workers", type=int, default=1, help="worker threads")
    parser.add_argument("--no-fan", action="store_true", help="ignore the fan of the problem")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    parser.add_argument("-o", "--output", default=None, help="write the report to a file instead of stdout")
    parser.add_argument("--rank", type=int, default=1, help="rank of the dimone suite")
    parser.add_argument("--slow", action="store_true", help="include slow suites in verify")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def apply_overrides(problem: ProblemInstance, args: argparse.Namespace) -> ProblemInstance:
    """Flags take precedence over the ``window`` section of the problem file."""
    overrides = {
        "l_max": args.lmax,
        "j_min": args.jmin,
        "j_max": args.jmax,
        "stabilize_s": args.stabilize_s,
        "charge_bound": args.charge_bound,
    }
    changes = {key: value for key, value in overrides.items() if value is not None}
    if not changes:
        return problem
    return problem.with_window(dataclasses.replace(problem.window, **changes))


def write_output(text: str, path: Optional[str]) -> None:
    """Write ``text`` to stdout, or atomically to ``path``."""
    if path is None:
        sys.stdout.write(text)
        return
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
        handle.flush()
        os.fsync(handle.fileno())
    os.replace(tmp, path)
    logger.info("wrote %s", path)


def render(report: CohomologyReport, as_json: bool) -> str:
    if as_json:
        return report.to_json(sort_keys=True, indent=2, ensure_ascii=False) + "\n"  # type: ignore
    return format_report(report)


def compute_report(problem: ProblemInstance, command: str, options: RunOptions) -> CohomologyReport:
    """Run a pipeline, serving and storing the whole report through the cache when configured."""
    pipeline = "hypersurface" if command == "character" else command
    use_fan = options.use_fan and problem.fan is not None
    cache = ResultCache(options.cache_dir) if options.cache_dir else None
    key = cache_key(problem, f"{pipeline}:fan={use_fan}")
    if cache is not None:
        cached = cache.get(key)
        if cached is not None:
            return CohomologyReport.from_dict(cached)  # type: ignore
    report = run_pipeline(problem, pipeline, options)
    # Parameters go through JSON so that fresh and cached reports render alike.
    report.parameters = json.loads(canonical_json(report.parameters))
    if cache is not None:
        cache.put(key, json.loads(canonical_json(report.to_dict())))  # type: ignore
    return report


def run_verify(args: argparse.Namespace) -> int:
    options = SuiteOptions(rank=args.rank, l_max=args.lmax, charge_bound=args.charge_bound)
    results = run_suite(args.target, options, include_slow=args.slow)
    write_output("".join(result.format() for result in results), args.output)
    return EXIT_OK if all(result.passed for result in results) else EXIT_MATH


def run_command(args: argparse.Namespace) -> int:
    if args.command == "verify":
        return run_verify(args)
    problem = apply_overrides(parse(args.target, args.seed), args)
    options = RunOptions(
        workers=args.workers,
        cache_dir=args.cache_dir,
        seed=problem.seed,
        use_fan=not args.no_fan,
    )
    if args.command == "blocks":
        write_output(list_blocks(problem), args.output)
        return EXIT_OK

    report = compute_report(problem, args.command, options)
    if args.command == "character" and not args.json:
        write_output(f"character {report.character}\n", args.output)
    else:
        write_output(render(report, args.json), args.output)
    if args.command == "master" and not report.stabilized:
        sys.stderr.write("not stabilized:\n")
        for entry in report.unstabilized():
            sys.stderr.write(format_entry(entry) + "\n")
        return EXIT_MATH
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the ``toricvoa`` script.

    Returns
    -------
    int
        0 on success, 1 on a mathematical failure or failed verification,
        2 on an input, capability or file error.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    if args.command == "verify" and args.target not in list(SUITES) + ["all"]:
        parser.error(f'Invalid suite "{args.target}". Valid options are: "all", ' + ", ".join(SUITES))
    try:
        return run_command(args)
    except MathematicalFailure as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_MATH
    except (InputError, CapabilityError, FinitenessError, OSError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
