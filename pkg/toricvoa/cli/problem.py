"""Problem files: JSON documents describing a toric problem instance."""
import json
import logging
import os
import re
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from toricvoa.geometry.cone import Cone
from toricvoa.geometry.fan import Fan
from toricvoa.geometry.lattice import M, N, Coords, LatticeVector
from toricvoa.geometry.polytope import PolytopeData
from toricvoa.pipelines.problem import PIPELINES, RANDOM, ProblemInstance, WindowConfig, random_coefficients
from toricvoa.utils.errors import InputError, ProblemFileError, ValidationIssue

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")

TOP_LEVEL_KEYS = (
    "name",
    "lattice",
    "delta",
    "delta_star",
    "deg",
    "deg_star",
    "fan",
    "maximal_cones",
    "heights",
    "cone",
    "lift",
    "pipeline",
    "window",
    "seed",
)
WINDOW_KEYS = ("l_max", "j_min", "j_max", "charge_bound", "schedule", "stabilize_s", "degrees")


def bundled_problems() -> List[str]:
    """Names of the problem files shipped with the package."""
    return sorted(name[: -len(".json")] for name in os.listdir(DATA_DIR) if name.endswith(".json"))


def resolve_path(name_or_path: str) -> str:
    """A bundled problem name or a path to a problem file."""
    if os.path.exists(name_or_path):
        return name_or_path
    bundled = os.path.join(DATA_DIR, f"{name_or_path}.json")
    if os.path.exists(bundled):
        return bundled
    raise InputError(
        f'Invalid problem "{name_or_path}". Give a file path or one of: '
        + ", ".join(f'"{name}"' for name in bundled_problems())
    )


class _Reader:
    """Collects every issue of one document instead of stopping at the first."""

    def __init__(self, text: str, path: str):
        self.text = text
        self.path = path
        self.issues: List[ValidationIssue] = []

    def line_of(self, key: str) -> Optional[int]:
        match = re.search(r'"' + re.escape(key) + r'"\s*:', self.text)
        if match is None:
            return None
        return self.text.count("\n", 0, match.start()) + 1

    def issue(self, key: str, message: str) -> None:
        anchor = key.split(".")[-1].split("[")[0]
        self.issues.append(ValidationIssue(f"{self.path}:{key}", self.line_of(anchor), message))

    def integer(self, key: str, value: Any) -> Optional[int]:
        if isinstance(value, bool) or not isinstance(value, int):
            self.issue(key, f"expected an integer, got {value!r}")
            return None
        return value

    def vector(self, key: str, value: Any, rank: Optional[int]) -> Optional[Coords]:
        if not isinstance(value, list) or not value:
            self.issue(key, f"expected a list of integers, got {value!r}")
            return None
        coords = [self.integer(key, x) for x in value]
        if any(c is None for c in coords):
            return None
        if rank is not None and len(coords) != rank:
            self.issue(key, f"expected {rank} coordinates, got {len(coords)}")
            return None
        return tuple(int(c) for c in coords)  # type: ignore

    def rational(self, key: str, value: Any) -> Optional[Fraction]:
        if isinstance(value, int) and not isinstance(value, bool):
            return Fraction(value)
        if (
            isinstance(value, list)
            and len(value) == 2
            and all(isinstance(x, int) and not isinstance(x, bool) for x in value)
            and value[1] != 0
        ):
            return Fraction(value[0], value[1])
        self.issue(key, f"expected an integer or a [numerator, denominator] pair, got {value!r}")
        return None

    def unknown(self, key: str, section: Dict[str, Any], allowed: Sequence[str]) -> None:
        for name in section:
            if name not in allowed:
                self.issues.append(
                    ValidationIssue(
                        f"{self.path}:{key}{name}",
                        self.line_of(name),
                        "unknown key. Valid keys are: " + ", ".join(f'"{k}"' for k in allowed),
                    )
                )


def _points(
    reader: _Reader, key: str, entries: Any, coefficient: str, rank: Optional[int]
) -> List[Tuple[Coords, Any]]:
    if not isinstance(entries, list):
        reader.issue(key, "expected a list of {point, " + coefficient + "} objects")
        return []
    points = []
    for i, entry in enumerate(entries):
        where = f"{key}[{i}]"
        if not isinstance(entry, dict):
            reader.issue(where, "expected an object")
            continue
        reader.unknown(f"{where}.", entry, ("point", coefficient))
        point = reader.vector(where, entry.get("point"), rank)
        value = entry.get(coefficient)
        if value is None:
            reader.issue(where, f'missing "{coefficient}"; give a number, a [numerator, denominator] pair or "random"')
        elif value != RANDOM:
            value = reader.rational(where, value)
        if point is not None and value is not None:
            points.append((point, value))
    return points


def _cones(reader: _Reader, key: str, entries: Any, rank: Optional[int]) -> List[Cone]:
    if not isinstance(entries, list):
        reader.issue(key, "expected a list of cones given by generator lists")
        return []
    cones = []
    for i, generators in enumerate(entries):
        if not isinstance(generators, list) or not generators:
            reader.issue(f"{key}[{i}]", "expected a non-empty list of generators")
            continue
        vectors = [reader.vector(f"{key}[{i}]", g, rank) for g in generators]
        if all(v is not None for v in vectors):
            cones.append(Cone.from_coords(vectors, N))  # type: ignore
    return cones


def _window(reader: _Reader, section: Any) -> WindowConfig:
    if section is None:
        return WindowConfig()
    if not isinstance(section, dict):
        reader.issue("window", "expected an object")
        return WindowConfig()
    reader.unknown("window.", section, WINDOW_KEYS)
    values: Dict[str, Any] = {}
    for key in ("l_max", "j_min", "j_max", "charge_bound", "stabilize_s"):
        if key in section:
            values[key] = reader.integer(f"window.{key}", section[key])
    if "schedule" in section:
        schedule = reader.vector("window.schedule", section["schedule"], None)
        values["schedule"] = schedule
    if "degrees" in section:
        degrees = reader.vector("window.degrees", section["degrees"], 2)
        values["degrees"] = degrees
    if any(v is None for v in values.values()):
        return WindowConfig()
    try:
        return WindowConfig(**values)
    except InputError as err:
        reader.issue("window", str(err))
        return WindowConfig()


def parse_problem(text: str, path: str = "<string>", seed: Optional[int] = None) -> ProblemInstance:
    """
    Parse and validate a problem document.

    Parameters
    ----------
    text : str
        JSON document.
    path : str
        Name used in issue messages.
    seed : Optional[int]
        Overrides the document seed for ``"random"`` coefficients.

    Returns
    -------
    ProblemInstance
        A validated instance.

    Raises
    ------
    ProblemFileError
        With every structural issue found, each with its line.
    InputError
        From the geometric certificates of a well-formed document.
    """
    reader = _Reader(text, path)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ProblemFileError([ValidationIssue(path, err.lineno, err.msg)]) from err
    if not isinstance(document, dict):
        raise ProblemFileError([ValidationIssue(path, 1, "expected a JSON object")])
    reader.unknown("", document, TOP_LEVEL_KEYS)

    name = document.get("name", os.path.splitext(os.path.basename(path))[0])
    rank: Optional[int] = None
    lattice = document.get("lattice")
    if not isinstance(lattice, dict) or "rank" not in lattice:
        reader.issue("lattice", 'expected an object with a "rank"')
    else:
        reader.unknown("lattice.", lattice, ("rank",))
        rank = reader.integer("lattice.rank", lattice["rank"])

    pipeline = document.get("pipeline", "hypersurface")
    if pipeline not in PIPELINES:
        reader.issue("pipeline", "invalid pipeline. Valid options are: " + ", ".join(f'"{p}"' for p in PIPELINES))
    file_seed = reader.integer("seed", document.get("seed", 0))
    chosen_seed = seed if seed is not None else (file_seed or 0)
    window = _window(reader, document.get("window"))

    delta = _points(reader, "delta", document.get("delta", []), "f", rank)
    delta_star = _points(reader, "delta_star", document.get("delta_star", []), "g", rank)
    deg = reader.vector("deg", document["deg"], rank) if "deg" in document else None
    deg_star = reader.vector("deg_star", document["deg_star"], rank) if "deg_star" in document else None
    if (delta or delta_star) and (deg is None or deg_star is None):
        reader.issue("delta", 'polytope data needs both "deg" and "deg_star"')

    fan_cones = _cones(reader, "fan", document["fan"], rank) if "fan" in document else []
    maximal = _cones(reader, "maximal_cones", document["maximal_cones"], rank) if "maximal_cones" in document else []
    if fan_cones and maximal:
        reader.issue("maximal_cones", 'give either "fan" or "maximal_cones", not both')
    cone_list = _cones(reader, "cone", [document["cone"]], rank) if "cone" in document else []
    lift = reader.vector("lift", document["lift"], rank) if "lift" in document else None

    heights: List[Tuple[Coords, Fraction]] = []
    for i, entry in enumerate(document.get("heights", []) or []):
        if not isinstance(entry, dict):
            reader.issue(f"heights[{i}]", "expected an object")
            continue
        reader.unknown(f"heights[{i}].", entry, ("ray", "height"))
        ray = reader.vector(f"heights[{i}]", entry.get("ray"), rank)
        value = reader.rational(f"heights[{i}]", entry.get("height"))
        if ray is not None and value is not None:
            heights.append((ray, value))

    if reader.issues:
        raise ProblemFileError(reader.issues)

    rng = np.random.default_rng(chosen_seed)
    records: List[Tuple[str, Coords, int]] = []
    data = None
    if delta or delta_star:
        assert deg is not None and deg_star is not None
        f = _resolve("f", delta, rng, records)
        g = _resolve("g", delta_star, rng, records)
        data = PolytopeData(
            tuple((LatticeVector(m, M), f[m]) for m, _ in delta),
            tuple((LatticeVector(n, N), g[n]) for n, _ in delta_star),
            LatticeVector(deg, M),
            LatticeVector(deg_star, N),
        )
    fan = None
    if fan_cones:
        fan = Fan(tuple(sorted(fan_cones, key=lambda c: (len(c.generators), c.generators))))
    elif maximal:
        fan = Fan.from_maximal_cones(maximal)
    problem = ProblemInstance(
        name=name,
        rank=rank or 0,
        data=data,
        fan=fan,
        cone=cone_list[0] if cone_list else None,
        deg_star=lift,
        pipeline=pipeline,
        window=window,
        seed=chosen_seed,
        random_coefficients=tuple(records),
        heights=tuple(heights) or None,
    )
    problem.validate()
    if records:
        logger.info("drew %d random coefficients with seed %d", len(records), chosen_seed)
    return problem


def _resolve(
    label: str, points: List[Tuple[Coords, Any]], rng: np.random.Generator, records: List[Tuple[str, Coords, int]]
) -> Dict[Coords, Fraction]:
    values = {point: value for point, value in points if value != RANDOM}
    drawn, record = random_coefficients([point for point, value in points if value == RANDOM], label, rng)
    values.update(drawn)
    records.extend(record)
    return values


def parse(name_or_path: str, seed: Optional[int] = None) -> ProblemInstance:
    """
    Read and validate a problem file or a bundled problem.

    Examples
    --------
    >>> parse("p1_two_points").rank
    2
    """
    path = resolve_path(name_or_path)
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    logger.debug("parsing problem file %s", path)
    return parse_problem(text, path, seed)
