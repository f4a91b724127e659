"""Problem instances and run parameters."""
import dataclasses
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from toricvoa.geometry.cone import Cone
from toricvoa.geometry.fan import Fan, validate_fan, validate_height_function
from toricvoa.geometry.lattice import Coords, LatticeVector
from toricvoa.geometry.polytope import PolytopeData, validate_reflexive
from toricvoa.utils.canonical import CONVENTION_VERSION, content_hash
from toricvoa.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

PIPELINES = ("blocks", "chart", "bundle", "hypersurface", "master", "stringy", "character")

RANDOM = "random"


@dataclasses.dataclass(frozen=True)
class WindowConfig:
    """
    Graded window of a computation.

    Parameters
    ----------
    l_max : int
        Largest L (or LXA0).
    j_min, j_max : int
        Range of J.
    charge_bound : int
        Largest ``|m_i|`` for chart-level charges.
    schedule : Tuple[int, ...]
        Truncation cutoffs for stabilized quantities.
    stabilize_s : int
        Consecutive equal values required.
    degrees : Optional[Tuple[int, int]]
        Range of the cohomological degree summed in hypersurface reports;
        ``(0, rank - 2)`` when unset.
    """

    l_max: int = 1
    j_min: int = -1
    j_max: int = 1
    charge_bound: int = 1
    schedule: Tuple[int, ...] = (1, 2, 3)
    stabilize_s: int = 2
    degrees: Optional[Tuple[int, int]] = None

    def __post_init__(self) -> None:
        if self.l_max < 0:
            raise ConfigurationError(f"Invalid l_max {self.l_max}. Valid values are non-negative integers.")
        if self.j_min > self.j_max:
            raise ConfigurationError(f"Invalid J range [{self.j_min}, {self.j_max}].")
        if self.stabilize_s < 1:
            raise ConfigurationError(f"Invalid stabilize_s {self.stabilize_s}. Valid values are positive integers.")
        if not self.schedule or list(self.schedule) != sorted(set(self.schedule)):
            raise ConfigurationError(
                f"Invalid schedule {list(self.schedule)}. Valid schedules are strictly increasing."
            )

    def grid(self) -> List[Tuple[int, int]]:
        return [(l, j) for l in range(0, self.l_max + 1) for j in range(self.j_min, self.j_max + 1)]

    def charges(self, rank: int) -> List[Coords]:
        span = np.arange(-self.charge_bound, self.charge_bound + 1)
        mesh = np.array(np.meshgrid(*([span] * rank), indexing="ij")).reshape(rank, -1).T
        return sorted(tuple(int(c) for c in row) for row in mesh)

    def degree_range(self, rank: int) -> Tuple[int, int]:
        return self.degrees if self.degrees is not None else (0, rank - 2)


@dataclasses.dataclass(frozen=True)
class RunOptions:
    """
    Execution parameters that never change results.

    Parameters
    ----------
    workers : int
        Threads used for matrix assembly and block fan-out.
    cache_dir : Optional[str]
        Directory of the result cache.
    seed : int
        Seed for ``"random"`` coefficients.
    use_fan : bool
        Use the fan degeneration when the problem has a fan.
    """

    workers: int = 1
    cache_dir: Optional[str] = None
    seed: int = 0
    use_fan: bool = True

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ConfigurationError(f"Invalid workers {self.workers}. Valid values are positive integers.")


@dataclasses.dataclass(frozen=True)
class ProblemInstance:
    """
    Validated input of every pipeline.

    Parameters
    ----------
    name : str
        Problem name.
    rank : int
        Rank of M and N.
    data : Optional[PolytopeData]
        Dual reflexive data with resolved coefficients.
    fan : Optional[Fan]
        Fan in N; a subdivision of K* for hypersurfaces, a complete fan for
        string cohomology, the lifted fan for bundles.
    cone : Optional[Cone]
        Chart cone in N for chart computations.
    deg_star : Optional[Tuple[int, ...]]
        The lifting direction in N for bundle computations.
    pipeline : str
        Default pipeline.
    window : WindowConfig
        Graded window.
    seed : int
        Seed used to resolve ``"random"`` coefficients.
    random_coefficients : Tuple[Tuple[str, Tuple[int, ...], int], ...]
        Record of every coefficient drawn from the seed.
    heights : Optional[Tuple[Tuple[Tuple[int, ...], Fraction], ...]]
        Height function on the fan rays.
    """

    name: str
    rank: int
    data: Optional[PolytopeData] = None
    fan: Optional[Fan] = None
    cone: Optional[Cone] = None
    deg_star: Optional[Coords] = None
    pipeline: str = "hypersurface"
    window: WindowConfig = WindowConfig()
    seed: int = 0
    random_coefficients: Tuple[Tuple[str, Coords, int], ...] = ()
    heights: Optional[Tuple[Tuple[Coords, Fraction], ...]] = None

    def validate(self) -> None:
        """
        Run the geometric certificates for every present component.

        Raises
        ------
        InputError
            From the failing certificate.
        """
        if self.pipeline not in PIPELINES:
            raise ConfigurationError(
                f'Invalid pipeline "{self.pipeline}". Valid options are: ' + ", ".join(f'"{p}"' for p in PIPELINES)
            )
        if self.data is not None:
            validate_reflexive(self.data)
        if self.fan is not None:
            validate_fan(self.fan)
            if self.heights is not None:
                validate_height_function(
                    self.fan, {LatticeVector(r, self.fan.side): h for r, h in self.heights}
                )
        logger.debug("validated problem %s", self.name)

    def canonical(self) -> Dict[str, Any]:
        """Order-independent description used for hashing."""
        payload: Dict[str, Any] = {"name": self.name, "rank": self.rank, "pipeline": self.pipeline}
        if self.data is not None:
            payload["delta"] = sorted([list(m), c] for m, c in self.data.f.items())
            payload["delta_star"] = sorted([list(n), c] for n, c in self.data.g.items())
            payload["deg"] = list(self.data.deg.coords)
            payload["deg_star"] = list(self.data.deg_star.coords)
        if self.fan is not None:
            payload["fan"] = sorted(sorted(list(g.coords) for g in c.generators) for c in self.fan.maximal_cones)
        if self.cone is not None:
            payload["cone"] = sorted(list(g.coords) for g in self.cone.generators)
        if self.deg_star is not None:
            payload["lift"] = list(self.deg_star)
        if self.heights is not None:
            payload["heights"] = sorted([list(r), h] for r, h in self.heights)
        payload["window"] = dataclasses.asdict(self.window)
        payload["seed"] = self.seed
        payload["conventions"] = CONVENTION_VERSION
        return payload

    def content_hash(self) -> str:
        return content_hash(self.canonical())

    def with_window(self, window: WindowConfig) -> "ProblemInstance":
        return dataclasses.replace(self, window=window)

    def mirror(self) -> "ProblemInstance":
        """Exchange M and N, Delta and Delta*, f and g; the fan is dropped."""
        if self.data is None:
            raise ConfigurationError(f"Problem {self.name} has no polytope data to mirror.")
        return dataclasses.replace(self, name=f"{self.name}-mirror", data=self.data.mirror(), fan=None, heights=None)


def random_coefficients(
    keys: List[Coords], label: str, rng: np.random.Generator, low: int = 1, high: int = 9
) -> Tuple[Dict[Coords, Fraction], List[Tuple[str, Coords, int]]]:
    """Draw non-zero small integers for ``keys`` in order; returns values and their record."""
    values: Dict[Coords, Fraction] = {}
    record = []
    for key in keys:
        value = int(rng.integers(low, high + 1))
        values[key] = Fraction(value)
        record.append((label, key, value))
    return values, record
