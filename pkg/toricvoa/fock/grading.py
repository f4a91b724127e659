import dataclasses
from typing import Optional, Tuple

from toricvoa.geometry.lattice import Coords, dot
from toricvoa.utils.errors import ConfigurationError

from .state import PHI, FockState


@dataclasses.dataclass(frozen=True)
class GradingConfig:
    """
    Degree vectors used by the J and L_X gradings.

    Parameters
    ----------
    deg : Optional[Tuple[int, ...]]
        Degree vector in M (``deg_C`` for a chart).
    deg_star : Optional[Tuple[int, ...]]
        Degree vector in N; zero for chart computations.
    """

    deg: Optional[Coords] = None
    deg_star: Optional[Coords] = None

    def require_deg(self) -> Coords:
        if self.deg is None:
            raise ConfigurationError("This grading needs the degree vector deg to be configured.")
        return self.deg

    def require_deg_star(self) -> Coords:
        if self.deg_star is None:
            raise ConfigurationError("This grading needs the degree vector deg_star to be configured.")
        return self.deg_star

    def mirror(self) -> "GradingConfig":
        return GradingConfig(self.deg_star, self.deg)


def oscillator_weight(state: FockState) -> int:
    return sum(-k.mode for k in state.bosons) + sum(-k.mode for k in state.fermions)


def fermion_counts(state: FockState) -> Tuple[int, int]:
    """Numbers of Phi and Psi modes."""
    phi = sum(1 for k in state.fermions if k.species == PHI)
    return phi, len(state.fermions) - phi


def fermion_number(state: FockState) -> int:
    phi, psi = fermion_counts(state)
    return phi - psi


def L0(state: FockState) -> int:
    """``m . n`` plus the oscillator weight."""
    return dot(state.m, state.n) + oscillator_weight(state)


def J0(state: FockState, config: GradingConfig) -> int:
    """``(#Phi - #Psi) + deg . n - deg_star . m``."""
    return fermion_number(state) + dot(config.require_deg(), state.n) - dot(config.require_deg_star(), state.m)


def LXA0(state: FockState, config: GradingConfig) -> int:
    return L0(state) + dot(config.require_deg_star(), state.m)


def LXB0(state: FockState, config: GradingConfig) -> int:
    # zero mode of L_XA - dJ, i.e. LXA0 + J0
    return L0(state) + fermion_number(state) + dot(config.require_deg(), state.n)


def cohomological_degree(state: FockState, config: GradingConfig) -> int:
    """``deg . n + deg_star . m``; raised by one by every BRST summand."""
    return dot(config.require_deg(), state.n) + dot(config.require_deg_star(), state.m)
