from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from toricvoa.geometry.lattice import M, N, Coords, LatticeVector

A = 0
B = 1
PHI = 2
PSI = 3

SPECIES_NAMES = ("A", "B", "Phi", "Psi")

Scalar = Union[int, Fraction]


class ModeKey(NamedTuple):
    """
    One free-field mode ``species_direction[mode]``.

    ``direction`` is zero based; the text form is one based.
    """

    species: int
    direction: int
    mode: int

    @property
    def is_fermion(self) -> bool:
        return self.species >= PHI

    @property
    def is_creation(self) -> bool:
        if self.species == PHI:
            return self.mode <= 0
        return self.mode <= -1

    @property
    def weight(self) -> int:
        return -self.mode

    def __str__(self) -> str:
        return f"{SPECIES_NAMES[self.species]}{self.direction + 1}[{self.mode}]"


def mode_order(key: ModeKey) -> Tuple[int, int, int]:
    """Canonical order: species A<B<Phi<Psi, then direction, then mode descending."""
    return key.species, key.direction, -key.mode


class FockState(NamedTuple):
    """
    Basis vector: charges ``(m, n)`` and a canonically ordered monomial of creation modes.

    Attributes
    ----------
    m : Tuple[int, ...]
        Charge in M.
    n : Tuple[int, ...]
        Charge in N.
    bosons : Tuple[ModeKey, ...]
        Multiset of A and B creation modes in canonical order.
    fermions : Tuple[ModeKey, ...]
        Strictly ordered Phi and Psi creation modes.
    """

    m: Coords
    n: Coords
    bosons: Tuple[ModeKey, ...] = ()
    fermions: Tuple[ModeKey, ...] = ()

    @property
    def m_charge(self) -> LatticeVector:
        return LatticeVector(self.m, M)

    @property
    def n_charge(self) -> LatticeVector:
        return LatticeVector(self.n, N)

    @property
    def rank(self) -> int:
        return len(self.m)

    def sort_key(self) -> Tuple[Coords, Coords, Tuple[Tuple[int, int, int], ...], Tuple[Tuple[int, int, int], ...]]:
        return self.m, self.n, tuple(mode_order(k) for k in self.bosons), tuple(mode_order(k) for k in self.fermions)

    def __str__(self) -> str:
        charges = "|" + ",".join(map(str, self.m)) + ";" + ",".join(map(str, self.n)) + ">"
        modes = [str(k) for k in self.bosons + self.fermions]
        return " ".join(modes + [charges])


def vacuum(m: Sequence[int], n: Sequence[int]) -> FockState:
    return FockState(tuple(m), tuple(n))


def _insert_boson(bosons: Tuple[ModeKey, ...], key: ModeKey) -> Tuple[ModeKey, ...]:
    order = mode_order(key)
    for position, existing in enumerate(bosons):
        if mode_order(existing) > order:
            return bosons[:position] + (key,) + bosons[position:]
    return bosons + (key,)


def _remove_one(bosons: Tuple[ModeKey, ...], key: ModeKey) -> Tuple[int, Tuple[ModeKey, ...]]:
    count = bosons.count(key)
    if not count:
        return 0, bosons
    position = bosons.index(key)
    return count, bosons[:position] + bosons[position + 1 :]


def apply_mode(key: ModeKey, state: FockState) -> Optional[Tuple[int, FockState]]:
    """
    Act with a single mode on a basis state.

    Returns
    -------
    Optional[Tuple[int, FockState]]
        The integer coefficient and resulting basis state, or None if the result is zero.
    """
    species, direction, mode = key
    if species == A or species == B:
        if mode < 0:
            return 1, state._replace(bosons=_insert_boson(state.bosons, key))
        if mode == 0:
            value = state.m[direction] if species == A else state.n[direction]
            return (value, state) if value else None
        partner = ModeKey(B if species == A else A, direction, -mode)
        count, rest = _remove_one(state.bosons, partner)
        if not count:
            return None
        return mode * count, state._replace(bosons=rest)
    if key.is_creation:
        if key in state.fermions:
            return None
        order = mode_order(key)
        position = 0
        while position < len(state.fermions) and mode_order(state.fermions[position]) < order:
            position += 1
        fermions = state.fermions[:position] + (key,) + state.fermions[position:]
        return (-1 if position % 2 else 1), state._replace(fermions=fermions)
    partner = ModeKey(PSI if species == PHI else PHI, direction, -mode)
    if partner not in state.fermions:
        return None
    position = state.fermions.index(partner)
    fermions = state.fermions[:position] + state.fermions[position + 1 :]
    return (-1 if position % 2 else 1), state._replace(fermions=fermions)


class StateVector:
    """
    Sparse exact linear combination of Fock basis states.

    Parameters
    ----------
    terms : Optional[Dict[FockState, Scalar]]
        Initial coefficients; zero coefficients are dropped.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[FockState, Scalar]] = None):
        self._terms: Dict[FockState, Fraction] = {}
        if terms:
            for state, coefficient in terms.items():
                self.add_term(state, coefficient)

    @classmethod
    def basis(cls, state: FockState) -> "StateVector":
        return cls({state: 1})

    def add_term(self, state: FockState, coefficient: Scalar) -> None:
        if not coefficient:
            return
        value = self._terms.get(state, 0) + Fraction(coefficient)
        if value:
            self._terms[state] = value
        else:
            self._terms.pop(state, None)

    def add(self, other: "StateVector", factor: Scalar = 1) -> None:
        if not factor:
            return
        for state, coefficient in other._terms.items():
            self.add_term(state, coefficient * factor)

    def __add__(self, other: "StateVector") -> "StateVector":
        result = self.copy()
        result.add(other)
        return result

    def __sub__(self, other: "StateVector") -> "StateVector":
        result = self.copy()
        result.add(other, -1)
        return result

    def scaled(self, factor: Scalar) -> "StateVector":
        result = StateVector()
        if factor:
            result._terms = {s: c * factor for s, c in self._terms.items()}
        return result

    def copy(self) -> "StateVector":
        result = StateVector()
        result._terms = dict(self._terms)
        return result

    def coefficient(self, state: FockState) -> Fraction:
        return self._terms.get(state, Fraction(0))

    def items(self) -> List[Tuple[FockState, Fraction]]:
        """Terms in canonical basis order."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def states(self) -> Iterable[FockState]:
        return self._terms.keys()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[FockState]:
        return iter(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{s}" for s, c in self.items())


def normal_form(raw: Sequence[ModeKey], base: FockState) -> StateVector:
    """
    Normal-ordered result of applying ``raw`` (rightmost first) to ``base``.

    Examples
    --------
    >>> normal_form([ModeKey(B, 0, 1), ModeKey(A, 0, -1)], vacuum((0,), (0,)))
    (1)*|0;0>
    """
    current: List[Tuple[Fraction, FockState]] = [(Fraction(1), base)]
    for key in reversed(raw):
        step = []
        for coefficient, state in current:
            image = apply_mode(key, state)
            if image is not None:
                step.append((coefficient * image[0], image[1]))
        current = step
        if not current:
            break
    result = StateVector()
    for coefficient, state in current:
        result.add_term(state, coefficient)
    return result


def apply_free_mode(species: int, mode: int, coefficients: Sequence[Scalar], v: StateVector) -> StateVector:
    """
    Apply ``sum_i coefficients[i] * species_i[mode]`` to ``v``.
    """
    result = StateVector()
    for direction, factor in enumerate(coefficients):
        if not factor:
            continue
        key = ModeKey(species, direction, mode)
        for state, coefficient in v._terms.items():
            image = apply_mode(key, state)
            if image is not None:
                result.add_term(image[1], coefficient * factor * image[0])
    return result
