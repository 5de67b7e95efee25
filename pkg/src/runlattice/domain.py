"""Relevance scales, judged runs, and run universes.

A judged run is an abstract sequence (rank-based) or multiset (set-based) of
integer degree indices drawn from the totally ordered degree set {0, ..., c},
where 0 means non-relevant. Gains attach numeric weight to degrees; everything
structural works on the indices alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from math import comb

from .errors import (
    DegreeOutOfRange,
    EmptyRun,
    InvalidDegreeCount,
    NonIncreasingGains,
    NonzeroGainAtBottom,
    PrefixOnSetBased,
    UniverseTooLarge,
)

DEFAULT_UNIVERSE_CAP = 100_000


class Mode(str, Enum):
    """How a run's degrees are read: as a multiset or as a ranked sequence."""

    SET = "set"
    RANK = "rank"


@dataclass(frozen=True)
class RelevanceScale:
    """Degree indices 0..c with a strictly increasing gain, zero at the bottom.

    Invariants are enforced at construction: ``gains`` has c+1 entries,
    ``gains[0] == 0`` and ``gains[i] < gains[i+1]``.
    """

    c: int
    gains: tuple[float, ...]

    def __post_init__(self):
        if self.c < 1:
            raise InvalidDegreeCount(f"need c >= 1, got c={self.c}")
        gains = tuple(float(g) for g in self.gains)
        object.__setattr__(self, "gains", gains)
        if len(gains) != self.c + 1:
            raise InvalidDegreeCount(
                f"expected {self.c + 1} gain values for c={self.c}, got {len(gains)}"
            )
        if gains[0] != 0.0:
            raise NonzeroGainAtBottom(f"gain of the lowest degree must be 0, got {gains[0]}")
        for i in range(self.c):
            if gains[i] >= gains[i + 1]:
                raise NonIncreasingGains(
                    f"gains must be strictly increasing, but gains[{i}]={gains[i]} "
                    f">= gains[{i + 1}]={gains[i + 1]}"
                )

    @property
    def max_gain(self) -> float:
        return self.gains[-1]


def make_scale(c: int, gains=None) -> RelevanceScale:
    """Build a scale; when ``gains`` is omitted, default to the linear gain g(i) = i."""
    if gains is None:
        if c < 1:
            raise InvalidDegreeCount(f"need c >= 1, got c={c}")
        gains = tuple(float(i) for i in range(c + 1))
    return RelevanceScale(c, tuple(gains))


@dataclass(frozen=True)
class JudgedRun:
    """A run of judged documents, reduced to its degree indices.

    Set-based runs canonicalize to non-increasing degree order at construction,
    so multiset equality is plain structural equality. Rank-based runs keep
    their positional order.
    """

    mode: Mode
    degrees: tuple[int, ...]

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        if not degrees:
            raise EmptyRun("a judged run needs at least one degree")
        if self.mode is Mode.SET:
            degrees = tuple(sorted(degrees, reverse=True))
        object.__setattr__(self, "degrees", degrees)

    @property
    def length(self) -> int:
        return len(self.degrees)

    def literal(self) -> str:
        """Comma-separated degree indices, e.g. ``"2,1,0"``."""
        return ",".join(str(d) for d in self.degrees)

    def __str__(self):
        return self.literal()


def parse_run_literal(text: str) -> tuple[int, ...]:
    """Parse ``"2,1,0"`` into the degree tuple (2, 1, 0)."""
    parts = [p.strip() for p in text.split(",")]
    if parts == [""]:
        raise EmptyRun("empty run literal")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"bad run literal {text!r}: expected comma-separated integers") from None


def make_run(mode: Mode, degrees, scale: RelevanceScale) -> JudgedRun:
    """Validate degrees against ``scale`` and return the canonical run."""
    mode = Mode(mode)
    degrees = tuple(int(d) for d in degrees)
    if not degrees:
        raise EmptyRun("a judged run needs at least one degree")
    for d in degrees:
        if not 0 <= d <= scale.c:
            raise DegreeOutOfRange(f"degree {d} outside [0, {scale.c}]")
    return JudgedRun(mode, degrees)


def cumulated_mass(run: JudgedRun, degree: int, prefix: int | None = None,
                   scale: RelevanceScale | None = None) -> int:
    """Number of documents judged at or above ``degree``.

    With ``prefix=k`` (rank-based only) the count is restricted to the first
    k positions.
    """
    if degree < 0 or (scale is not None and degree > scale.c):
        upper = scale.c if scale is not None else "c"
        raise DegreeOutOfRange(f"degree {degree} outside [0, {upper}]")
    if prefix is None:
        return sum(1 for d in run.degrees if d >= degree)
    if run.mode is not Mode.RANK:
        raise PrefixOnSetBased("prefix cutoffs only apply to rank-based runs")
    if not 1 <= prefix <= run.length:
        raise ValueError(f"prefix {prefix} outside [1, {run.length}]")
    return sum(1 for d in run.degrees[:prefix] if d >= degree)


@dataclass(frozen=True)
class RunUniverse:
    """All distinct runs of one length and mode, in canonical (lexicographic) order."""

    scale: RelevanceScale
    length: int
    mode: Mode
    elements: tuple[JudgedRun, ...]
    _index: dict = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, run: JudgedRun) -> int:
        """Position of ``run`` in the canonical order."""
        try:
            return self._index[run.degrees]
        except KeyError:
            raise ValueError(f"run {run.literal()} is not in this universe") from None


def universe_size(scale: RelevanceScale, n: int, mode: Mode) -> int:
    """Closed-form element count: (c+1)^n rank-based, C(n+c, c) set-based."""
    if Mode(mode) is Mode.RANK:
        return (scale.c + 1) ** n
    return comb(n + scale.c, scale.c)


def enumerate_universe(scale: RelevanceScale, n: int, mode: Mode,
                       cap: int = DEFAULT_UNIVERSE_CAP) -> RunUniverse:
    """Materialize R(n) for the given mode, refusing universes above ``cap`` elements."""
    mode = Mode(mode)
    if n < 1:
        raise EmptyRun(f"run length must be at least 1, got {n}")
    count = universe_size(scale, n, mode)
    if count > cap:
        raise UniverseTooLarge(f"universe has {count} elements, above the cap of {cap}")
    if mode is Mode.RANK:
        tuples = list(itertools.product(range(scale.c + 1), repeat=n))
    else:
        canon = {tuple(sorted(t, reverse=True))
                 for t in itertools.combinations_with_replacement(range(scale.c + 1), n)}
        tuples = sorted(canon)
    elements = tuple(JudgedRun(mode, t) for t in tuples)
    assert len(elements) == count
    index = {run.degrees: i for i, run in enumerate(elements)}
    return RunUniverse(scale, n, mode, elements, index)
