"""Evaluation metrics as valuations on run lattices.

Built-ins: generalized precision and recall (both modes), graded rank-biased
precision and discounted cumulated gain (rank-based). A metric that satisfies
the valuation identity v(x) + v(y) = v(x v y) + v(x ^ y) on a distributive
lattice is determined by its values on the join-irreducible elements, which is
what ``reconstruct`` and ``extend_custom`` exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .domain import JudgedRun, Mode, RelevanceScale
from .errors import (
    IncompleteAssignment,
    InconsistentAssignment,
    MissingParam,
    ModeMismatch,
    NotAValuation,
    NotDistributive,
)
from .lattice import RunLattice, check_distributive, maximal_irreducibles_below

VALUATION_TOLERANCE = 1e-9


class MetricKind(str, Enum):
    GP = "gp"
    GR = "gr"
    GRBP = "grbp"
    DCG = "dcg"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MetricSpec:
    """A metric choice plus its parameters.

    ``rb`` defaults to the run length when left unset. Custom metrics carry
    their values on join-irreducible element indices plus a bottom value and
    are only meaningful relative to one lattice.
    """

    kind: MetricKind
    rb: float | None = None
    p: float | None = None
    b: float | None = None
    custom_values: tuple[tuple[int, float], ...] | None = None
    bottom_value: float | None = None

    @staticmethod
    def gp() -> "MetricSpec":
        return MetricSpec(MetricKind.GP)

    @staticmethod
    def gr(rb: float | None = None) -> "MetricSpec":
        if rb is not None and rb <= 0:
            raise MissingParam(f"recall base must be positive, got {rb}")
        return MetricSpec(MetricKind.GR, rb=rb)

    @staticmethod
    def grbp(p: float) -> "MetricSpec":
        if p is None:
            raise MissingParam("grbp needs a persistence parameter p")
        if not 0 < p < 1:
            raise MissingParam(f"grbp needs 0 < p < 1, got {p}")
        return MetricSpec(MetricKind.GRBP, p=float(p))

    @staticmethod
    def dcg(b: float) -> "MetricSpec":
        if b is None:
            raise MissingParam("dcg needs a logarithm base b")
        if not b > 1:
            raise MissingParam(f"dcg needs b > 1, got {b}")
        return MetricSpec(MetricKind.DCG, b=float(b))

    @staticmethod
    def custom(values: dict[int, float], bottom_value: float) -> "MetricSpec":
        items = tuple(sorted((int(k), float(v)) for k, v in values.items()))
        return MetricSpec(MetricKind.CUSTOM, custom_values=items,
                          bottom_value=float(bottom_value))

    def label(self) -> str:
        if self.kind is MetricKind.GR and self.rb is not None:
            return f"gr(rb={self.rb:g})"
        if self.kind is MetricKind.GRBP:
            return f"grbp(p={self.p:g})"
        if self.kind is MetricKind.DCG:
            return f"dcg(b={self.b:g})"
        return self.kind.value


def eval_metric(spec: MetricSpec, run: JudgedRun, scale: RelevanceScale) -> float:
    """Direct evaluation of a built-in metric on one run."""
    gains = scale.gains
    top_gain = scale.max_gain
    if spec.kind is MetricKind.GP:
        return sum(gains[d] for d in run.degrees) / (top_gain * run.length)
    if spec.kind is MetricKind.GR:
        rb = spec.rb if spec.rb is not None else float(run.length)
        return sum(gains[d] for d in run.degrees) / (top_gain * rb)
    if spec.kind is MetricKind.CUSTOM:
        raise MissingParam(
            "custom metrics are defined by their values on join-irreducibles; "
            "evaluate them through reconstruct, extend_custom, or metric_table"
        )
    if run.mode is not Mode.RANK:
        raise ModeMismatch(f"{spec.kind.value} needs a rank-based run")
    if spec.kind is MetricKind.GRBP:
        if spec.p is None:
            raise MissingParam("grbp needs a persistence parameter p")
        total = sum(spec.p ** i * gains[d] for i, d in enumerate(run.degrees))
        return (1.0 - spec.p) / top_gain * total
    if spec.b is None:
        raise MissingParam("dcg needs a logarithm base b")
    log_b = math.log(spec.b)
    return sum(gains[d] / max(1.0, math.log(i) / log_b)
               for i, d in enumerate(run.degrees, start=1))


@dataclass(frozen=True)
class ValuationReport:
    """Result of checking v(x) + v(y) = v(x v y) + v(x ^ y) over all pairs."""

    is_valuation: bool
    max_error: float
    counterexample: tuple[int, int] | None = None
    values: tuple[float, float, float, float] | None = None


def _valuation_scan(values: np.ndarray, meet: np.ndarray, join: np.ndarray,
                    tolerance: float = VALUATION_TOLERANCE):
    error = np.abs(values[:, None] + values[None, :]
                   - values[join] - values[meet])
    worst = float(error.max())
    if worst <= tolerance:
        return worst, None
    x, y = (int(v) for v in np.argwhere(error == error.max())[0])
    return worst, (x, y)


def lattice_values(spec: MetricSpec, lattice: RunLattice) -> np.ndarray:
    """Metric values over all elements, in canonical element order."""
    key = ("values", spec)
    cached = lattice._cache.get(key)
    if cached is None:
        if spec.kind is MetricKind.CUSTOM:
            cached = np.array([reconstruct(spec, lattice, i)
                               for i in range(lattice.size)])
        else:
            scale = lattice.universe.scale
            cached = np.array([eval_metric(spec, run, scale)
                               for run in lattice.universe.elements])
        lattice._cache[key] = cached
    return cached


def check_valuation(spec: MetricSpec, lattice: RunLattice,
                    tolerance: float = VALUATION_TOLERANCE) -> ValuationReport:
    """Exhaustive pairwise check of the valuation identity on this lattice."""
    key = ("valuation", spec, tolerance)
    cached = lattice._cache.get(key)
    if cached is not None:
        return cached
    values = lattice_values(spec, lattice)
    worst, pair = _valuation_scan(values, lattice.meet, lattice.join, tolerance)
    if pair is None:
        report = ValuationReport(True, worst)
    else:
        x, y = pair
        quad = (float(values[x]), float(values[y]),
                float(values[lattice.join[x, y]]), float(values[lattice.meet[x, y]]))
        report = ValuationReport(False, worst, pair, quad)
    lattice._cache[key] = report
    return report


def _irreducible_values(spec: MetricSpec, lattice: RunLattice) -> tuple[dict, float]:
    """Values on join-irreducibles plus the bottom value, the only inputs reconstruction may use."""
    if spec.kind is MetricKind.CUSTOM:
        assigned = dict(spec.custom_values or ())
        missing = [i for i in lattice.irreducibles if i not in assigned]
        if missing:
            names = ", ".join(lattice.run(i).literal() for i in missing)
            raise IncompleteAssignment(f"missing values for join-irreducibles: {names}")
        extra = [i for i in assigned if i not in set(lattice.irreducibles)]
        if extra:
            names = ", ".join(lattice.run(i).literal() for i in extra)
            raise ValueError(f"values assigned to non-irreducible elements: {names}")
        if spec.bottom_value is None:
            raise MissingParam("custom metrics need a bottom value")
        return assigned, float(spec.bottom_value)
    scale = lattice.universe.scale
    assigned = {i: eval_metric(spec, lattice.run(i), scale) for i in lattice.irreducibles}
    return assigned, eval_metric(spec, lattice.run(lattice.bottom), scale)


def reconstruct(spec: MetricSpec, lattice: RunLattice, element) -> float:
    """Value of ``element`` computed only from values on join-irreducibles.

    Folds the decomposition with v(a v j) = v(a) + v(j) - v(a ^ j); on a
    distributive lattice every meet along the way reduces to smaller elements,
    so the recursion bottoms out at assigned values. Built-in metrics must
    pass the valuation check first.
    """
    report = check_distributive(lattice)
    if not report.distributive:
        raise NotDistributive(
            "reconstruction from join-irreducibles needs a distributive lattice"
        )
    if spec.kind is not MetricKind.CUSTOM:
        valuation = check_valuation(spec, lattice)
        if not valuation.is_valuation:
            raise NotAValuation(
                f"{spec.label()} violates the valuation identity "
                f"(max error {valuation.max_error:.3g})"
            )
    key = ("reconstruct", spec)
    memo = lattice._cache.get(key)
    if memo is None:
        assigned, bottom_value = _irreducible_values(spec, lattice)
        memo = dict(assigned)
        memo[lattice.bottom] = bottom_value
        lattice._cache[key] = memo

    if isinstance(element, JudgedRun):
        element = lattice.index_of(element)
    element = int(element)

    join_table = lattice.join
    meet_table = lattice.meet

    def value(e: int) -> float:
        known = memo.get(e)
        if known is not None:
            return known
        parts = maximal_irreducibles_below(lattice, e)
        acc_index = parts[0]
        acc_value = value(parts[0])
        for j in parts[1:]:
            acc_value = acc_value + value(j) - value(int(meet_table[acc_index, j]))
            acc_index = int(join_table[acc_index, j])
        if acc_index != e:
            raise RuntimeError("decomposition parts do not join back to the element")
        memo[e] = acc_value
        return acc_value

    return value(element)


@dataclass(frozen=True)
class CustomExtension:
    """A custom assignment extended to the whole lattice."""

    values: tuple[float, ...]
    is_valuation: bool
    monotone: bool
    monotonicity_witness: tuple[int, int] | None = None


def extend_custom(lattice: RunLattice, custom_values, bottom_value: float) -> CustomExtension:
    """Extend values on the join-irreducibles to a valuation on every element.

    ``custom_values`` maps irreducible elements (runs or indices) to reals.
    The extension is verified to satisfy the valuation identity and reported
    for monotonicity with respect to the lattice order.
    """
    report = check_distributive(lattice)
    if not report.distributive:
        raise NotDistributive("custom metrics need a distributive lattice")
    resolved = {}
    for key, val in dict(custom_values).items():
        index = lattice.index_of(key) if isinstance(key, JudgedRun) else int(key)
        resolved[index] = float(val)
    spec = MetricSpec.custom(resolved, bottom_value)
    values = np.array([reconstruct(spec, lattice, i) for i in range(lattice.size)])

    worst, pair = _valuation_scan(values, lattice.meet, lattice.join)
    if pair is not None:
        x, y = pair
        raise InconsistentAssignment(
            f"extension violates the valuation identity at "
            f"{lattice.run(x).literal()} / {lattice.run(y).literal()} "
            f"(error {worst:.3g})"
        )

    gap = (values[:, None] - values[None, :]) * lattice.leq
    violations = np.argwhere(gap > VALUATION_TOLERANCE)
    if violations.size:
        lo, hi = (int(v) for v in violations[0])
        return CustomExtension(tuple(float(v) for v in values), True, False, (lo, hi))
    return CustomExtension(tuple(float(v) for v in values), True, True)


def metric_table(spec: MetricSpec, lattice: RunLattice):
    """All (run, value) rows in canonical element order."""
    values = lattice_values(spec, lattice)
    return tuple((run, float(v))
                 for run, v in zip(lattice.universe.elements, values))
