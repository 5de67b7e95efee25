"""The five admissible orderings on a run universe, as comparison predicates.

Two are chains (resolve the most relevant difference first), three are
dominance partial orders. Set-based dominance compares cumulated relevance
masses per degree; rank-based dominance compares degrees per position; the
swap-compatible order compares cumulated masses on every rank prefix.

No structural property is assumed here: posets are verified exhaustively by
``verify_poset_axioms`` and totality by ``is_total``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .domain import JudgedRun, Mode, RunUniverse, RelevanceScale
from .errors import LengthMismatch, ModeMismatch


class OrderingKind(str, Enum):
    PROJ_REPL_SET = "proj-repl-set"
    REPL_SET = "repl-set"
    PROJ_REPL_RANK = "proj-repl-rank"
    REPL_RANK = "repl-rank"
    REPL_SWAP_RANK = "repl-swap-rank"

    @property
    def mode(self) -> Mode:
        if self in (OrderingKind.PROJ_REPL_SET, OrderingKind.REPL_SET):
            return Mode.SET
        return Mode.RANK


CHAIN_KINDS = (OrderingKind.PROJ_REPL_SET, OrderingKind.PROJ_REPL_RANK)
CLOSED_FORM_KINDS = CHAIN_KINDS + (OrderingKind.REPL_SET, OrderingKind.REPL_RANK)


class CompareResult(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def _degree_counts(run: JudgedRun, c: int) -> list[int]:
    counts = [0] * (c + 1)
    for d in run.degrees:
        counts[d] += 1
    return counts


def _check_pair(kind: OrderingKind, r: JudgedRun, s: JudgedRun):
    if r.mode is not kind.mode or s.mode is not kind.mode:
        raise ModeMismatch(
            f"ordering {kind.value} needs {kind.mode.value}-based runs, "
            f"got {r.mode.value} and {s.mode.value}"
        )
    if r.length != s.length:
        raise LengthMismatch(f"run lengths differ: {r.length} vs {s.length}")


def precedes(kind: OrderingKind, r: JudgedRun, s: JudgedRun, scale: RelevanceScale) -> bool:
    """The raw order predicate: True iff r is below or equal to s under ``kind``."""
    _check_pair(kind, r, s)
    c = scale.c

    if kind is OrderingKind.REPL_SET:
        # Dominance of cumulated masses for every degree threshold.
        cr = _degree_counts(r, c)
        cs = _degree_counts(s, c)
        mass_r = mass_s = 0
        for j in range(c, -1, -1):
            mass_r += cr[j]
            mass_s += cs[j]
            if mass_r > mass_s:
                return False
        return True

    if kind is OrderingKind.PROJ_REPL_SET:
        # Decide at the highest degree whose count differs.
        cr = _degree_counts(r, c)
        cs = _degree_counts(s, c)
        for j in range(c, -1, -1):
            if cr[j] != cs[j]:
                return cr[j] < cs[j]
        return True

    if kind is OrderingKind.REPL_RANK:
        return all(a <= b for a, b in zip(r.degrees, s.degrees))

    if kind is OrderingKind.PROJ_REPL_RANK:
        # Decide at the first position where the runs differ.
        for a, b in zip(r.degrees, s.degrees):
            if a != b:
                return a < b
        return True

    # Swap-compatible order: mass dominance on every prefix, for every
    # threshold degree (threshold 0 always ties at the prefix length).
    for j in range(1, c + 1):
        mass_r = mass_s = 0
        for a, b in zip(r.degrees, s.degrees):
            mass_r += a >= j
            mass_s += b >= j
            if mass_r > mass_s:
                return False
    return True


def compare(kind: OrderingKind, r: JudgedRun, s: JudgedRun,
            scale: RelevanceScale) -> CompareResult:
    """Four-valued comparison; Incomparable means neither dominance direction holds."""
    _check_pair(kind, r, s)
    if r == s:
        return CompareResult.EQUAL
    forward = precedes(kind, r, s, scale)
    backward = precedes(kind, s, r, scale)
    if forward and backward:
        raise RuntimeError(
            f"ordering {kind.value} is not antisymmetric on {r.literal()} / {s.literal()}"
        )
    if forward:
        return CompareResult.LESS
    if backward:
        return CompareResult.GREATER
    return CompareResult.INCOMPARABLE


def _degree_matrix(universe: RunUniverse) -> np.ndarray:
    return np.array([run.degrees for run in universe.elements], dtype=np.int16)


def _chain_ranks(key_columns) -> np.ndarray:
    """Positions of the elements in ascending key order (primary key last)."""
    order = np.lexsort(key_columns)
    ranks = np.empty(len(order), dtype=np.int64)
    ranks[order] = np.arange(len(order))
    return ranks


def relation_matrix(kind: OrderingKind, universe: RunUniverse) -> np.ndarray:
    """Boolean n x n matrix M with M[i, j] iff elements[i] precedes elements[j].

    Vectorized restatement of ``precedes``; the two are cross-checked in the
    test suite.
    """
    if kind.mode is not universe.mode:
        raise ModeMismatch(
            f"ordering {kind.value} needs a {kind.mode.value}-based universe"
        )
    deg = _degree_matrix(universe)
    n, length = deg.shape
    c = universe.scale.c

    if kind is OrderingKind.REPL_RANK:
        return (deg[:, None, :] <= deg[None, :, :]).all(axis=2)

    if kind is OrderingKind.REPL_SET:
        # mass[i, j] = number of entries of run i at degree >= j, j = 1..c
        mass = np.stack([(deg >= j).sum(axis=1) for j in range(1, c + 1)], axis=1)
        return (mass[:, None, :] <= mass[None, :, :]).all(axis=2)

    if kind is OrderingKind.REPL_SWAP_RANK:
        # pm[i, j-1, k] = entries at degree >= j among the first k+1 positions
        pm = np.stack([np.cumsum(deg >= j, axis=1) for j in range(1, c + 1)], axis=1)
        return (pm[:, None, :, :] <= pm[None, :, :, :]).all(axis=(2, 3))

    if kind is OrderingKind.PROJ_REPL_RANK:
        ranks = _chain_ranks(tuple(deg.T[::-1]))
        return ranks[:, None] <= ranks[None, :]

    # PROJ_REPL_SET: ascending lexicographic order on (count_c, ..., count_1)
    counts = np.stack([(deg == j).sum(axis=1) for j in range(c + 1)], axis=1)
    ranks = _chain_ranks(tuple(counts.T[1:]))
    return ranks[:, None] <= ranks[None, :]


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0.5


@dataclass(frozen=True)
class PosetReport:
    """Outcome of the exhaustive reflexivity / antisymmetry / transitivity check."""

    reflexive: bool
    antisymmetric: bool
    transitive: bool
    witness: tuple[JudgedRun, ...] | None = None

    @property
    def passed(self) -> bool:
        return self.reflexive and self.antisymmetric and self.transitive


def verify_poset_axioms(kind: OrderingKind, universe: RunUniverse) -> PosetReport:
    """Check the poset axioms over all pairs and triples of the universe."""
    m = relation_matrix(kind, universe)
    n = m.shape[0]
    elements = universe.elements

    diag = np.diagonal(m)
    if not diag.all():
        i = int(np.flatnonzero(~diag)[0])
        return PosetReport(False, True, True, (elements[i],))

    both = m & m.T
    both[np.diag_indices(n)] = False
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        return PosetReport(True, False, True, (elements[i], elements[j]))

    reach2 = _bool_matmul(m, m)
    broken = reach2 & ~m
    if broken.any():
        i, k = (int(v) for v in np.argwhere(broken)[0])
        j = int(np.flatnonzero(m[i] & m[:, k])[0])
        return PosetReport(True, True, False, (elements[i], elements[j], elements[k]))

    return PosetReport(True, True, True)


def is_total(kind: OrderingKind, universe: RunUniverse):
    """Whether every pair is comparable; returns (flag, witness-pair-or-None)."""
    m = relation_matrix(kind, universe)
    comparable = m | m.T
    missing = np.argwhere(~comparable)
    if missing.size == 0:
        return True, None
    i, j = (int(v) for v in missing[0])
    return False, (universe.elements[i], universe.elements[j])
