"""Materialized finite lattices over run universes.

``build_lattice`` turns (universe, ordering) into order matrix, cover edges,
meet/join tables, and the join-irreducible set. Meets and joins come from the
componentwise closed forms where the ordering admits one and from a generic
bound search otherwise; either way the tables are verified against the order
relation itself, and a pair without a unique bound raises ``NotALattice`` with
witnesses instead of guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .domain import JudgedRun, Mode, RunUniverse
from .errors import (
    BottomHasNoDecomposition,
    LengthMismatch,
    ModeMismatch,
    NoClosedForm,
    NotALattice,
    NotComparable,
    NotDistributive,
)
from .orderings import (
    CHAIN_KINDS,
    OrderingKind,
    _bool_matmul,
    precedes,
    relation_matrix,
)


@dataclass(eq=False)
class RunLattice:
    """A run universe together with its order, covers, bounds, and irreducibles.

    ``leq[i, j]`` says elements[i] is below or equal to elements[j]; ``meet``
    and ``join`` hold element indices. Treat instances as immutable; ``_cache``
    only memoizes derived reports.
    """

    universe: RunUniverse
    kind: OrderingKind
    leq: np.ndarray
    covers: tuple[tuple[int, int], ...]
    meet: np.ndarray
    join: np.ndarray
    bottom: int
    top: int
    irreducibles: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return self.universe.size

    def run(self, index: int) -> JudgedRun:
        return self.universe.elements[index]

    def index_of(self, run: JudgedRun) -> int:
        return self.universe.index_of(run)


@dataclass(frozen=True)
class DistributivityReport:
    """Verdict of the exhaustive distributive-law check.

    On failure carries the violating triple and a five-element sublattice
    witness (pentagon or diamond), all as element indices.
    """

    distributive: bool
    witness: tuple[int, int, int] | None = None
    sublattice_witness: tuple[int, ...] | None = None
    sublattice_shape: str | None = None


@dataclass(frozen=True)
class Decomposition:
    """An element expressed as the irredundant join of join-irreducibles."""

    element: int
    parts: tuple[int, ...]


def _resolve(lattice: RunLattice, element) -> int:
    if isinstance(element, JudgedRun):
        return lattice.index_of(element)
    index = int(element)
    if not 0 <= index < lattice.size:
        raise ValueError(f"element index {index} outside [0, {lattice.size})")
    return index


# -- construction -------------------------------------------------------------


def _verify_poset_matrix(m: np.ndarray, kind: OrderingKind):
    n = m.shape[0]
    if not np.diagonal(m).all():
        raise RuntimeError(f"{kind.value}: relation is not reflexive")
    both = m & m.T
    both[np.diag_indices(n)] = False
    if both.any():
        raise RuntimeError(f"{kind.value}: relation is not antisymmetric")
    if (_bool_matmul(m, m) & ~m).any():
        raise RuntimeError(f"{kind.value}: relation is not transitive")


def _transitive_reduction(leq: np.ndarray) -> np.ndarray:
    lt = leq & ~np.eye(leq.shape[0], dtype=bool)
    return lt & ~_bool_matmul(lt, lt)


def _bound_failure(leq, common, x, y, universe, upper):
    """Build the NotALattice error for a pair whose bound set has no unique extremum."""
    cand = np.flatnonzero(common)
    sub = leq[np.ix_(cand, cand)]
    # Minimal members of an upper-bound set (dually, maximal of a lower-bound set).
    extremal = cand[sub.sum(axis=0) == 1] if upper else cand[sub.sum(axis=1) == 1]
    names = ", ".join(universe.elements[int(t)].literal() for t in extremal)
    word = "least upper" if upper else "greatest lower"
    pair = (universe.elements[x], universe.elements[y])
    raise NotALattice(
        f"no {word} bound for {pair[0].literal()} and {pair[1].literal()}: "
        f"extremal bounds are {{{names}}}",
        pair=pair,
        candidates=tuple(universe.elements[int(t)] for t in extremal),
    )


def generic_bound_table(leq: np.ndarray, universe: RunUniverse, upper: bool) -> np.ndarray:
    """Joins (upper=True) or meets of all pairs by generic bound search.

    Uses the fact that t is the least upper bound of {x, y} exactly when the
    up-set of t equals the intersection of the up-sets of x and y (dually for
    meets with down-sets). Raises ``NotALattice`` when no element matches.
    """
    rows = leq if upper else leq.T.copy()
    n = rows.shape[0]
    packed = np.packbits(rows, axis=1)
    locate = {packed[t].tobytes(): t for t in range(n)}
    table = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        keys = np.packbits(rows[x] & rows[x:], axis=1)
        for off in range(n - x):
            t = locate.get(keys[off].tobytes(), -1)
            if t < 0:
                _bound_failure(leq, rows[x] & rows[x + off], x, x + off, universe, upper)
            table[x, x + off] = t
            table[x + off, x] = t
    return table


def _closed_tables(kind, universe, leq):
    """Meet/join tables from the ordering's closed form, or None if it has none."""
    n = universe.size
    idx = np.arange(n, dtype=np.int32)

    if kind in CHAIN_KINDS:
        # In a verified chain the bounds are order minimum and maximum.
        rank = leq.sum(axis=1)  # elements above or equal; larger means lower
        lower_first = rank[:, None] >= rank[None, :]
        meet = np.where(lower_first, idx[:, None], idx[None, :]).astype(np.int32)
        join = np.where(lower_first, idx[None, :], idx[:, None]).astype(np.int32)
        return meet, join

    if kind in (OrderingKind.REPL_SET, OrderingKind.REPL_RANK):
        deg = np.array([run.degrees for run in universe.elements], dtype=np.int64)
        if kind is OrderingKind.REPL_RANK:
            weights = (universe.scale.c + 1) ** np.arange(universe.length - 1, -1, -1)

            def locate(rows):
                return (rows @ weights).astype(np.int32)
        else:
            index = universe._index

            def locate(rows):
                return np.array([index[tuple(row)] for row in rows], dtype=np.int32)

        meet = np.empty((n, n), dtype=np.int32)
        join = np.empty((n, n), dtype=np.int32)
        for x in range(n):
            meet[x] = locate(np.minimum(deg[x], deg))
            join[x] = locate(np.maximum(deg[x], deg))
        return meet, join

    return None


def closed_meet_join(kind: OrderingKind, r: JudgedRun, s: JudgedRun):
    """Closed-form (meet, join) of a single pair; ``NoClosedForm`` for the swap order."""
    if kind is OrderingKind.REPL_SWAP_RANK:
        raise NoClosedForm("the swap-compatible ordering has no componentwise meet/join")
    if r.mode is not kind.mode or s.mode is not kind.mode:
        raise ModeMismatch(f"ordering {kind.value} needs {kind.mode.value}-based runs")
    if r.length != s.length:
        raise LengthMismatch(f"run lengths differ: {r.length} vs {s.length}")

    if kind in CHAIN_KINDS:
        lo = r if _chain_precedes(kind, r, s) else s
        hi = s if lo is r else r
        return lo, hi

    meet = JudgedRun(kind.mode, tuple(min(a, b) for a, b in zip(r.degrees, s.degrees)))
    join = JudgedRun(kind.mode, tuple(max(a, b) for a, b in zip(r.degrees, s.degrees)))
    return meet, join


def _chain_precedes(kind: OrderingKind, r: JudgedRun, s: JudgedRun) -> bool:
    if kind is OrderingKind.PROJ_REPL_RANK:
        for a, b in zip(r.degrees, s.degrees):
            if a != b:
                return a < b
        return True
    top = max(r.degrees + s.degrees)
    for j in range(top, -1, -1):
        cr = sum(1 for d in r.degrees if d == j)
        cs = sum(1 for d in s.degrees if d == j)
        if cr != cs:
            return cr < cs
    return True


def _irreducibles_from_covers(leq, covers, join, bottom) -> tuple[int, ...]:
    n = leq.shape[0]
    lower_cover_count = np.zeros(n, dtype=np.int64)
    for _, hi in covers:
        lower_cover_count[hi] += 1
    by_covers = (lower_cover_count == 1)
    by_covers[bottom] = False

    # Algebraic route: j is reducible when some pair strictly below joins to it.
    idx = np.arange(n)
    proper = (join != idx[:, None]) & (join != idx[None, :])
    reducible = np.zeros(n, dtype=bool)
    reducible[np.unique(join[proper])] = True
    by_algebra = ~reducible
    by_algebra[bottom] = False

    if not np.array_equal(by_covers, by_algebra):
        raise RuntimeError("cover-based and algebraic join-irreducible sets disagree")
    return tuple(int(i) for i in np.flatnonzero(by_covers))


def build_lattice(universe: RunUniverse, kind: OrderingKind) -> RunLattice:
    """Materialize the lattice of ``universe`` under ``kind``.

    Verifies during construction: poset axioms, unique bottom/top at the
    all-0 / all-c runs, covers forming a transitive reduction, and the
    meet/join tables matching a generic bound search over the order matrix.
    """
    kind = OrderingKind(kind)
    if kind.mode is not universe.mode:
        raise ModeMismatch(f"ordering {kind.value} needs a {kind.mode.value}-based universe")
    leq = relation_matrix(kind, universe)
    _verify_poset_matrix(leq, kind)
    n = universe.size

    bottom_mask = leq.all(axis=1)
    top_mask = leq.all(axis=0)
    if bottom_mask.sum() != 1 or top_mask.sum() != 1:
        raise RuntimeError(f"{kind.value}: bottom/top element is not unique")
    bottom = int(np.flatnonzero(bottom_mask)[0])
    top = int(np.flatnonzero(top_mask)[0])
    if set(universe.elements[bottom].degrees) != {0}:
        raise RuntimeError("bottom is not the all-zero run")
    if set(universe.elements[top].degrees) != {universe.scale.c}:
        raise RuntimeError("top is not the all-max run")

    cover_matrix = _transitive_reduction(leq)
    if (_bool_matmul(cover_matrix, cover_matrix) & cover_matrix).any():
        raise RuntimeError("cover relation is not a transitive reduction")
    covers = tuple((int(i), int(j)) for i, j in np.argwhere(cover_matrix))

    meet = generic_bound_table(leq, universe, upper=False)
    join = generic_bound_table(leq, universe, upper=True)
    closed = _closed_tables(kind, universe, leq)
    if closed is not None:
        closed_meet, closed_join = closed
        if not (np.array_equal(closed_meet, meet) and np.array_equal(closed_join, join)):
            raise RuntimeError(f"{kind.value}: closed-form bounds disagree with bound search")

    irreducibles = _irreducibles_from_covers(leq, covers, join, bottom)
    return RunLattice(universe, kind, leq, covers, meet, join, bottom, top, irreducibles)


# -- structural queries --------------------------------------------------------


def join_irreducibles(lattice: RunLattice) -> tuple[int, ...]:
    """Join-irreducible element indices, recomputed by both characterizations."""
    return _irreducibles_from_covers(lattice.leq, lattice.covers, lattice.join,
                                     lattice.bottom)


def _law_violation(meet: np.ndarray, join: np.ndarray):
    """First triple (x, y, z) violating x ^ (y v z) == (x ^ y) v (x ^ z), or None."""
    n = meet.shape[0]
    for x in range(n):
        meet_x = meet[x]
        lhs = meet_x[join]
        rhs = join[np.ix_(meet_x, meet_x)]
        if not np.array_equal(lhs, rhs):
            y, z = (int(v) for v in np.argwhere(lhs != rhs)[0])
            return x, y, z
    return None


def _meet_join_closure(seed, meet, join):
    closed = set(int(v) for v in seed)
    frontier = list(closed)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in closed:
                fresh.add(int(meet[a, b]))
                fresh.add(int(join[a, b]))
        frontier = [v for v in fresh if v not in closed]
        closed.update(frontier)
    return sorted(closed)


def find_pentagon_or_diamond(leq, meet, join, subset=None):
    """Search for an N5 or M3 sublattice; returns (shape, 5 indices) or None.

    Every pentagon arises from a comparable pair u < v and an element w
    incomparable to both with matching bounds; every diamond from a pairwise
    incomparable triple with common bounds. The scan over those patterns is
    exhaustive over 5-element sublattice witnesses.
    """
    pool = np.arange(leq.shape[0]) if subset is None else np.asarray(subset)
    strict = leq & ~np.eye(leq.shape[0], dtype=bool)
    comp = leq | leq.T
    for u in pool:
        for v in pool:
            if not strict[u, v]:
                continue
            for w in pool:
                if comp[u, w] or comp[v, w]:
                    continue
                if meet[u, w] == meet[v, w] and join[u, w] == join[v, w]:
                    five = (int(meet[u, w]), int(u), int(v), int(w), int(join[u, w]))
                    return "N5", five
    for u, v, w in itertools.combinations([int(t) for t in pool], 3):
        if comp[u, v] or comp[u, w] or comp[v, w]:
            continue
        if (meet[u, v] == meet[u, w] == meet[v, w]
                and join[u, v] == join[u, w] == join[v, w]):
            return "M3", (int(meet[u, v]), u, v, w, int(join[u, v]))
    return None


def check_distributive(lattice: RunLattice) -> DistributivityReport:
    """Exhaustive triple check of the distributive law, with cached result.

    On failure the sublattice generated by the violating triple is searched
    for the pentagon/diamond witness that must exist there.
    """
    cached = lattice._cache.get("distributive")
    if cached is not None:
        return cached
    violation = _law_violation(lattice.meet, lattice.join)
    if violation is None:
        report = DistributivityReport(True)
    else:
        closure = _meet_join_closure(violation, lattice.meet, lattice.join)
        found = find_pentagon_or_diamond(lattice.leq, lattice.meet, lattice.join, closure)
        if found is None:
            raise RuntimeError("distributive law fails but no N5/M3 witness was found")
        shape, five = found
        report = DistributivityReport(False, violation, five, shape)
    lattice._cache["distributive"] = report
    return report


def maximal_irreducibles_below(lattice: RunLattice, index: int) -> tuple[int, ...]:
    """Maximal join-irreducible elements at or below the given element."""
    irr = np.array(lattice.irreducibles, dtype=np.int64)
    below = irr[lattice.leq[irr, index]]
    if below.size == 0:
        return ()
    sub = lattice.leq[np.ix_(below, below)]
    maximal = below[sub.sum(axis=1) == 1]
    return tuple(int(i) for i in maximal)


def decompose(lattice: RunLattice, element) -> Decomposition:
    """Unique irredundant join decomposition into join-irreducibles.

    Defined only on distributive lattices (uniqueness fails otherwise) and
    only for non-bottom elements. The returned parts are verified to be an
    antichain whose join is the element and from which no part can be dropped.
    """
    index = _resolve(lattice, element)
    if index == lattice.bottom:
        raise BottomHasNoDecomposition("the bottom element has no join decomposition")
    report = check_distributive(lattice)
    if not report.distributive:
        raise NotDistributive(
            f"decomposition is only unique on distributive lattices; "
            f"{lattice.kind.value} fails the law"
        )
    parts = maximal_irreducibles_below(lattice, index)

    acc = parts[0]
    for p in parts[1:]:
        acc = int(lattice.join[acc, p])
    if acc != index:
        raise RuntimeError("decomposition parts do not join back to the element")
    for i, p in enumerate(parts):
        for q in parts[i + 1:]:
            if lattice.leq[p, q] or lattice.leq[q, p]:
                raise RuntimeError("decomposition parts are not an antichain")
        rest = [q for q in parts if q != p]
        if rest:
            acc = rest[0]
            for q in rest[1:]:
                acc = int(lattice.join[acc, q])
            if acc == index:
                raise RuntimeError("decomposition is redundant")
    return Decomposition(index, parts)


def interval(lattice: RunLattice, lo, hi) -> tuple[int, ...]:
    """Indices of all elements z with lo <= z <= hi."""
    lo_i = _resolve(lattice, lo)
    hi_i = _resolve(lattice, hi)
    if not lattice.leq[lo_i, hi_i]:
        raise NotComparable(
            f"{lattice.run(lo_i).literal()} does not precede {lattice.run(hi_i).literal()}"
        )
    members = np.flatnonzero(lattice.leq[lo_i] & lattice.leq[:, hi_i])
    return tuple(int(i) for i in members)


# -- exports -------------------------------------------------------------------


def export_hasse(lattice: RunLattice, highlight_irreducibles: bool = False) -> str:
    """DOT text of the Hasse diagram, bottom-up, nodes labelled by run literal."""
    universe = lattice.universe
    irr = set(lattice.irreducibles)
    lines = [
        "digraph hasse {",
        "  rankdir=BT;",
        f"  // ordering={lattice.kind.value} mode={universe.mode.value}"
        f" c={universe.scale.c} n={universe.length}"
        f" elements={lattice.size} covers={len(lattice.covers)}"
        f" irreducibles={len(lattice.irreducibles)}",
    ]
    for i, run in enumerate(universe.elements):
        if highlight_irreducibles and i in irr:
            lines.append(f'  "{run.literal()}" [peripheries=2];')
        else:
            lines.append(f'  "{run.literal()}";')
    for lo, hi in sorted(lattice.covers):
        lines.append(f'  "{universe.elements[lo].literal()}" -> '
                     f'"{universe.elements[hi].literal()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_json(lattice: RunLattice) -> dict:
    """JSON-ready summary: elements, cover edges, and irreducible indices."""
    universe = lattice.universe
    return {
        "mode": universe.mode.value,
        "c": universe.scale.c,
        "N": universe.length,
        "ordering": lattice.kind.value,
        "elements": [run.literal() for run in universe.elements],
        "covers": [list(edge) for edge in sorted(lattice.covers)],
        "irreducibles": list(lattice.irreducibles),
    }
