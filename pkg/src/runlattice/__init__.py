"""Finite lattices of judged retrieval runs.

Materializes the orderings that ranking axioms induce on the set of judged
runs, verifies their structure (posets, chains, distributivity,
join-irreducibles, unique decomposition), and shows that standard retrieval
metrics are valuations reconstructible from their values on the
join-irreducible elements.
"""

from .domain import (
    DEFAULT_UNIVERSE_CAP,
    JudgedRun,
    Mode,
    RelevanceScale,
    RunUniverse,
    cumulated_mass,
    enumerate_universe,
    make_run,
    make_scale,
    parse_run_literal,
    universe_size,
)
from .errors import (
    BottomHasNoDecomposition,
    DegreeOutOfRange,
    EmptyRun,
    IncompleteAssignment,
    InconsistentAssignment,
    InvalidDegreeCount,
    LengthMismatch,
    MissingParam,
    ModeMismatch,
    NoClosedForm,
    NonIncreasingGains,
    NonzeroGainAtBottom,
    NotALattice,
    NotAValuation,
    NotComparable,
    NotDistributive,
    PrefixOnSetBased,
    RunLatticeError,
    UniverseTooLarge,
)
from .lattice import (
    Decomposition,
    DistributivityReport,
    RunLattice,
    build_lattice,
    check_distributive,
    closed_meet_join,
    decompose,
    export_hasse,
    find_pentagon_or_diamond,
    generic_bound_table,
    interval,
    join_irreducibles,
    lattice_json,
    maximal_irreducibles_below,
)
from .metrics import (
    CustomExtension,
    MetricKind,
    MetricSpec,
    ValuationReport,
    check_valuation,
    eval_metric,
    extend_custom,
    lattice_values,
    metric_table,
    reconstruct,
)
from .orderings import (
    CHAIN_KINDS,
    CompareResult,
    OrderingKind,
    PosetReport,
    compare,
    is_total,
    precedes,
    relation_matrix,
    verify_poset_axioms,
)

__version__ = "0.1.0"
