"""Exception types shared across the package."""


class RunLatticeError(Exception):
    """Base class for every error raised by this package."""


# Scale and run construction.

class InvalidDegreeCount(RunLatticeError):
    """The scale needs at least two degrees (c >= 1) and c+1 gain values."""


class NonzeroGainAtBottom(RunLatticeError):
    """Gain functions must map the lowest degree to zero."""


class NonIncreasingGains(RunLatticeError):
    """Gain functions must be strictly increasing."""


class EmptyRun(RunLatticeError):
    pass


class DegreeOutOfRange(RunLatticeError):
    pass


class PrefixOnSetBased(RunLatticeError):
    """Prefix cutoffs only make sense for rank-based runs."""


class UniverseTooLarge(RunLatticeError):
    """Enumerating the universe would exceed the configured element cap."""


# Ordering and comparison.

class ModeMismatch(RunLatticeError):
    pass


class LengthMismatch(RunLatticeError):
    pass


# Lattice structure.

class NotALattice(RunLatticeError):
    """Some pair of elements has no unique least upper or greatest lower bound."""

    def __init__(self, message, pair=None, candidates=None):
        super().__init__(message)
        self.pair = pair
        self.candidates = candidates


class NoClosedForm(RunLatticeError):
    """The ordering has no componentwise meet/join formula."""


class NotComparable(RunLatticeError):
    pass


class NotDistributive(RunLatticeError):
    pass


class BottomHasNoDecomposition(RunLatticeError):
    pass


# Metrics.

class MissingParam(RunLatticeError):
    """A required metric parameter is absent or outside its valid range."""


class NotAValuation(RunLatticeError):
    pass


class IncompleteAssignment(RunLatticeError):
    """A custom metric must assign a value to every join-irreducible element."""


class InconsistentAssignment(RunLatticeError):
    """Extending a custom assignment produced values violating the valuation identity."""
