"""Exception types shared across the package.

Every error that carries a witness stores it as plain data (ints, tuples,
dicts) so it can be serialized into run artifacts and replayed.
"""

from __future__ import annotations


class FreesplitError(Exception):
    """Base class for all package errors."""


class MalformedInput(FreesplitError):
    """Input text does not conform to the named graph format."""


class LoopOrDuplicateEdge(MalformedInput):
    """Edge input contains a self-loop or a repeated edge."""


class EmptyGraph(FreesplitError):
    """Operation undefined on the graph with no vertices."""


class BindingError(FreesplitError):
    """A VertexSet was used with a graph of a different vertex range."""


class SpecError(FreesplitError):
    """A FreenessSpec violates its own invariants."""


class PreconditionViolated(FreesplitError):
    """A pipeline precondition failed; ``witness`` names the offending data."""

    def __init__(self, reason: str, witness=None):
        super().__init__(reason if witness is None else f"{reason}: {witness}")
        self.reason = reason
        self.witness = witness


class NotOptimalSeed(FreesplitError):
    """Seed set handed to refine failed the maximality recheck."""


class Stalled(FreesplitError):
    """Search reached a state it cannot improve.

    ``definitive`` is True when an exhaustive search proved absence, False
    when a heuristic merely gave up.
    """

    def __init__(self, reason: str, *, s=None, trace=None, diagnostics=None,
                 definitive: bool = False):
        super().__init__(reason)
        self.reason = reason
        self.s = s
        self.trace = trace or []
        self.diagnostics = diagnostics or {}
        self.definitive = definitive


class FallbackExceeded(FreesplitError):
    """Refinement stalled and the graph is too large for exhaustive fallback."""

    def __init__(self, reason: str, n: int, bound: int):
        super().__init__(f"{reason} (n={n} > fallback bound {bound})")
        self.n = n
        self.bound = bound


class RepairLoopExceeded(FreesplitError):
    """Degree-bounded split repair hit its iteration cap."""

    def __init__(self, reason: str, partial=None):
        super().__init__(reason)
        self.partial = partial


class UnsupportedCase(FreesplitError):
    """Parameter combination outside the supported hypotheses."""


class BudgetExhausted(FreesplitError):
    """Branch-and-bound node budget ran out; carries the incumbent result."""

    def __init__(self, reason: str, incumbent=None):
        super().__init__(reason)
        self.incumbent = incumbent


class RangeExceeded(FreesplitError):
    """Requested size is beyond the exhaustive-search bounds."""


class ConfigError(FreesplitError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
