"""Exception types shared across the package.

The CLI maps these onto process exit codes: input-side problems
(parsing, invariant violations in user data, bad parameters) exit 1,
an infeasible flow-value request exits 2, and internal invariant
violations exit 3.
"""

from __future__ import annotations


class FlowError(Exception):
    """Base class for all package errors."""


class ParseError(FlowError):
    """Malformed instance or cost-spec file; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(FlowError):
    """Network data violates a structural invariant (2-cycle, bad capacity, ...)."""


class BalanceMismatch(InvariantError):
    """Node balances do not sum to zero."""


class InfeasibleFlow(FlowError):
    """A flow vector violates capacity or conservation constraints."""


class NoPath(FlowError):
    """No source-sink path exists where one is required."""


class AuxiliaryArc(FlowError):
    """An operation that needs a cost-bearing edge was given an auxiliary one."""


class IterationCapExceeded(FlowError):
    """Solver exceeded an explicit iteration budget; diagnostic guard."""


class InternalInvariantError(FlowError):
    """A runtime self-check failed (negative reduced cost, broken potential)."""


class InvalidInterval(FlowError):
    """A cost interval violates the density-bound constraints."""


class InfeasibleShape(FlowError):
    """Requested topology parameters cannot be realized."""


class BadParams(FlowError):
    """Lower-bound family parameters out of the admissible range."""


class PredictionMismatch(FlowError):
    """Observed solver behavior diverged from the construction's prediction."""


class LemmaViolation(FlowError):
    """A structural property that must hold was observed to fail."""
