"""Exception types shared across the package.

Every domain error raised by the library is one of these names, so callers
(and the command-line front end) can report failures by class name alone.
"""

from __future__ import annotations


class ZeroDenominator(ZeroDivisionError):
    """A rational number was given a zero denominator."""


class BadIndex(ValueError):
    """A base-vector family index j lies outside its legal range."""


class BadM(ValueError):
    """A size parameter m is outside the domain of the requested family."""


class BadWeights(ValueError):
    """Mixture weights are negative or do not sum to one."""


class DimensionMismatch(ValueError):
    """Matrix composition with incompatible shapes or budgets."""


class InfeasibleParity(ValueError):
    """The requested implementation violates the parity feasibility law."""


class InfeasibleRange(ValueError):
    """A budget lies outside the range covered by the construction."""


class BadCase(ValueError):
    """Builder parameters select no defined assembly case."""


class ExcludedCase(ValueError):
    """Parameters fall in the construction's explicitly excluded set."""


class BadAlpha(ValueError):
    """The fractional part of the budget selects the wrong builder point."""


class MeanMismatch(ValueError):
    """A target distribution's mean is incompatible with budget/battlefields."""


class SearchExceeded(RuntimeError):
    """Backtracking search exceeded its row-count budget."""


class ConstructionMismatch(AssertionError):
    """A builder produced a matrix that fails its own cardinality self-check."""


class OutOfTheoremScope(ValueError):
    """The requested game lies outside the scope of the closed-form results."""


class UnsolvedCase(ValueError):
    """The game is classified but has no known value or construction."""


class CertificationFailed(AssertionError):
    """Best-response certification contradicts the claimed equilibrium."""


class TooLarge(ValueError):
    """An exhaustive expansion was requested beyond its size bound."""
