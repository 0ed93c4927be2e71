"""Exception hierarchy.

Input problems derive from :class:`InvalidInput` (a ``ValueError``) so the CLI
can map them to exit code 2; an exhausted search budget maps to exit code 3.
"""

from __future__ import annotations


class StabError(Exception):
    """Base class for every error raised by the package."""


class InvalidInput(StabError, ValueError):
    """The caller supplied data that violates an operation's precondition."""


class LoopRejected(InvalidInput):
    pass


class VertexOutOfRange(InvalidInput):
    pass


class TrivialGraph(InvalidInput):
    pass


class ComplementTrivial(TrivialGraph):
    pass


class EmptySubset(InvalidInput):
    pass


class NonInverseClosed(InvalidInput):
    pass


class ZeroInConnectionSet(InvalidInput):
    pass


class DegreeMismatch(InvalidInput):
    pass


class BundleInvolutionViolated(InvalidInput):
    pass


class NotAnAutomorphism(InvalidInput):
    pass


class NotABooleanSquareEdge(InvalidInput):
    pass


class BadParameters(InvalidInput):
    pass


class HypothesisNotSatisfied(InvalidInput):
    pass


class ParseError(InvalidInput):
    pass


class SearchBudgetExceeded(StabError):
    """A backtracking search visited more nodes than its budget allows."""

    def __init__(self, budget: int, what: str = "search"):
        super().__init__(f"{what} exceeded the budget of {budget} nodes")
        self.budget = budget
