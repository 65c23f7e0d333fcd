"""Exception hierarchy shared by every module."""


class SpanTreeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SpanTreeError, ValueError):
    """Malformed input: unknown edge ids, bad permutations, loops, bad params."""


class PreconditionError(SpanTreeError):
    """The input is well formed but an algorithm's hypothesis does not hold."""


class ResourceError(SpanTreeError):
    """An exhaustive mode was asked to run beyond its configured size limit."""


class NoEligibleTree(SpanTreeError):
    """Every tree already holds an earlier edge of the uncovered edge's back-edge block."""

    def __init__(self, step, edge, block):
        self.step = step
        self.edge = edge
        self.block = block
        super().__init__(
            f"no eligible tree for uncovered edge {edge} (block {block}) at step {step}"
        )


class WindowViolation(SpanTreeError):
    """A fundamental cycle left the window a lazy family declared for that step."""


class InvariantViolation(SpanTreeError):
    """A monitored invariant of the exchange process failed."""
