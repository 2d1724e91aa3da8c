"""Exception hierarchy shared by every module of the package."""


class TuranBatchError(Exception):
    """Base class for all errors raised by :mod:`turanbatch`."""


class DegenerateParams(TuranBatchError, ValueError):
    """The ``(r, k, q)`` triple lies outside the admissible range."""


class UniformityTooSmall(DegenerateParams):
    pass


class QTooSmall(DegenerateParams):
    """Raised for ``q <= -r``.

    In that range a single edge is already forbidden, so the Turán number
    is identically zero; the fact is carried on the ``ex`` attribute.
    """

    ex = 0


class KTooSmall(DegenerateParams):
    pass


class IndexOutOfRange(TuranBatchError, IndexError):
    pass


class EmptySelection(TuranBatchError, ValueError):
    pass


class ParseError(TuranBatchError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UniformityMismatch(ParseError):
    pass


class VertexOutOfRange(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class BadProbability(TuranBatchError, ValueError):
    pass


class EmptyHypergraph(TuranBatchError, ValueError):
    pass


class TooLarge(TuranBatchError):
    """Instance exceeds the documented size limit of an exhaustive routine."""


class NoSDR(TuranBatchError):
    """A request has no system of distinct representatives.

    ``deficient`` holds a Hall violator: requested items whose edges jointly
    contain fewer vertices than there are items.
    """

    def __init__(self, deficient, neighbourhood=()):
        self.deficient = tuple(sorted(deficient))
        self.neighbourhood = tuple(sorted(neighbourhood))
        super().__init__(
            f"items {list(self.deficient)} share only servers "
            f"{list(self.neighbourhood)}"
        )


class PadImpossible(TuranBatchError):
    pass


class NoFeasibleC(TuranBatchError):
    pass


class NotApplicable(TuranBatchError):
    """A bound was requested outside the range where it is proven."""

    def __init__(self, precondition):
        self.precondition = precondition
        super().__init__(f"precondition violated: {precondition}")


class InfeasibleExact(TuranBatchError):
    def __init__(self, n, reason=""):
        self.n = n
        super().__init__(f"exact value infeasible at n={n} {reason}".strip())


class NotFree(TuranBatchError):
    pass


class DisconnectedRoot(TuranBatchError):
    pass


class EmptyGraph(TuranBatchError, ValueError):
    pass


class BoundViolation(TuranBatchError, AssertionError):
    """A computed value contradicts a proven inequality."""
