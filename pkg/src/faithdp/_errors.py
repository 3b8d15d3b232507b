"""Exception hierarchy shared by every module."""


class FaithDPError(Exception):
    """Base class for all errors raised by faithdp."""


class InvalidConfigError(FaithDPError, ValueError):
    """A parameter or configuration value is out of its allowed range."""


class InvalidInputError(FaithDPError, ValueError):
    """Input data failed validation (NaN, zero-norm rows, asymmetric store...)."""


class DegenerateDataError(InvalidInputError):
    """The data cannot support the requested computation, e.g. all distances zero."""


class BlockRangeError(FaithDPError, IndexError):
    """A requested row window falls outside ``[0, n)``."""


class GuardRefusedError(FaithDPError):
    """Refused to materialize an object that would exceed a size guard."""


class InternalInvariantError(FaithDPError, RuntimeError):
    """An internal structural invariant was violated."""


class WorkerError(FaithDPError, RuntimeError):
    """A worker failed while processing a batch window.

    Attributes
    ----------
    rank : int
        Worker that failed.
    window : tuple of (int, int)
        ``(row_offset, m)`` of the window being processed.
    """

    def __init__(self, rank, window, cause):
        self.rank = rank
        self.window = window
        self.cause = cause
        super().__init__(
            f"worker {rank} failed on window offset={window[0]} m={window[1]}: {cause!r}"
        )
