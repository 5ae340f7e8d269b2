"""Exception types raised across the package."""


class FilterBankError(Exception):
    """Base class for all errors raised by abelfb."""


class GroupMismatchError(FilterBankError, ValueError):
    """Operands live on different groups."""


class BackendError(FilterBankError, NotImplementedError):
    """Operation not available for this group backend (finite vs. integer)."""


class LatticeError(FilterBankError, ValueError):
    """Invalid lattice description or a signal supported off the lattice."""


class NotAFrameError(FilterBankError):
    """The analysis bank does not generate a frame (rank-deficient somewhere)."""


class NonFIRDualError(FilterBankError):
    """The canonical dual of an integer-backend bank is not a finite filter."""
