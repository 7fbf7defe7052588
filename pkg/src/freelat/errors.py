"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for every domain error raised by this package."""


class NotALattice(LatticeError):
    """The input order is not a lattice (or not even a partial order)."""


class NotDistributive(LatticeError):
    """Distributivity fails; ``witness`` holds an offending label triple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeCapExceeded(LatticeError):
    """An exponential enumeration was asked to run past its size guard."""


class NonMonotoneValues(LatticeError):
    """A per-level value assignment is not strictly increasing in [-1, 1]."""


class LatticeNotBounded(LatticeError):
    """Raised defensively; every valid finite lattice has a bottom and a top."""


class NotLocallyComplemented(LatticeError):
    """A vector extension was requested for a pair without local complements."""


class GeneratorNotInSublattice(LatticeError):
    """An expression references elements outside the sublattice being pushed."""


class EpsilonOutOfRange(LatticeError):
    """The gap fixture needs a rational parameter strictly between 0 and 1/2."""
