"""Exception types shared across the package."""


class GlslabError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(GlslabError, ValueError):
    """Operands live in different ambient dimensions."""


class EmptySetError(GlslabError, ValueError):
    """An operation that requires a nonempty point set received an empty one."""


class EmptySliceError(EmptySetError):
    """A graded slice required to be nonzero is the zero space."""


class NotSublatticeError(GlslabError, ValueError):
    """lattice_index was called on a pair that is not nested."""


class SpecError(GlslabError, ValueError):
    """A series specification violates its validity constraints."""


class SpecFileError(SpecError):
    """A series spec file cannot be parsed or fails schema validation."""


class DegenerateSystemError(GlslabError, ArithmeticError):
    """A sampled polynomial system has a positive-dimensional zero set."""
