"""Exception hierarchy shared by every module of the package."""


class RHHError(Exception):
    """Base class for all package errors."""


class DimensionError(RHHError, ValueError):
    """Operands have incompatible sizes."""


class DecompositionError(RHHError, ValueError):
    """A vector does not lie in the span it is being decomposed against."""


class ReductiveError(RHHError, ValueError):
    """Center and derived algebra fail to be complementary."""


class AdmissibilityError(RHHError, ValueError):
    """A structure spec violates 3r + dim k_ss <= n - 1."""


class StructureError(RHHError, RuntimeError):
    """An assembled structure fails one of its defining invariants."""


class SpecParseError(RHHError, ValueError):
    """A structure spec string could not be parsed."""


class NotApplicableError(RHHError, ValueError):
    """The requested report does not apply to this structure."""


class TensorError(RHHError, ValueError):
    """Malformed 3-tensor (e.g. not skew in the last two slots)."""
