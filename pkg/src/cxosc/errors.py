"""Exception hierarchy shared by all cxosc modules.

The CLI maps these onto its exit codes: parameter-domain errors exit with
code 2, resolution/size errors with 3, unsupported-regime requests with 4.
"""


class CxoscError(Exception):
    """Base class for all errors raised by this package."""


class ParameterDomainError(CxoscError, ValueError):
    """A potential parameter set violates its positivity constraints."""


class ResolutionError(CxoscError, ValueError):
    """The spatial grid cannot resolve the requested state."""


class BasisSizeError(CxoscError, ValueError):
    """A coefficient vector needs more basis states than were built."""


class GridAlignmentError(ResolutionError):
    """Phase-space abscissae do not lie on the sampled spatial lattice."""


class UnsupportedRegimeError(CxoscError, ValueError):
    """The requested quantity is not defined in this parameter regime."""


class NormalizationError(CxoscError, ValueError):
    """A field that must be normalized (or normalizable) is not."""


class ConsistencyError(CxoscError, RuntimeError):
    """An internal cross-check failed (e.g. a real quantity came out complex)."""
