"""Exception hierarchy shared by the library, the pipeline and the CLI."""


class ObstructionError(Exception):
    """Base class for every error raised by the obstruction code."""


class InvalidCurveError(ObstructionError, ValueError):
    """The input does not define a usable hyperelliptic curve."""


class NonSquareNormError(ObstructionError, ValueError):
    """An element offered as an input does not have square norm."""


class CertificateError(ObstructionError):
    """A checked invariant failed or a report does not verify."""


class PointOutsideSurvivorsError(CertificateError):
    """A rational point has a class tuple outside every surviving subproduct."""


class ResourceAbort(ObstructionError):
    """A configured budget or precision limit was reached."""


class PrecisionExhaustedError(ResourceAbort):
    """p-adic working precision ran out before a decision was certified."""


class IncompleteFactorizationError(ResourceAbort):
    """An integer factorization left an unfactored cofactor."""


class NodeBudgetExceededError(ResourceAbort):
    """The subproduct tree search visited more nodes than allowed."""


class RecursionDepthExceededError(ResourceAbort):
    """Residue disc subdivision went deeper than the configured cap."""
