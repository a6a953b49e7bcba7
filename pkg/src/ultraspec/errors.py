"""Exception hierarchy.

Every contract violation raised by the library derives from ``UltraspecError``;
the CLI maps these to exit status 3. ``SchemaError`` is kept separate because
malformed input documents map to exit status 2.
"""


class UltraspecError(Exception):
    """Base class for contract errors."""


class SchemaError(ValueError):
    """An input document does not validate."""


class ContextMismatch(UltraspecError):
    pass


class AmbientMismatch(UltraspecError):
    pass


class ZeroVector(UltraspecError):
    pass


class ZeroBeta(UltraspecError):
    pass


class NotFiniteDimensional(UltraspecError):
    pass


class UnsupportedFamily(UltraspecError):
    pass


class Singular(UltraspecError):
    pass


class NotInvertibleOnSide(UltraspecError):
    pass


class InfiniteSupport(UltraspecError):
    """An exact result exists but is not representable by the requested type."""


class ContractionFailure(UltraspecError):
    pass


class InSpectrum(UltraspecError):
    pass


class NotInPseudospectrum(UltraspecError):
    pass


class NotInConditionPseudospectrum(UltraspecError):
    pass


class ScalarOperator(UltraspecError):
    pass


class UnknownLaw(UltraspecError):
    pass


class CertificateFailure(UltraspecError):
    """A constructed witness failed its own exact re-check."""
