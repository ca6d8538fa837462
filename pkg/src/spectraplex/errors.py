"""Exception types shared across the package."""


class SpectraplexError(Exception):
    """Base class for all spectraplex errors."""


class InputError(SpectraplexError, ValueError):
    """Malformed or inconsistent input data."""


class DomainError(SpectraplexError, ValueError):
    """Input is well-formed but outside the domain of the operation
    (e.g. disconnected layer, inapplicable theorem hypothesis)."""


class GenerationError(SpectraplexError, RuntimeError):
    """A random-graph generator failed to produce a usable instance."""


class CertificateError(SpectraplexError, RuntimeError):
    """A dual certificate could not be recovered at the requested tolerance."""
