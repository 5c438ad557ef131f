"""Exception taxonomy for the engine.

Parsing errors (schema, balance, range) are user-input errors; the CLI maps
them to exit code 2.  Everything else signals either a failed mathematical
check (exit 3) or an internal bug (plain raise).
"""

from __future__ import annotations


class QAnnularError(Exception):
    """Base class for all package errors."""


class SchemaError(QAnnularError):
    """Malformed input document."""


class BalanceError(QAnnularError):
    """Tangle word strand count does not return to k."""


class RangeError(QAnnularError):
    """Slice position out of range at its point in the word."""


class TopologyError(QAnnularError):
    """Curve tracing failed to close up (internal invariant violation)."""


class PositionError(QAnnularError):
    """A cup/cap movie event touches a seam-crossing circle."""


class DomainError(QAnnularError):
    """Movie event applied to a mismatched configuration or label."""


class SeamError(QAnnularError):
    """Surgery site touches the seam."""


class CalibrationError(QAnnularError):
    """No weight scheme satisfies the calibration constraints."""


class EngineError(QAnnularError):
    """Saddle geometry outside the range the movie engine handles."""


class AmbiguityError(QAnnularError):
    """A square's 2-morphism is neither forced nor a recognized ladybug."""


class MismatchError(QAnnularError):
    """A natural-isomorphism certificate failed; names the failing face."""


class LocationError(QAnnularError):
    """An elementary cobordism move touches the seam illegally."""


class GlueError(QAnnularError):
    """Movie steps whose source/target words do not match."""


class UnsupportedLink(QAnnularError):
    """Sweep evaluation requested for a link outside the supported family."""
