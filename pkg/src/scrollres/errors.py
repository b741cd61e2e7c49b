"""Exception types shared across the pipeline."""


class ScrollresError(Exception):
    """Base class for package errors."""


class ConstructionError(ScrollresError):
    """A randomized construction stage failed; the draw can be retried."""


class RankDeficiencyError(ConstructionError):
    """Canonical sections came out linearly dependent."""


class FiltrationMismatchError(ConstructionError):
    """The section filtration does not have the generic block dimensions."""


class CurveVerificationError(ConstructionError):
    """Constructed ideal failed the Hilbert-data gate."""


class RetryExhaustedError(ScrollresError):
    """Random redraws exceeded the configured retry budget."""


class GeneratorCountError(ScrollresError):
    """Minimal generators or syzygies found do not match the rank formulas."""


class WindowExhaustedError(ScrollresError):
    """A syzygy twist fell outside the configured search window."""
