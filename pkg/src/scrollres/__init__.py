"""Exact-arithmetic experiments with relative canonical resolutions of
k-gonal canonical curves on rational normal scrolls over GF(p)."""

__version__ = "0.1.0"

from .curvegen import CurveSpec, build_curve, derive_seed
from .harness import ExperimentRecord, GridConfig, run_batch, run_pipeline
from .relres import resolve_on_scroll, splitting_types
from .scrollcox import build_scroll_embedding, curve_on_scroll

__all__ = [
    "CurveSpec",
    "ExperimentRecord",
    "GridConfig",
    "build_curve",
    "build_scroll_embedding",
    "curve_on_scroll",
    "derive_seed",
    "resolve_on_scroll",
    "run_batch",
    "run_pipeline",
    "splitting_types",
    "__version__",
]
