"""Harmonic analysis on bounded Vilenkin groups and an explicit function
whose Fejer means diverge on a given null set."""

from .construction import (
    CertificateError,
    ConstructionError,
    NullSetSpec,
    PointRule,
    build_cover,
    run_pipeline,
    verify_divergence,
)
from .core import GroupPoint, RadixSequence, SpectralIndex, VilenkinInterval, character
from .estimators import FejerDivergenceConstruction, VilenkinTransformer
from .spectral import SampledFunction, SparseSpectrum, fejer_mean, forward, inverse, partial_sum

__version__ = "0.1.0"

__all__ = [
    "CertificateError",
    "ConstructionError",
    "FejerDivergenceConstruction",
    "GroupPoint",
    "NullSetSpec",
    "PointRule",
    "RadixSequence",
    "SampledFunction",
    "SparseSpectrum",
    "SpectralIndex",
    "VilenkinInterval",
    "VilenkinTransformer",
    "build_cover",
    "character",
    "fejer_mean",
    "forward",
    "inverse",
    "partial_sum",
    "run_pipeline",
    "verify_divergence",
]
