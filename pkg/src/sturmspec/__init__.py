"""Sturm-Liouville spectral toolkit: direct spectra, norming constants, and
isospectral operator families under Robin boundary conditions."""

from .backend import backend_name
from .documents import deserialize, serialize
from .types import (Grid, OperatorSpec, PerturbationSeq, Potential,
                    RobinAngles, SpectralDatum, SpectrumTable)

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "RobinAngles",
    "Potential",
    "OperatorSpec",
    "SpectralDatum",
    "SpectrumTable",
    "PerturbationSeq",
    "serialize",
    "deserialize",
    "backend_name",
    "__version__",
]
