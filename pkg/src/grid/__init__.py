"""
Micro-grid interconnection graphs.

Topologies, unit/T-weighted and inertia-weighted Laplacians, and their spectra.
"""

from .laplacian import build_laplacian, degree_bounds, spectrum, weighted_laplacian
from .models import (
    DegreeBounds,
    Edge,
    LaplacianError,
    LaplacianMatrix,
    Spectrum,
    SpectrumSource,
    Topology,
    TopologyError,
    Weighting,
)

__all__ = [
    "DegreeBounds",
    "Edge",
    "LaplacianError",
    "LaplacianMatrix",
    "Spectrum",
    "SpectrumSource",
    "Topology",
    "TopologyError",
    "Weighting",
    "build_laplacian",
    "degree_bounds",
    "spectrum",
    "weighted_laplacian",
]
