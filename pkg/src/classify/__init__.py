"""
Closed-form transient classification of single grids and homogeneous networks.
"""

from .models import (
    ClassificationError,
    ConsensusPoint,
    DampingBounds,
    GridParams,
    NetworkClass,
    NetworkMode,
    NetworkVerdict,
    PlanarKind,
    TransientClass,
    TransientKind,
)
from .network import common_damping_ratio, damping_bounds, network_modes, predict_consensus
from .single import (
    classify_planar,
    classify_single,
    damping_threshold,
    single_grid_matrix,
    synchronizing_threshold,
)

__all__ = [
    "ClassificationError",
    "ConsensusPoint",
    "DampingBounds",
    "GridParams",
    "NetworkClass",
    "NetworkMode",
    "NetworkVerdict",
    "PlanarKind",
    "TransientClass",
    "TransientKind",
    "classify_planar",
    "classify_single",
    "common_damping_ratio",
    "damping_bounds",
    "damping_threshold",
    "network_modes",
    "predict_consensus",
    "single_grid_matrix",
    "synchronizing_threshold",
]
