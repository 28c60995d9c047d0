# classify/single.py
"""
Closed-form transient classification of a single micro-grid.

The grid against the mains obeys x' = A x with
    A = [[-D/M, 1/M], [-T, 0]],
whose eigenvalues are 1/2 (-D/M +- sqrt((D/M)^2 - 4 T/M)). The sign of the
discriminant splits the parameter space into an overdamped region
(D > 2 sqrt(T M), asymptotically stable node) and an underdamped one
(D < 2 sqrt(T M), asymptotically stable spiral).
"""
from __future__ import annotations

import math

import numpy as np

from classify.models import (
    BOUNDARY_RTOL,
    ClassificationError,
    GridParams,
    PlanarKind,
    TransientClass,
    TransientKind,
)

PLANAR_TOL = 1e-12


def single_grid_matrix(p: GridParams) -> np.ndarray:
    """State matrix A of one grid against the mains."""
    return np.array([[-p.D / p.M, 1.0 / p.M], [-p.T, 0.0]])


def damping_threshold(M: float, T: float) -> float:
    """Damping above which the grid is overdamped: 2 sqrt(T M)."""
    return 2.0 * math.sqrt(T * M)


def synchronizing_threshold(M: float, D: float) -> float:
    """Synchronizing coefficient below which the grid is overdamped: D^2 / (4 M)."""
    return D * D / (4.0 * M)


def quadratic_roots(b: float, c: float) -> tuple[complex, complex]:
    """
    Roots of lambda^2 + b lambda + c = 0, '+' root first.

    The discriminant sign picks the branch, so no square root of a negative
    number is ever taken.
    """
    disc = b * b - 4.0 * c
    if disc >= 0.0:
        root = math.sqrt(disc)
        return complex((-b + root) / 2.0, 0.0), complex((-b - root) / 2.0, 0.0)
    imag = math.sqrt(-disc) / 2.0
    return complex(-b / 2.0, imag), complex(-b / 2.0, -imag)


def classify_single(p: GridParams) -> TransientClass:
    """
    Classify the transient of one grid as node, spiral or boundary.

    Examples:
        >>> classify_single(GridParams(M=1, D=3, T=1)).kind
        <TransientKind.NODE: 'asymptotically_stable_node'>
        >>> classify_single(GridParams(M=1, D=1, T=1)).eigenvalues[0]
        (-0.5+0.8660254037844386j)
    """
    threshold = damping_threshold(p.M, p.T)
    eigenvalues = quadratic_roots(p.damping_ratio, p.coupling_ratio)

    if abs(p.D - threshold) <= BOUNDARY_RTOL * threshold:
        kind = TransientKind.BOUNDARY
    elif p.D > threshold:
        kind = TransientKind.NODE
    else:
        kind = TransientKind.SPIRAL

    return TransientClass(kind=kind, eigenvalues=eigenvalues, damping_threshold=threshold)


def classify_planar(A: np.ndarray) -> PlanarKind:
    """
    Place a 2x2 real system in the trace-determinant plane.

    Ties (det = 0, tr = 0, or tr^2 = 4 det within tolerance) are reported as
    DEGENERATE.
    """
    a = np.asarray(A, dtype=float)
    if a.shape != (2, 2):
        raise ClassificationError(f"expected a 2x2 matrix, got shape {a.shape}")

    tr = float(a[0, 0] + a[1, 1])
    det = float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    scale = max(1.0, abs(tr) ** 2, abs(4.0 * det))

    if abs(det) <= PLANAR_TOL:
        return PlanarKind.DEGENERATE
    if det < 0.0:
        return PlanarKind.SADDLE
    if abs(tr) <= PLANAR_TOL:
        return PlanarKind.DEGENERATE  # center

    gap = tr * tr - 4.0 * det
    if abs(gap) <= PLANAR_TOL * scale:
        return PlanarKind.DEGENERATE
    if tr < 0.0:
        return PlanarKind.STABLE_NODE if gap > 0.0 else PlanarKind.STABLE_SPIRAL
    return PlanarKind.UNSTABLE_NODE if gap > 0.0 else PlanarKind.UNSTABLE_SPIRAL
