# grid/laplacian.py
"""
Laplacian construction and spectra for micro-grid interconnection graphs.

This module handles:
  - Unit and T-weighted Laplacians built from a Topology
  - The inertia-weighted form Diag(1/M) L used for grids with different
    inertia but a common damping/inertia ratio
  - Spectra via the cyclic Jacobi solver (weighted Laplacians are solved on
    the similar symmetric matrix Diag(M^-1/2) L Diag(M^-1/2))
  - The degree bracket d_max <= mu_max <= 2 d_max
"""
from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from grid.jacobi import jacobi_eigenvalues
from grid.models import (
    ROW_SUM_TOL,
    DegreeBounds,
    LaplacianError,
    LaplacianMatrix,
    Spectrum,
    SpectrumSource,
    Topology,
    Weighting,
)

logger = logging.getLogger(__name__)


def build_laplacian(topo: Topology, weights: Weighting = Weighting.UNIT) -> LaplacianMatrix:
    """
    Build the graph Laplacian of a topology.

    l_ij = -1 (UNIT) or -T_ij (FROM_T) for every edge, the diagonal holds the
    (weighted) degree, zeros elsewhere. The result is symmetric with zero row
    sums.
    """
    n = topo.node_count
    entries = np.zeros((n, n), dtype=float)
    for edge in topo.edges:
        w = 1.0 if weights == Weighting.UNIT else edge.T
        entries[edge.i, edge.j] -= w
        entries[edge.j, edge.i] -= w
    np.fill_diagonal(entries, -entries.sum(axis=1))

    laplacian = LaplacianMatrix(entries=entries, weighting=weights)
    _check_row_sums(laplacian)
    return laplacian


def weighted_laplacian(L: LaplacianMatrix, inertias: Sequence[float]) -> LaplacianMatrix:
    """
    Scale the rows of L by 1/M_i, giving Diag(1/M) L.

    Row sums stay zero; the matrix is no longer symmetric unless all inertias
    are equal.
    """
    if L.is_weighted:
        raise LaplacianError("Laplacian is already inertia-weighted")
    if len(inertias) != L.n:
        raise LaplacianError(f"expected {L.n} inertias, got {len(inertias)}")
    m = np.asarray(inertias, dtype=float)
    for k, value in enumerate(m):
        if not (np.isfinite(value) and value > 0):
            raise LaplacianError(f"inertia of node {k} must be finite and positive, got {value}")

    weighted = LaplacianMatrix(
        entries=L.entries / m[:, None],
        weighting=L.weighting,
        inertias=tuple(float(v) for v in m),
    )
    _check_row_sums(weighted)
    return weighted


def symmetrized(L: LaplacianMatrix) -> np.ndarray:
    """
    Symmetric matrix with the same spectrum as L.

    For Diag(1/M) L this is Diag(M^1/2) (Diag(1/M) L) Diag(M^-1/2)
    = Diag(M^-1/2) L Diag(M^-1/2). Unweighted inputs are returned as-is and
    must already be symmetric.
    """
    if L.inertias is None:
        if not L.is_symmetric():
            raise LaplacianError("non-symmetric Laplacian that is not flagged as inertia-weighted")
        return np.array(L.entries)
    root = np.sqrt(np.asarray(L.inertias, dtype=float))
    similar = root[:, None] * L.entries / root[None, :]
    return 0.5 * (similar + similar.T)


def spectrum(L: LaplacianMatrix) -> Spectrum:
    """
    All eigenvalues of L in ascending order.

    Note that these are the eigenvalues of L itself; the network modes use
    mu_i = -mu~_i, the eigenvalues of -L, and flip the sign themselves.
    """
    eigenvalues = jacobi_eigenvalues(symmetrized(L))
    source = (
        SpectrumSource.WEIGHTED_LAPLACIAN if L.is_weighted else SpectrumSource.UNWEIGHTED_LAPLACIAN
    )
    result = Spectrum(eigenvalues=tuple(float(mu) for mu in eigenvalues), source=source)

    if result.zero_multiplicity > 1:
        logger.warning(
            "Laplacian has %d zero eigenvalues: graph is disconnected, consensus results do not apply",
            result.zero_multiplicity,
        )
    return result


def degree_bounds(topo: Topology) -> DegreeBounds:
    """Return (d_max, d_max, 2 d_max), the bracket containing the largest unit-Laplacian eigenvalue."""
    d_max = max(topo.degrees())
    return DegreeBounds(d_max=d_max, lower=float(d_max), upper=float(2 * d_max))


def _check_row_sums(L: LaplacianMatrix) -> None:
    worst = float(np.max(np.abs(L.row_sums())))
    if not worst <= ROW_SUM_TOL * max(1.0, float(np.max(np.abs(L.entries)))):
        raise LaplacianError(f"Laplacian row sums deviate from zero by {worst:.3e}")
