# grid/jacobi.py
"""
Cyclic Jacobi eigenvalue solver for small dense symmetric matrices.

Each sweep visits every off-diagonal pair (p, q) once and applies the plane
rotation that zeroes a[p, q]. Sweeps stop once the off-diagonal Frobenius norm
drops below `tol` (scaled by the matrix norm when that exceeds 1), or after
`max_sweeps` sweeps.

The Laplacians this toolkit works with are at most a few hundred nodes, so the
O(n^3)-per-sweep cost is irrelevant next to the robustness of the method.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from grid.models import LaplacianError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 100


def off_diagonal_norm(a: np.ndarray) -> float:
    """Frobenius norm of the strictly off-diagonal part."""
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigenvalues(
    matrix: np.ndarray,
    *,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> np.ndarray:
    """
    Eigenvalues of a real symmetric matrix, sorted ascending.

    Args:
        matrix: Square symmetric matrix (not modified).
        tol: Off-diagonal Frobenius norm at which a sweep sequence stops.
        max_sweeps: Upper bound on the number of cyclic sweeps.

    Returns:
        1-D array of eigenvalues in ascending order.

    Raises:
        LaplacianError: If the matrix is not square or not symmetric.
    """
    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LaplacianError(f"Jacobi solver needs a square matrix, got shape {a.shape}")

    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-10 * scale):
        raise LaplacianError("Jacobi solver needs a symmetric matrix")
    a = 0.5 * (a + a.T)

    threshold = tol * scale
    if n == 1 or off_diagonal_norm(a) < threshold:
        return np.sort(np.diag(a))

    for sweep in range(1, max_sweeps + 1):
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q

        off = off_diagonal_norm(a)
        logger.debug("Jacobi sweep %d: off-diagonal norm %.3e", sweep, off)
        if off < threshold:
            break
    else:
        logger.warning(
            "Jacobi solver did not reach off-diagonal norm %.1e within %d sweeps (n=%d)",
            threshold,
            max_sweeps,
            n,
        )

    return np.sort(np.diag(a))
