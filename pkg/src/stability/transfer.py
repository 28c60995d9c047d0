# stability/transfer.py
"""
Loop transfer functions of the single-grid Lur'e system.

    G(s) = C^T (sI - A)^{-1} B = (1/Delta) [[s, T/M], [-T, (s + D/M) T]]
    Delta(s) = s (s + D/M) + T/M
    Z(s) = I + k G(s)
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve

from classify.models import GridParams
from classify.single import single_grid_matrix
from stability.models import POLE_TOL, LureSystem, PoleProximityError


def characteristic(p: GridParams, s: complex) -> complex:
    """Delta(s) = det(sI - A)."""
    return s * (s + p.damping_ratio) + p.coupling_ratio


def transfer_G(p: GridParams, s: complex) -> np.ndarray:
    """
    Closed-form G(s).

    Raises:
        PoleProximityError: If |Delta(s)| <= POLE_TOL.
    """
    s = complex(s)
    delta = characteristic(p, s)
    if abs(delta) <= POLE_TOL:
        raise PoleProximityError(s, delta)
    numerator = np.array(
        [
            [s, p.coupling_ratio],
            [-p.T, (s + p.damping_ratio) * p.T],
        ],
        dtype=complex,
    )
    return numerator / delta


def transfer_G_polynomials(p: GridParams) -> tuple[np.ndarray, np.ndarray]:
    """
    G(s) as matrix polynomial over scalar polynomial, highest power first.

    Returns (N, den) with N of shape (3, 2, 2) and den = [1, D/M, T/M]:
    G(s) = (N[0] s^2 + N[1] s + N[2]) / (s^2 + (D/M) s + T/M).
    """
    N = np.zeros((3, 2, 2))
    N[1] = [[1.0, 0.0], [0.0, p.T]]
    N[2] = [[0.0, p.coupling_ratio], [-p.T, p.damping_ratio * p.T]]
    den = np.array([1.0, p.damping_ratio, p.coupling_ratio])
    return N, den


def z_limit(system: LureSystem) -> np.ndarray:
    """Z(inf) = I + k N[0] / den[0], exact from the leading coefficients."""
    N, den = transfer_G_polynomials(system.params)
    return np.eye(2) + system.k * N[0] / den[0]


def transfer_G_generic(p: GridParams, s: complex) -> np.ndarray:
    """G(s) by a dense complex solve of (sI - A) X = B; cross-check for the closed form."""
    s = complex(s)
    delta = characteristic(p, s)
    if abs(delta) <= POLE_TOL:
        raise PoleProximityError(s, delta)
    A = single_grid_matrix(p).astype(complex)
    B = np.diag([1.0, p.T]).astype(complex)
    C = np.eye(2, dtype=complex)
    X = solve(s * np.eye(2) - A, B)
    return C.T @ X


def transfer_Z(system: LureSystem, s: complex) -> np.ndarray:
    """Z(s) = I + k G(s)."""
    return np.eye(2, dtype=complex) + system.k * transfer_G(system.params, s)


def hermitian_part(Z: np.ndarray) -> np.ndarray:
    """
    H = Z + Z^* (twice the Hermitian part).

    The diagonal is forced real and the off-diagonal entries conjugate so H is
    exactly Hermitian.
    """
    H = Z + Z.conj().T
    out = np.empty((2, 2), dtype=complex)
    out[0, 0] = H[0, 0].real
    out[1, 1] = H[1, 1].real
    out[0, 1] = H[0, 1]
    out[1, 0] = np.conj(H[0, 1])
    return out


def hermitian_eigenvalues(H: np.ndarray) -> tuple[float, float]:
    """Closed-form (ascending) eigenvalues of a 2x2 Hermitian matrix."""
    a = float(H[0, 0].real)
    d = float(H[1, 1].real)
    mean = 0.5 * (a + d)
    radius = float(np.hypot(0.5 * (a - d), abs(H[0, 1])))
    return mean - radius, mean + radius


def z_closed_forms(system: LureSystem, omega: float) -> tuple[float, float]:
    """
    |Delta(j omega)|^2 times the diagonal of H(omega).

        z11 = 2 [(w^2 - T/M)^2 + w^2 (D/M)(D/M + k)]
        z22 = 2 [(w^2 - T/M)^2 + w^2 (D/M)^2 + (T/M) k T (D/M)]
    """
    p = system.params
    a = p.damping_ratio
    c = p.coupling_ratio
    k = system.k
    w2 = omega * omega
    base = (w2 - c) ** 2
    z11 = 2.0 * (base + w2 * a * (a + k))
    z22 = 2.0 * (base + w2 * a * a + c * k * p.T * a)
    return z11, z22

