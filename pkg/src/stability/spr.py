# stability/spr.py
"""Numerical strict-positive-realness check of Z(s) on a frequency grid."""
from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from simulation.disturbance import satisfies_sector
from stability.models import (
    MIN_EIG_TOL,
    FrequencySample,
    LureSystem,
    SprReport,
    SprVerdict,
    StabilityError,
)
from stability.transfer import hermitian_eigenvalues, hermitian_part, transfer_Z, z_closed_forms, z_limit

logger = logging.getLogger(__name__)

DEFAULT_OMEGA_MIN = 1e-3
DEFAULT_OMEGA_MAX = 1e3
DEFAULT_OMEGA_POINTS = 200


def log_omega_grid(
    omega_min: float = DEFAULT_OMEGA_MIN,
    omega_max: float = DEFAULT_OMEGA_MAX,
    points: int = DEFAULT_OMEGA_POINTS,
) -> np.ndarray:
    """Logarithmically spaced frequencies in [omega_min, omega_max]."""
    if not (0 < omega_min < omega_max) or not math.isfinite(omega_max):
        raise StabilityError(f"need 0 < omega_min < omega_max, got {omega_min}, {omega_max}")
    if points < 2:
        raise StabilityError(f"need at least 2 grid points, got {points}")
    return np.logspace(math.log10(omega_min), math.log10(omega_max), points)


def _validate_grid(omega_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(omega_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise StabilityError("omega grid must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(grid)) or np.any(grid <= 0):
        raise StabilityError("omega grid must be finite and strictly positive")
    if np.any(np.diff(grid) <= 0):
        raise StabilityError("omega grid must be strictly increasing")
    return grid


def check_spr(system: LureSystem, omega_grid: Sequence[float]) -> SprReport:
    """
    Verify the three SPR conditions for Z(s) = I + k G(s).

    1. Hurwitz: closed-form poles of s^2 + (D/M) s + T/M.
    2. H(omega) = Z(j omega) + Z(j omega)^* positive definite at every grid
       point, tested by its minimum eigenvalue. The trace quantity z11 + z22
       is recorded alongside.
    3. Z(inf) + Z(inf)^T = 2I, with Z(inf) taken from the leading
       coefficients of G (strictly proper G leaves only the identity).

    A failed check yields a VIOLATED verdict; a minimum eigenvalue within
    MIN_EIG_TOL of zero (and no violation) yields INCONCLUSIVE.
    """
    grid = _validate_grid(omega_grid)
    poles = system.poles()
    hurwitz = all(pole.real < 0 for pole in poles)

    H_inf = hermitian_part(z_limit(system))
    limit_ok = bool(np.allclose(H_inf, 2.0 * np.eye(2), rtol=0.0, atol=MIN_EIG_TOL))

    samples: list[FrequencySample] = []
    for omega in grid:
        H = hermitian_part(transfer_Z(system, 1j * omega))
        lo, _ = hermitian_eigenvalues(H)
        z11, z22 = z_closed_forms(system, float(omega))
        samples.append(FrequencySample(omega=float(omega), min_eig=lo, trace=z11 + z22))

    verdict = SprVerdict.SPR
    violation_omega = None
    if not hurwitz or not limit_ok:
        verdict = SprVerdict.VIOLATED
    else:
        for sample in samples:
            if sample.min_eig < -MIN_EIG_TOL:
                verdict = SprVerdict.VIOLATED
                violation_omega = sample.omega
                break
            if sample.min_eig <= MIN_EIG_TOL:
                verdict = SprVerdict.INCONCLUSIVE

    report = SprReport(
        system=system,
        hurwitz=hurwitz,
        poles=poles,
        samples=tuple(samples),
        limit_ok=limit_ok,
        verdict=verdict,
        violation_omega=violation_omega,
    )
    if report.trace_positive and verdict != SprVerdict.SPR:
        logger.warning(
            "trace criterion is positive on the whole grid but the minimum eigenvalue is not (%s)",
            report.summary(),
        )
    logger.debug("SPR sweep over %d points: margin %.6g", len(samples), report.margin)
    return report


def in_sector(psi_values: Sequence[float], v: Sequence[float], k: float) -> bool:
    """Symmetric sector condition psi(v) (k v - psi(v)) >= 0 for every sample."""
    if k < 0:
        raise StabilityError(f"sector slope must be nonnegative, got {k}")
    return satisfies_sector(np.asarray(psi_values), np.asarray(v), k)
