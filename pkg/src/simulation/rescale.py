# simulation/rescale.py
"""Mapping of normalized trajectories to physical units (Hz, MWh)."""
from __future__ import annotations

import logging

import numpy as np

from simulation.models import RescaleSpec, SimResult, SimulationError, Units

logger = logging.getLogger(__name__)


def minmax_normalize(block: np.ndarray) -> np.ndarray:
    """
    Min-max normalize a whole trajectory block (all nodes, all samples) into [0, 1].

    A constant block maps to 0.5, the band midpoint.
    """
    block = np.asarray(block, dtype=float)
    lo = float(block.min())
    hi = float(block.max())
    if hi <= lo:
        return np.full_like(block, 0.5)
    return (block - lo) / (hi - lo)


def to_physical(values: np.ndarray, nominal: float, span: float) -> np.ndarray:
    """nominal + span * (v - 0.5): 0 -> nominal - span/2, 1 -> nominal + span/2."""
    return nominal + span * (np.asarray(values, dtype=float) - 0.5)


def apply_rescale(result: SimResult, spec: RescaleSpec) -> SimResult:
    """
    Rescale a normalized result into physical units.

    Raises:
        SimulationError: If the result is already in physical units.
    """
    if result.units == Units.PHYSICAL:
        raise SimulationError("result is already in physical units")

    f = result.frequencies
    p = result.powers
    if spec.normalize:
        f = minmax_normalize(f)
        p = minmax_normalize(p)

    frequencies = to_physical(f, spec.f_nominal, spec.f_span)
    powers = to_physical(p, spec.p_nominal, spec.p_span)
    outside = _count_outside(frequencies, spec.frequency_band) + _count_outside(powers, spec.power_band)
    if outside:
        logger.debug("%d rescaled samples lie outside the nominal bands", outside)

    return SimResult(
        times=result.times,
        frequencies=frequencies,
        powers=powers,
        units=Units.PHYSICAL,
        labels=result.labels,
    )


def _count_outside(values: np.ndarray, band: tuple[float, float]) -> int:
    lo, hi = band
    # rounding slack of the affine map
    tol = 1e-12 * max(abs(lo), abs(hi))
    return int(np.sum((values < lo - tol) | (values > hi + tol)))
