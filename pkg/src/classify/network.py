# classify/network.py
"""
Spectral factorization of homogeneous micro-grid networks.

With M = T = 1 (or a common ratio D = D_i/M_i on the inertia-weighted
Laplacian), the 2n x 2n network matrix splits into n planar blocks, one per
Laplacian eigenvalue mu~_i, with characteristic polynomial
    lambda^2 + D lambda + mu~_i = 0.
A mode oscillates iff D^2 < 4 mu~_i, and the degree bracket
d_max <= mu~_max <= 2 d_max turns that into damping bounds:
    D >= sqrt(8 d_max)  -> every mode real
    D <= sqrt(4 d_max)  -> some mode complex (graph with at least one edge)
In between only the actual spectrum decides.
"""
from __future__ import annotations

import logging
import math
from typing import Optional, Sequence

from classify.models import (
    BOUNDARY_RTOL,
    ClassificationError,
    ConsensusPoint,
    DampingBounds,
    NetworkClass,
    NetworkMode,
    NetworkVerdict,
)
from classify.single import quadratic_roots
from grid.models import Spectrum

logger = logging.getLogger(__name__)


def damping_bounds(d_max: int) -> DampingBounds:
    """Return (sqrt(8 d_max), sqrt(4 d_max))."""
    if d_max < 1:
        raise ClassificationError(f"d_max must be >= 1, got {d_max}")
    return DampingBounds(no_oscillation=math.sqrt(8 * d_max), oscillation=math.sqrt(4 * d_max))


def _mode(mu: float, D: float) -> NetworkMode:
    disc = D * D - 4.0 * mu
    if abs(disc) <= BOUNDARY_RTOL * D * D:
        # critically damped: double real root
        lam = complex(-D / 2.0, 0.0)
        return NetworkMode(mu=mu, lam_plus=lam, lam_minus=lam, discriminant=disc)
    lam_plus, lam_minus = quadratic_roots(D, mu)
    return NetworkMode(mu=mu, lam_plus=lam_plus, lam_minus=lam_minus, discriminant=disc)


def network_modes(spec: Spectrum, D: float, d_max: Optional[int] = None) -> NetworkClass:
    """
    Pair every Laplacian eigenvalue with its two system eigenvalues.

    Args:
        spec: Laplacian spectrum (unit-weighted, or inertia-weighted when the
            grids share a common D_i/M_i ratio).
        D: Damping (or the common damping/inertia ratio).
        d_max: Maximal node degree; enables the bound-based verdict. Only
            meaningful for unit-weighted spectra.

    Returns:
        NetworkClass with per-mode roots, the overall verdict and the exact
        all-real answer.
    """
    if not (math.isfinite(D) and D > 0):
        raise ClassificationError(f"damping must be positive, got {D}")

    modes = tuple(_mode(mu, D) for mu in spec.eigenvalues)
    all_real = all(mode.is_real for mode in modes)

    bounds: Optional[DampingBounds] = None
    if d_max is None:
        overall = NetworkVerdict.ALL_REAL_GUARANTEED if all_real else NetworkVerdict.COMPLEX_MODE_EXISTS
    else:
        bounds = damping_bounds(d_max)
        if D >= bounds.no_oscillation:
            overall = NetworkVerdict.ALL_REAL_GUARANTEED
        elif D <= bounds.oscillation:
            overall = NetworkVerdict.COMPLEX_MODE_EXISTS
        else:
            overall = NetworkVerdict.INDETERMINATE
            logger.info(
                "D=%g lies between the damping bounds %.4f and %.4f; resolved by inspection: %s",
                D,
                bounds.oscillation,
                bounds.no_oscillation,
                "all real" if all_real else "complex mode present",
            )

        if (overall == NetworkVerdict.ALL_REAL_GUARANTEED and not all_real) or (
            overall == NetworkVerdict.COMPLEX_MODE_EXISTS and all_real
        ):
            logger.warning(
                "damping bound verdict %s disagrees with the spectrum (d_max=%d); "
                "the spectrum is probably not from a unit-weighted Laplacian",
                overall.value,
                d_max,
            )

    return NetworkClass(
        per_mode=modes,
        overall=overall,
        all_real=all_real,
        damping=D,
        d_max=d_max,
        bounds=bounds,
    )


def common_damping_ratio(inertias: Sequence[float], dampings: Sequence[float]) -> float:
    """
    The shared ratio D_i/M_i of a network, or ClassificationError if the grids differ.

    Networks with different inertia but a common ratio are classified on the
    inertia-weighted Laplacian with this ratio as damping.
    """
    if len(inertias) != len(dampings) or not inertias:
        raise ClassificationError("inertia and damping lists must be nonempty and of equal length")
    ratios = [d / m for m, d in zip(inertias, dampings)]
    first = ratios[0]
    for k, ratio in enumerate(ratios):
        if abs(ratio - first) > BOUNDARY_RTOL * abs(first):
            raise ClassificationError(
                f"damping/inertia ratio of node {k} is {ratio:g}, expected {first:g}: "
                "network is not homogeneous"
            )
    return first


def predict_consensus(initial_power: Sequence[float], D: float) -> ConsensusPoint:
    """
    Equilibrium reached by a connected network with M = T = 1.

    Total power 1'P is conserved (1'L = 0), so the powers agree on their
    initial mean p*; at equilibrium P = D f, hence f* = p* / D.
    """
    if not (math.isfinite(D) and D > 0):
        raise ClassificationError(f"damping must be positive, got {D}")
    if len(initial_power) == 0:
        raise ClassificationError("initial_power must be nonempty")
    p_star = math.fsum(initial_power) / len(initial_power)
    return ConsensusPoint(f_star=p_star / D, p_star=p_star)
