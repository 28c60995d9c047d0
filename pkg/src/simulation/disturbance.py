# simulation/disturbance.py
"""
Sector disturbances on the measured frequency and power of each grid.

The disturbed per-node dynamics are

    f_i' = -(D_i/M_i) psi(f_i) + psi(P_i)/M_i + omega
    P_i' = -L_ii psi(f_i) - sum_{j != i} L_ij f_j

i.e. psi acts on the signals feeding a node's own dynamics while the coupling
to the neighbors stays undisturbed. The gain of node i is driven by its own
(normalized) frequency f_i:

    PAPER_SINUSOID   psi(v, t) = (1 + sin(xi f_i t)) v           gain in [0, 2]
    CLIPPED_LINEAR   psi(v, t) = clip(1 + sin(xi f_i t), 0, k) v  gain in [0, k]
    IDENTITY         psi(v, t) = v
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from simulation.integrators import RightHandSide
from simulation.models import DisturbanceShape, NetworkSystem, SectorDisturbance

OmegaInput = Callable[[float], float]


def sinusoid_gain(dist: SectorDisturbance, f: np.ndarray, t: float) -> np.ndarray:
    """1 + sin(xi f t), per node."""
    return 1.0 + np.sin(dist.xi * f * t)


def apply_sector(dist: SectorDisturbance, x: np.ndarray, n: int, t: float) -> np.ndarray:
    """
    psi applied to a stacked (f, P) state; node i's gain scales f_i and P_i.
    """
    if dist.is_identity:
        return x
    gain = sinusoid_gain(dist, x[:n], t)
    if dist.shape == DisturbanceShape.CLIPPED_LINEAR:
        gain = np.clip(gain, 0.0, dist.k_tilde)

    both = np.concatenate([gain, gain])
    if dist.additive:
        return x + both
    return both * x


def satisfies_sector(psi_values: np.ndarray, v: np.ndarray, k_tilde: float, tol: float = 1e-12) -> bool:
    """
    Symmetric sector check psi(v) (k v - psi(v)) >= 0, elementwise.

    This is the standard two-sided reading of 0 <= psi(v) <= k v: for v < 0 the
    bounds flip to k v <= psi(v) <= 0.
    """
    psi_values = np.asarray(psi_values, dtype=float)
    v = np.asarray(v, dtype=float)
    return bool(np.all(psi_values * (k_tilde * v - psi_values) >= -tol))


def network_rhs(
    system: NetworkSystem,
    dist: Optional[SectorDisturbance] = None,
    omega: float = 0.0,
    omega_fn: Optional[OmegaInput] = None,
) -> RightHandSide:
    """
    Right-hand side of the (possibly disturbed) network dynamics.

    The undisturbed system runs through the same split own/neighbor
    evaluation with psi the identity, so an IDENTITY disturbance gives the
    same floating-point trajectory.
    """
    n = system.n
    own = np.array(system.own_block())
    neighbor = np.array(system.neighbor_block())
    drive = np.zeros(2 * n)
    drive[:n] = 1.0

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        psi_x = x if dist is None else apply_sector(dist, x, n, t)
        w = omega if omega_fn is None else omega_fn(t)
        return own @ psi_x + neighbor @ x + w * drive

    return rhs
