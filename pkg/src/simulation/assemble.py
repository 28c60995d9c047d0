# simulation/assemble.py
"""
Assembly of the network state matrix.

    [f']   [ -Diag(D_i/M_i)  Diag(1/M_i) ] [f]
    [P'] = [ -L               0           ] [P]

with L the T-weighted Laplacian of the interconnection topology.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from classify.models import GridParams
from classify.single import single_grid_matrix
from grid.laplacian import build_laplacian
from grid.models import ZERO_EIGENVALUE_TOL, Topology, Weighting
from simulation.models import NetworkSystem, SimulationError

logger = logging.getLogger(__name__)


def _per_node(values: Sequence[float] | float, n: int, name: str) -> tuple[float, ...]:
    if isinstance(values, (int, float)):
        values = [float(values)] * n
    if len(values) != n:
        raise SimulationError(f"expected {n} values for {name}, got {len(values)}")
    out = tuple(float(v) for v in values)
    for k, value in enumerate(out):
        if not (math.isfinite(value) and value > 0):
            raise SimulationError(f"{name} of node {k} must be positive, got {value}")
    return out


def assemble(topo: Topology, M: Sequence[float] | float, D: Sequence[float] | float) -> NetworkSystem:
    """
    Build the 2n x 2n network system.

    Args:
        topo: Interconnection topology (edge T values enter the Laplacian).
        M: Inertia per node, or one value for all.
        D: Damping per node, or one value for all.

    Raises:
        SimulationError: On dimension mismatch or nonpositive parameters.
    """
    n = topo.node_count
    inertias = _per_node(M, n, "inertia")
    dampings = _per_node(D, n, "damping")

    L = build_laplacian(topo, Weighting.FROM_T).entries
    m = np.asarray(inertias)
    d = np.asarray(dampings)

    A = np.zeros((2 * n, 2 * n))
    A[:n, :n] = -np.diag(d / m)
    A[:n, n:] = np.diag(1.0 / m)
    A[n:, :n] = -L

    system = NetworkSystem(
        topology=topo,
        inertias=inertias,
        dampings=dampings,
        coupling=np.array(L),
        state_matrix=A,
    )
    _check_spectrum(system)
    return system


def assemble_single(p: GridParams, label: str = "grid") -> NetworkSystem:
    """
    One grid against the mains with the mains frequency fixed at 0.

    The state matrix reduces to A = [[-D/M, 1/M], [-T, 0]].
    """
    return NetworkSystem(
        topology=Topology(node_labels=(label,)),
        inertias=(p.M,),
        dampings=(p.D,),
        coupling=np.array([[p.T]]),
        state_matrix=single_grid_matrix(p),
        mains_coupling=p.T,
    )


def _check_spectrum(system: NetworkSystem) -> None:
    """Log when the assembled matrix lacks the single zero / stable structure."""
    eigenvalues = np.linalg.eigvals(system.state_matrix)
    zeros = int(np.sum(np.abs(eigenvalues) <= ZERO_EIGENVALUE_TOL))
    unstable = int(np.sum(eigenvalues.real > ZERO_EIGENVALUE_TOL))

    if unstable:
        logger.warning("assembled system has %d eigenvalue(s) with positive real part", unstable)
    if zeros != system.topology.component_count():
        logger.warning(
            "assembled system has %d zero eigenvalue(s) for %d component(s)",
            zeros,
            system.topology.component_count(),
        )
    elif zeros > 1:
        logger.warning("topology is disconnected (%d components): no single consensus value", zeros)


def matrix_exponential_solution(system: NetworkSystem, x0: np.ndarray, t: float) -> np.ndarray:
    """Exact undisturbed state at time t: expm(A t) x0 (scaling and squaring)."""
    return expm(system.state_matrix * t) @ np.asarray(x0, dtype=float)
