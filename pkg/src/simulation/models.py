# simulation/models.py
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from grid.models import Topology

# States beyond this magnitude count as divergence.
DIVERGENCE_LIMIT = 1e12


# =============================================================================
# Exceptions
# =============================================================================

class SimulationError(ValueError):
    """Invalid system, configuration or result for the simulation engine."""
    pass


class NonFiniteStateError(ArithmeticError):
    """The integrated state diverged (non-finite or beyond DIVERGENCE_LIMIT)."""

    def __init__(self, step: int, message: str | None = None) -> None:
        self.step = step
        super().__init__(message or f"state diverged at step {step}")


# =============================================================================
# Enums
# =============================================================================

class IntegrationMethod(str, Enum):
    EULER = "euler"  # explicit Euler, matches the reference campaigns
    RK4 = "rk4"      # classical fourth-order Runge-Kutta (default)


class DisturbanceShape(str, Enum):
    IDENTITY = "identity"
    PAPER_SINUSOID = "paper_sinusoid"   # gain 1 + sin(xi f t) in [0, 2]
    CLIPPED_LINEAR = "clipped_linear"   # same gain clipped into [0, k_tilde]


class Units(str, Enum):
    NORMALIZED = "normalized"
    PHYSICAL = "physical"


# =============================================================================
# Configuration
# =============================================================================

@dataclass(frozen=True)
class RescaleSpec:
    """
    Affine map from normalized [0, 1] states to physical units.

    0 maps to nominal - span/2 and 1 to nominal + span/2, i.e. the defaults give
    [49.95, 50.05] Hz and [29, 31] MWh. With `normalize` each trajectory block
    is first min-max normalized over the run into [0, 1].
    """
    f_nominal: float = 50.0   # Hz
    f_span: float = 0.1       # Hz
    p_nominal: float = 30.0   # MWh
    p_span: float = 2.0       # MWh
    normalize: bool = False

    def __post_init__(self) -> None:
        if not (self.f_span > 0 and self.p_span > 0):
            raise SimulationError("rescale spans must be strictly positive")

    @property
    def frequency_band(self) -> tuple[float, float]:
        return (self.f_nominal - self.f_span / 2.0, self.f_nominal + self.f_span / 2.0)

    @property
    def power_band(self) -> tuple[float, float]:
        return (self.p_nominal - self.p_span / 2.0, self.p_nominal + self.p_span / 2.0)


@dataclass(frozen=True)
class SectorDisturbance:
    """
    Time-varying measurement disturbance psi(v, t) in the feedback loop.

    `additive` switches the sinusoid to the literal v + 1 + sin(xi f t) form,
    which is not a sector nonlinearity (psi(0) != 0) and exists only to
    replicate figures.
    """
    k_tilde: float
    xi: float
    shape: DisturbanceShape = DisturbanceShape.PAPER_SINUSOID
    additive: bool = False

    def __post_init__(self) -> None:
        if not (self.k_tilde > 0 and self.xi > 0):
            raise SimulationError("k_tilde and xi must be positive")
        if self.shape == DisturbanceShape.IDENTITY and self.k_tilde < 1.0:
            raise SimulationError("identity disturbance needs k_tilde >= 1 to stay in the sector")
        if self.shape == DisturbanceShape.PAPER_SINUSOID and not self.additive and self.k_tilde < 2.0:
            raise SimulationError("sinusoid disturbance needs k_tilde >= 2 to stay in the sector")
        if self.additive and self.shape != DisturbanceShape.PAPER_SINUSOID:
            raise SimulationError("the additive variant only exists for the paper_sinusoid shape")

    @property
    def is_identity(self) -> bool:
        return self.shape == DisturbanceShape.IDENTITY


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration settings."""
    dt: float = 0.01
    steps: int = 500
    method: IntegrationMethod = IntegrationMethod.RK4
    reinit_period: Optional[float] = None  # seconds between state re-randomization
    seed: int = 0
    rescale: Optional[RescaleSpec] = None
    save_every: int = 1
    omega: float = 0.0  # constant exogenous input to the frequency dynamics

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise SimulationError(f"dt must be positive, got {self.dt}")
        if self.steps < 1:
            raise SimulationError(f"steps must be >= 1, got {self.steps}")
        if self.reinit_period is not None and not self.reinit_period >= self.dt:
            raise SimulationError(
                f"reinit_period ({self.reinit_period}) must be at least dt ({self.dt})"
            )
        if self.save_every < 1:
            raise SimulationError(f"save_every must be >= 1, got {self.save_every}")

    @property
    def horizon(self) -> float:
        return self.dt * self.steps

    @property
    def reinit_steps(self) -> Optional[int]:
        """Steps between reinitializations, or None."""
        if self.reinit_period is None:
            return None
        return max(1, int(round(self.reinit_period / self.dt)))


# =============================================================================
# System and result
# =============================================================================

@dataclass(frozen=True, eq=False)
class NetworkSystem:
    """
    Assembled network x' = A x with x = (f_1..f_n, P_1..P_n).

    A = [[-Diag(D/M), Diag(1/M)], [-L, 0]] with L the T-weighted Laplacian.
    For the single grid against the mains (`mains_coupling` set) the lower
    left block is -T instead.
    """
    topology: Topology
    inertias: tuple[float, ...]
    dampings: tuple[float, ...]
    coupling: np.ndarray        # n x n block that multiplies f in P' (L, or [[T]] vs mains)
    state_matrix: np.ndarray    # 2n x 2n
    mains_coupling: Optional[float] = None

    def __post_init__(self) -> None:
        self.coupling.setflags(write=False)
        self.state_matrix.setflags(write=False)

    @property
    def n(self) -> int:
        return self.topology.node_count

    @property
    def labels(self) -> tuple[str, ...]:
        return self.topology.node_labels

    def own_block(self) -> np.ndarray:
        """Part of A acting on each node's own (f_i, P_i): the entries psi passes through."""
        n = self.n
        own = np.zeros_like(self.state_matrix)
        own[:n, :] = self.state_matrix[:n, :]
        own[n:, :n] = -np.diag(np.diag(self.coupling))
        return own

    def neighbor_block(self) -> np.ndarray:
        """Off-diagonal Laplacian coupling, left undisturbed."""
        n = self.n
        neighbor = np.zeros_like(self.state_matrix)
        neighbor[n:, :n] = -(self.coupling - np.diag(np.diag(self.coupling)))
        return neighbor


class EnergySample(NamedTuple):
    t: float
    total_power: float


@dataclass(frozen=True, eq=False)
class SimResult:
    """Sampled trajectories; row 0 is the initial condition."""
    times: np.ndarray
    frequencies: np.ndarray  # samples x n
    powers: np.ndarray       # samples x n
    units: Units
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return int(self.frequencies.shape[1])

    def states(self) -> np.ndarray:
        """samples x 2n array of (f, P)."""
        return np.hstack([self.frequencies, self.powers])

    def terminal_state(self) -> np.ndarray:
        return self.states()[-1]

    def to_frame(self) -> pd.DataFrame:
        """Columns t, f_<label>..., P_<label>..."""
        data: dict[str, np.ndarray] = {"t": self.times}
        for k, label in enumerate(self.labels):
            data[f"f_{label}"] = self.frequencies[:, k]
        for k, label in enumerate(self.labels):
            data[f"P_{label}"] = self.powers[:, k]
        return pd.DataFrame(data)


@dataclass(frozen=True, eq=False)
class SweepJob:
    """One independent run of a parameter sweep."""
    system: NetworkSystem
    x0: np.ndarray
    config: SimConfig
    disturbance: Optional[SectorDisturbance] = None
    name: str = ""
