"""
Network state-space assembly and fixed-step simulation.
"""

from .assemble import assemble, assemble_single, matrix_exponential_solution
from .disturbance import apply_sector, network_rhs, satisfies_sector, sinusoid_gain
from .engine import energy_diagnostics, random_initial_state, run_sweep, simulate
from .export import write_csv
from .integrators import euler_step, get_stepper, rk4_step
from .models import (
    DIVERGENCE_LIMIT,
    DisturbanceShape,
    EnergySample,
    IntegrationMethod,
    NetworkSystem,
    NonFiniteStateError,
    RescaleSpec,
    SectorDisturbance,
    SimConfig,
    SimResult,
    SimulationError,
    SweepJob,
    Units,
)
from .rescale import apply_rescale, minmax_normalize, to_physical

__all__ = [
    "DIVERGENCE_LIMIT",
    "DisturbanceShape",
    "EnergySample",
    "IntegrationMethod",
    "NetworkSystem",
    "NonFiniteStateError",
    "RescaleSpec",
    "SectorDisturbance",
    "SimConfig",
    "SimResult",
    "SimulationError",
    "SweepJob",
    "Units",
    "apply_rescale",
    "apply_sector",
    "assemble",
    "assemble_single",
    "energy_diagnostics",
    "euler_step",
    "get_stepper",
    "matrix_exponential_solution",
    "minmax_normalize",
    "network_rhs",
    "random_initial_state",
    "rk4_step",
    "run_sweep",
    "satisfies_sector",
    "simulate",
    "sinusoid_gain",
    "to_physical",
    "write_csv",
]
