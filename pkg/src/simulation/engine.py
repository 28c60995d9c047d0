# simulation/engine.py
"""
Fixed-step simulation of the network swing dynamics.

A run is a plain state recurrence: one stepper call per step, optional
re-randomization of the state every `reinit_steps` steps, sampling every
`save_every` steps. Independent runs share nothing and can be fanned out
with `run_sweep`.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from simulation.disturbance import OmegaInput, network_rhs
from simulation.integrators import get_stepper
from simulation.models import (
    DIVERGENCE_LIMIT,
    EnergySample,
    NetworkSystem,
    NonFiniteStateError,
    SectorDisturbance,
    SimConfig,
    SimResult,
    SimulationError,
    SweepJob,
    Units,
)
from simulation.rescale import apply_rescale

logger = logging.getLogger(__name__)

# Second stream of the run seed, reserved for reinitialization draws.
_REINIT_STREAM = 1


def random_initial_state(n: int, seed: int) -> np.ndarray:
    """Uniform [0, 1] draw per normalized (f, P) component."""
    return np.random.default_rng(seed).uniform(0.0, 1.0, size=2 * n)


def _check_state(x: np.ndarray, step: int) -> None:
    if not np.all(np.isfinite(x)) or float(np.max(np.abs(x))) > DIVERGENCE_LIMIT:
        raise NonFiniteStateError(step)


def simulate(
    system: NetworkSystem,
    x0: np.ndarray,
    config: SimConfig,
    dist: Optional[SectorDisturbance] = None,
    omega_fn: Optional[OmegaInput] = None,
) -> SimResult:
    """
    Integrate the (possibly disturbed) network from x0.

    Args:
        system: Assembled network.
        x0: Initial state (f_1..f_n, P_1..P_n), normalized units.
        config: Step size, horizon, method, reinitialization and rescale.
        dist: Optional sector disturbance in the loop.
        omega_fn: Optional time-varying exogenous input; overrides config.omega.

    Returns:
        SimResult with row 0 equal to x0 (rescaled when config.rescale is set).

    Raises:
        SimulationError: If x0 has the wrong shape or is not finite.
        NonFiniteStateError: With the first step whose state diverged.
    """
    n = system.n
    x = np.array(x0, dtype=float)
    if x.shape != (2 * n,):
        raise SimulationError(f"x0 must have {2 * n} entries, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise SimulationError("x0 must be finite")

    rhs = network_rhs(system, dist, omega=config.omega, omega_fn=omega_fn)
    step_fn = get_stepper(config.method)
    dt = config.dt
    reinit_every = config.reinit_steps
    reinit_rng = np.random.default_rng([config.seed, _REINIT_STREAM])

    samples = config.steps // config.save_every + 1
    times = np.empty(samples)
    states = np.empty((samples, 2 * n))
    times[0] = 0.0
    states[0] = x
    row = 1

    logger.debug(
        "simulating n=%d for %d steps (dt=%g, %s, reinit every %s steps, disturbance=%s)",
        n, config.steps, dt, config.method.value, reinit_every,
        None if dist is None else dist.shape.value,
    )

    for step in range(1, config.steps + 1):
        x = step_fn(rhs, (step - 1) * dt, x, dt)
        _check_state(x, step)
        if reinit_every is not None and step % reinit_every == 0:
            x = reinit_rng.uniform(0.0, 1.0, size=2 * n)
            logger.debug("reinitialized state at step %d", step)
        if step % config.save_every == 0:
            times[row] = step * dt
            states[row] = x
            row += 1

    result = SimResult(
        times=times,
        frequencies=states[:, :n].copy(),
        powers=states[:, n:].copy(),
        units=Units.NORMALIZED,
        labels=system.labels,
    )
    if config.rescale is not None:
        result = apply_rescale(result, config.rescale)
    return result


def energy_diagnostics(result: SimResult, system: NetworkSystem) -> list[EnergySample]:
    """
    Total power 1^T P(t) per sample.

    Constant along undisturbed runs with symmetric coupling (1^T L = 0), and
    piecewise constant when the state is reinitialized.

    Raises:
        SimulationError: On physical units or a node-count mismatch.
    """
    if result.units != Units.NORMALIZED:
        raise SimulationError("energy diagnostics need a result in normalized units")
    if result.n != system.n:
        raise SimulationError(f"result has {result.n} nodes, system has {system.n}")
    totals = result.powers.sum(axis=1)
    return [EnergySample(float(t), float(total)) for t, total in zip(result.times, totals)]


def run_sweep(jobs: Sequence[SweepJob], max_workers: Optional[int] = None) -> list[SimResult]:
    """
    Run independent simulations in parallel, results in input order.

    Every job carries its own seeded configuration, so the output does not
    depend on scheduling.
    """
    if not jobs:
        return []

    def _run(job: SweepJob) -> SimResult:
        logger.debug("sweep job %s started", job.name or "<unnamed>")
        return simulate(job.system, job.x0, job.config, job.disturbance)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_run, jobs))
