# simulation/integrators.py
"""Fixed-step one-step integrators for x' = f(t, x)."""
from __future__ import annotations

from typing import Callable

import numpy as np

from simulation.models import IntegrationMethod

RightHandSide = Callable[[float, np.ndarray], np.ndarray]
Stepper = Callable[[RightHandSide, float, np.ndarray, float], np.ndarray]


def euler_step(f: RightHandSide, t: float, x: np.ndarray, dt: float) -> np.ndarray:
    return x + dt * f(t, x)


def rk4_step(f: RightHandSide, t: float, x: np.ndarray, dt: float) -> np.ndarray:
    half = 0.5 * dt
    k1 = f(t, x)
    k2 = f(t + half, x + half * k1)
    k3 = f(t + half, x + half * k2)
    k4 = f(t + dt, x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


STEPPERS: dict[IntegrationMethod, Stepper] = {
    IntegrationMethod.EULER: euler_step,
    IntegrationMethod.RK4: rk4_step,
}


def get_stepper(method: IntegrationMethod) -> Stepper:
    return STEPPERS[method]
