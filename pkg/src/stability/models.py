# stability/models.py
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from classify.models import GridParams
from classify.single import quadratic_roots, single_grid_matrix

# |Delta(s)| at or below this counts as a pole hit.
POLE_TOL = 1e-14

# Minimum eigenvalues within this of zero are neither a pass nor a violation.
MIN_EIG_TOL = 1e-12


# =============================================================================
# Exceptions
# =============================================================================

class StabilityError(ValueError):
    """Invalid input to the absolute-stability checks."""
    pass


class PoleProximityError(StabilityError):
    """Transfer function evaluated at (or numerically on) a pole."""

    def __init__(self, s: complex, delta: complex) -> None:
        self.s = s
        self.delta = delta
        super().__init__(f"s={s} is within {POLE_TOL:g} of a pole (|Delta|={abs(delta):.3g})")


# =============================================================================
# Loop description
# =============================================================================

@dataclass(frozen=True)
class LureSystem:
    """
    Single grid in feedback with a sector nonlinearity psi, K = k I.

        x' = A x + B u,  y = C^T x,  u = -psi(y)

    with A = [[-D/M, 1/M], [-T, 0]], B = Diag(1, T), C = I.
    """
    params: GridParams
    k: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and self.k >= 0):
            raise StabilityError(f"sector gain k must be a nonnegative finite number, got {self.k}")
        if any(pole.real >= 0 for pole in self.poles()):
            raise StabilityError(f"A is not Hurwitz for {self.params}")

    @property
    def state_matrix(self) -> np.ndarray:
        return single_grid_matrix(self.params)

    @property
    def input_matrix(self) -> np.ndarray:
        return np.diag([1.0, self.params.T])

    @property
    def output_matrix(self) -> np.ndarray:
        return np.eye(2)

    def poles(self) -> tuple[complex, complex]:
        """Closed-form roots of s^2 + (D/M) s + T/M."""
        return quadratic_roots(self.params.damping_ratio, self.params.coupling_ratio)


# =============================================================================
# Report
# =============================================================================

class SprVerdict(str, Enum):
    SPR = "strictly_positive_real"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class FrequencySample(NamedTuple):
    omega: float
    min_eig: float   # smallest eigenvalue of H(omega) = Z(j omega) + Z(j omega)^*
    trace: float     # z11 + z22 from the closed forms


@dataclass(frozen=True)
class SprReport:
    """Outcome of the three strict-positive-realness checks on a frequency grid."""
    system: LureSystem
    hurwitz: bool
    poles: tuple[complex, complex]
    samples: tuple[FrequencySample, ...]
    limit_ok: bool          # Z(inf) + Z(inf)^T = 2I
    verdict: SprVerdict
    violation_omega: Optional[float] = None

    @property
    def freq_sweep(self) -> list[tuple[float, float]]:
        return [(s.omega, s.min_eig) for s in self.samples]

    @property
    def trace_values(self) -> list[tuple[float, float]]:
        return [(s.omega, s.trace) for s in self.samples]

    @property
    def margin(self) -> float:
        """Smallest minimum eigenvalue over the grid."""
        return min(s.min_eig for s in self.samples)

    @property
    def trace_positive(self) -> bool:
        return all(s.trace > 0 for s in self.samples)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "omega": [s.omega for s in self.samples],
                "min_eig": [s.min_eig for s in self.samples],
                "trace": [s.trace for s in self.samples],
            }
        )

    def write_csv(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.9g", lineterminator="\n")
        return path

    def summary(self) -> str:
        p = self.system.params
        head = f"{_VERDICT_LABELS[self.verdict]} (M={p.M:g}, D={p.D:g}, T={p.T:g}, k={self.system.k:g})"
        if self.violation_omega is not None:
            head += f" at omega={self.violation_omega:.6g}"
        poles = ", ".join(_format_pole(pole) for pole in self.poles)
        return (
            f"{head}: margin={self.margin:.6g} over {len(self.samples)} points, "
            f"poles=[{poles}], hurwitz={'yes' if self.hurwitz else 'no'}, "
            f"limit 2I={'ok' if self.limit_ok else 'failed'}, "
            f"trace positive={'yes' if self.trace_positive else 'no'}"
        )


_VERDICT_LABELS = {
    SprVerdict.SPR: "StrictlyPositiveReal",
    SprVerdict.VIOLATED: "Violated",
    SprVerdict.INCONCLUSIVE: "Inconclusive",
}


def _format_pole(pole: complex) -> str:
    if pole.imag == 0:
        return f"{pole.real:.6g}"
    sign = "+" if pole.imag > 0 else "-"
    return f"{pole.real:.6g}{sign}{abs(pole.imag):.6g}i"
