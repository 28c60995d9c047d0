# classify/models.py
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

# Relative band around a threshold that is reported as a tie instead of
# silently picking a side.
BOUNDARY_RTOL = 1e-9


class ClassificationError(ValueError):
    """Invalid input to a transient classification."""
    pass


# =============================================================================
# Parameters
# =============================================================================

@dataclass(frozen=True)
class GridParams:
    """Per-unit physical constants of one micro-grid and its line to the mains/neighbor."""
    M: float  # inertia
    D: float  # damping
    T: float  # synchronizing coefficient

    def __post_init__(self) -> None:
        for name in ("M", "D", "T"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ClassificationError(f"{name} must be a positive finite number, got {value}")

    @property
    def damping_ratio(self) -> float:
        """D/M."""
        return self.D / self.M

    @property
    def coupling_ratio(self) -> float:
        """T/M."""
        return self.T / self.M


# =============================================================================
# Single grid
# =============================================================================

class TransientKind(str, Enum):
    NODE = "asymptotically_stable_node"
    SPIRAL = "asymptotically_stable_spiral"
    BOUNDARY = "boundary"


class PlanarKind(str, Enum):
    """Placement of a 2x2 system in the trace-determinant plane."""
    STABLE_NODE = "stable_node"
    STABLE_SPIRAL = "stable_spiral"
    UNSTABLE_NODE = "unstable_node"
    UNSTABLE_SPIRAL = "unstable_spiral"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class TransientClass:
    """Transient behavior of a single grid against the mains."""
    kind: TransientKind
    eigenvalues: tuple[complex, complex]
    damping_threshold: float  # 2 sqrt(T M)

    @property
    def slowest_rate(self) -> float:
        """Smallest |Re(lambda)|; 1/slowest_rate is the dominant time constant."""
        return min(abs(lam.real) for lam in self.eigenvalues)

    @property
    def oscillation_frequency(self) -> float:
        """|Im(lambda)| in rad per unit time, 0 for a node."""
        return max(abs(lam.imag) for lam in self.eigenvalues)


# =============================================================================
# Networks
# =============================================================================

class NetworkVerdict(str, Enum):
    ALL_REAL_GUARANTEED = "all_real_guaranteed"
    COMPLEX_MODE_EXISTS = "complex_mode_exists"
    INDETERMINATE = "indeterminate"


_VERDICT_LABELS: dict[NetworkVerdict, str] = {
    NetworkVerdict.ALL_REAL_GUARANTEED: "AllRealGuaranteed",
    NetworkVerdict.COMPLEX_MODE_EXISTS: "ComplexModeExists",
    NetworkVerdict.INDETERMINATE: "Indeterminate",
}


class DampingBounds(NamedTuple):
    """Damping thresholds from the maximal degree."""
    no_oscillation: float  # sqrt(8 d_max): all modes real at or above
    oscillation: float     # sqrt(4 d_max): some mode complex at or below


class ConsensusPoint(NamedTuple):
    f_star: float
    p_star: float


@dataclass(frozen=True)
class NetworkMode:
    """Roots of lambda^2 + lambda D + mu~ = 0 for one Laplacian eigenvalue mu~."""
    mu: float  # Laplacian eigenvalue mu~_i (the negative-Laplacian eigenvalue is -mu)
    lam_plus: complex
    lam_minus: complex
    discriminant: float  # D^2 - 4 mu~

    @property
    def is_real(self) -> bool:
        return self.lam_plus.imag == 0.0 and self.lam_minus.imag == 0.0


@dataclass(frozen=True)
class NetworkClass:
    """
    Network eigenstructure and damping verdict.

    `overall` is the bound-based verdict when d_max is known (falling back to
    the exact answer when it is not); `all_real` is always the exact answer
    from the per-mode discriminants.
    """
    per_mode: tuple[NetworkMode, ...]
    overall: NetworkVerdict
    all_real: bool
    damping: float
    d_max: Optional[int] = None
    bounds: Optional[DampingBounds] = None

    def eigenvalues(self) -> list[complex]:
        """The 2n system eigenvalues lambda_i^+, lambda_i^- in mode order."""
        out: list[complex] = []
        for mode in self.per_mode:
            out.extend((mode.lam_plus, mode.lam_minus))
        return out

    def describe(self) -> str:
        """
        One-line verdict, e.g. "AllRealGuaranteed (D=6 ≥ √32≈5.657)".
        """
        exact = "AllReal" if self.all_real else "ComplexModeExists"
        label = _VERDICT_LABELS[self.overall]
        if self.bounds is None or self.d_max is None:
            return f"{label} (by inspection, D={self.damping:g})"

        no_osc = _format_root(8 * self.d_max, self.bounds.no_oscillation)
        osc = _format_root(4 * self.d_max, self.bounds.oscillation)
        if self.overall == NetworkVerdict.ALL_REAL_GUARANTEED:
            return f"{label} (D={self.damping:g} ≥ {no_osc})"
        if self.overall == NetworkVerdict.COMPLEX_MODE_EXISTS:
            return f"{label} (D={self.damping:g} ≤ {osc})"
        return f"{label} ({osc} < D={self.damping:g} < {no_osc}); by inspection: {exact}"


def _format_root(radicand: int, value: float) -> str:
    """'4' for sqrt(16), '√32≈5.657' for sqrt(32)."""
    root = math.isqrt(radicand)
    if root * root == radicand:
        return str(root)
    return f"√{radicand}≈{value:.3f}"
