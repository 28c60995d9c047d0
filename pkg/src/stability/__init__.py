"""
Absolute stability of a single grid under sector-bounded measurement disturbances.
"""

from .models import (
    MIN_EIG_TOL,
    POLE_TOL,
    FrequencySample,
    LureSystem,
    PoleProximityError,
    SprReport,
    SprVerdict,
    StabilityError,
)
from .spr import check_spr, in_sector, log_omega_grid
from .transfer import (
    characteristic,
    hermitian_eigenvalues,
    hermitian_part,
    transfer_G,
    transfer_G_generic,
    transfer_G_polynomials,
    transfer_Z,
    z_closed_forms,
    z_limit,
)

__all__ = [
    "MIN_EIG_TOL",
    "POLE_TOL",
    "FrequencySample",
    "LureSystem",
    "PoleProximityError",
    "SprReport",
    "SprVerdict",
    "StabilityError",
    "characteristic",
    "check_spr",
    "hermitian_eigenvalues",
    "hermitian_part",
    "in_sector",
    "log_omega_grid",
    "transfer_G",
    "transfer_G_generic",
    "transfer_G_polynomials",
    "transfer_Z",
    "z_closed_forms",
    "z_limit",
]
