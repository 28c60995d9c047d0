# simulation/export.py
from __future__ import annotations

import logging
from pathlib import Path

from simulation.models import SimResult

logger = logging.getLogger(__name__)

# 9 significant digits
CSV_FLOAT_FORMAT = "%.9g"


def write_csv(result: SimResult, path: Path | str) -> Path:
    """Write `t,f_<label>...,P_<label>...`, one row per saved sample."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    result.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.debug("wrote %d samples x %d nodes to %s", len(result.times), result.n, path)
    return path
