# scenario/models.py
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from classify.models import GridParams
from grid.models import Topology
from simulation.assemble import assemble, assemble_single
from simulation.engine import random_initial_state
from simulation.models import NetworkSystem, RescaleSpec, SectorDisturbance, SimConfig


class ScenarioError(ValueError):
    """
    Scenario document that fails to parse or validate.

    `line` is set for syntax errors, `field` names the offending entry
    (e.g. "params.D[2]").
    """

    def __init__(self, message: str, *, line: Optional[int] = None, field: Optional[str] = None) -> None:
        self.line = line
        self.field = field
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"{field}: "
        super().__init__(prefix + message)


class InitialState(str, Enum):
    RANDOM = "random"      # uniform [0, 1] per component, drawn from the run seed
    ZERO = "zero"
    EXPLICIT = "explicit"  # f0 / P0 given in the document


@dataclass(frozen=True)
class Scenario:
    """A topology, its per-node physics, and how to run it."""
    name: str
    topology: Topology
    inertias: tuple[float, ...]
    dampings: tuple[float, ...]
    mains_coupling: tuple[float, ...]   # T of each grid against the mains
    sim: SimConfig = field(default_factory=SimConfig)
    disturbance: Optional[SectorDisturbance] = None
    initial: InitialState = InitialState.RANDOM
    f0: Optional[tuple[float, ...]] = None
    p0: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        n = self.topology.node_count
        for name, values in (("M", self.inertias), ("D", self.dampings), ("T_mains", self.mains_coupling)):
            if len(values) != n:
                raise ScenarioError(f"expected {n} values, got {len(values)}", field=f"params.{name}")
            for k, value in enumerate(values):
                if not (math.isfinite(value) and value > 0):
                    raise ScenarioError(
                        f"node {self.topology.node_labels[k]} must have a positive value, got {value}",
                        field=f"params.{name}[{k}]",
                    )
        if self.initial == InitialState.EXPLICIT:
            for name, values in (("f0", self.f0), ("P0", self.p0)):
                if values is None or len(values) != n:
                    raise ScenarioError(f"explicit initial state needs {n} values", field=f"sim.{name}")
                if not all(math.isfinite(v) for v in values):
                    raise ScenarioError("initial state must be finite", field=f"sim.{name}")

    @property
    def rescale(self) -> Optional[RescaleSpec]:
        return self.sim.rescale

    @property
    def is_single_grid(self) -> bool:
        return self.topology.node_count == 1

    def grid_params(self, node: int) -> GridParams:
        """(M, D, T) of one grid against the mains."""
        return GridParams(M=self.inertias[node], D=self.dampings[node], T=self.mains_coupling[node])

    def is_homogeneous(self) -> bool:
        """Same M and D everywhere and unit coupling: the setting of the closed-form network modes."""
        return (
            len(set(self.inertias)) == 1
            and len(set(self.dampings)) == 1
            and self.topology.is_unit_weighted()
        )

    def with_damping(self, D: float) -> Scenario:
        return replace(self, dampings=(float(D),) * self.topology.node_count)

    def with_sim(self, **changes: object) -> Scenario:
        return replace(self, sim=replace(self.sim, **changes))

    def system(self) -> NetworkSystem:
        """Network system, or the grid-vs-mains reduction for one node."""
        if self.is_single_grid:
            return assemble_single(self.grid_params(0), label=self.topology.node_labels[0])
        return assemble(self.topology, self.inertias, self.dampings)

    def initial_state(self) -> np.ndarray:
        n = self.topology.node_count
        if self.initial == InitialState.ZERO:
            return np.zeros(2 * n)
        if self.initial == InitialState.EXPLICIT:
            assert self.f0 is not None and self.p0 is not None
            return np.array(self.f0 + self.p0, dtype=float)
        return random_initial_state(n, self.sim.seed)
