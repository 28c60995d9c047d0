# scenario/loader.py
"""
Loading of scenario documents (TOML).

    [topology]
    labels = ["A", "B"]
    [[topology.edges]]
    from = "A"
    to = "B"
    T = 1.0

    [params]            # scalar or one value per node
    M = 1.0
    D = 3.0
    T_mains = 1.0

    [sim]
    dt = 0.01
    steps = 500
    method = "rk4"      # or "euler"
    reinit_period = 10.0
    seed = 0
    save_every = 1
    omega = 0.0
    initial = "random"  # "zero", or give f0 / P0 lists

    [disturbance]
    k_tilde = 2.0
    xi = 1.0
    shape = "paper_sinusoid"   # "identity", "clipped_linear"
    additive = false

    [rescale]
    f_nominal = 50.0
    f_span = 0.1
    p_nominal = 30.0
    p_span = 2.0
    normalize = true

Bundled scenarios live in `scenario/data/` and load by bare name.
"""
from __future__ import annotations

import logging
import re
import tomllib
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from grid.models import Topology, TopologyError
from scenario.models import InitialState, Scenario, ScenarioError
from simulation.models import (
    DisturbanceShape,
    IntegrationMethod,
    RescaleSpec,
    SectorDisturbance,
    SimConfig,
    SimulationError,
)

logger = logging.getLogger(__name__)

_LINE_PATTERN = re.compile(r"line (\d+)")

_ALLOWED_KEYS: dict[str, set[str]] = {
    "": {"name", "topology", "params", "sim", "disturbance", "rescale"},
    "topology": {"labels", "edges"},
    "params": {"M", "D", "T_mains"},
    "sim": {"dt", "steps", "method", "reinit_period", "seed", "save_every", "omega", "initial", "f0", "P0"},
    "disturbance": {"k_tilde", "xi", "shape", "additive"},
    "rescale": {"f_nominal", "f_span", "p_nominal", "p_span", "normalize"},
}


# =============================================================================
# Bundled scenarios
# =============================================================================

def bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    data = resources.files("scenario") / "data"
    return sorted(entry.name.removesuffix(".toml") for entry in data.iterdir() if entry.name.endswith(".toml"))


def _read_reference(ref: str | Path) -> tuple[str, str]:
    """(name, text) for a file path or a bundled scenario name."""
    path = Path(ref)
    if path.is_file():
        return path.stem, path.read_text(encoding="utf-8")

    name = str(ref).removesuffix(".toml")
    if name in bundled_scenarios():
        resource = resources.files("scenario") / "data" / f"{name}.toml"
        return name, resource.read_text(encoding="utf-8")

    raise FileNotFoundError(f"scenario not found: {ref} (bundled: {', '.join(bundled_scenarios())})")


def load_scenario(ref: str | Path) -> Scenario:
    """
    Load and validate a scenario from a path or bundled name.

    Raises:
        FileNotFoundError: If neither a file nor a bundled scenario matches.
        ScenarioError: On syntax errors (with line) or invalid content (with field).
    """
    name, text = _read_reference(ref)
    scenario = parse_scenario(text, name=name)
    logger.debug("loaded scenario %s: %d nodes, %d edges", scenario.name, scenario.topology.node_count,
                 len(scenario.topology.edges))
    return scenario


def nigeria_topology() -> Topology:
    """The bundled 11-node Nigerian interconnection."""
    return load_scenario("nigeria").topology


# =============================================================================
# Parsing
# =============================================================================

def parse_scenario(text: str, name: str = "<string>") -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        if line is None:
            match = _LINE_PATTERN.search(str(exc))
            line = int(match.group(1)) if match else None
        raise ScenarioError(f"invalid TOML: {exc}", line=line) from exc

    _check_keys(doc, "")
    topology = _parse_topology(_table(doc, "topology", required=True))
    n = topology.node_count

    params = _table(doc, "params")
    inertias = _per_node(params.get("M", 1.0), n, "params.M")
    dampings = _per_node(params.get("D", 1.0), n, "params.D")
    mains = _per_node(params.get("T_mains", 1.0), n, "params.T_mains")

    sim_table = _table(doc, "sim")
    rescale = _parse_rescale(doc)
    sim = _parse_sim(sim_table, rescale)
    initial, f0, p0 = _parse_initial(sim_table)
    disturbance = _parse_disturbance(doc)

    return Scenario(
        name=str(doc.get("name", name)),
        topology=topology,
        inertias=inertias,
        dampings=dampings,
        mains_coupling=mains,
        sim=sim,
        disturbance=disturbance,
        initial=initial,
        f0=f0,
        p0=p0,
    )


def _table(doc: dict[str, Any], key: str, required: bool = False) -> dict[str, Any]:
    if key not in doc:
        if required:
            raise ScenarioError("missing table", field=key)
        return {}
    table = doc[key]
    if not isinstance(table, dict):
        raise ScenarioError("expected a table", field=key)
    _check_keys(table, key)
    return table


def _check_keys(table: dict[str, Any], section: str) -> None:
    unknown = set(table) - _ALLOWED_KEYS[section]
    if unknown:
        where = f"{section}." if section else ""
        raise ScenarioError("unknown key", field=where + sorted(unknown)[0])


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"expected a number, got {value!r}", field=field)
    return float(value)


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"expected an integer, got {value!r}", field=field)
    return value


def _values(value: Any, field: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise ScenarioError("expected a list of numbers", field=field)
    return tuple(_number(v, f"{field}[{k}]") for k, v in enumerate(value))


def _per_node(value: Any, n: int, field: str) -> tuple[float, ...]:
    if isinstance(value, list):
        if len(value) != n:
            raise ScenarioError(f"expected {n} values (one per node), got {len(value)}", field=field)
        return tuple(_number(v, f"{field}[{k}]") for k, v in enumerate(value))
    return (_number(value, field),) * n


def _parse_topology(table: dict[str, Any]) -> Topology:
    labels = table.get("labels")
    if not isinstance(labels, list) or not all(isinstance(label, str) for label in labels):
        raise ScenarioError("expected a list of node labels", field="topology.labels")

    edges: list[tuple[str, str, float]] = []
    for k, raw in enumerate(table.get("edges", [])):
        where = f"topology.edges[{k}]"
        if not isinstance(raw, dict):
            raise ScenarioError("expected a table with from/to/T", field=where)
        extra = set(raw) - {"from", "to", "T"}
        if extra:
            raise ScenarioError("unknown key", field=f"{where}.{sorted(extra)[0]}")
        endpoints = []
        for end in ("from", "to"):
            label = raw.get(end)
            if label not in labels:
                raise ScenarioError(f"unknown node label {label!r}", field=f"{where}.{end}")
            endpoints.append(label)
        edges.append((endpoints[0], endpoints[1], _number(raw.get("T", 1.0), f"{where}.T")))

    try:
        return Topology.from_edges(labels, edges)
    except TopologyError as exc:
        raise ScenarioError(str(exc), field="topology") from exc


def _parse_sim(table: dict[str, Any], rescale: Optional[RescaleSpec]) -> SimConfig:
    defaults = SimConfig()
    method = table.get("method", defaults.method.value)
    try:
        method = IntegrationMethod(method)
    except ValueError:
        raise ScenarioError(f"unknown method {method!r} (euler or rk4)", field="sim.method") from None

    reinit = table.get("reinit_period")
    try:
        return SimConfig(
            dt=_number(table.get("dt", defaults.dt), "sim.dt"),
            steps=_integer(table.get("steps", defaults.steps), "sim.steps"),
            method=method,
            reinit_period=None if reinit is None else _number(reinit, "sim.reinit_period"),
            seed=_integer(table.get("seed", defaults.seed), "sim.seed"),
            rescale=rescale,
            save_every=_integer(table.get("save_every", defaults.save_every), "sim.save_every"),
            omega=_number(table.get("omega", defaults.omega), "sim.omega"),
        )
    except SimulationError as exc:
        raise ScenarioError(str(exc), field="sim") from exc


def _parse_initial(table: dict[str, Any]) -> tuple[InitialState, Optional[tuple[float, ...]], Optional[tuple[float, ...]]]:
    f0 = table.get("f0")
    p0 = table.get("P0")
    if f0 is not None or p0 is not None:
        if f0 is None or p0 is None:
            raise ScenarioError("f0 and P0 must be given together", field="sim.f0" if f0 is None else "sim.P0")
        if "initial" in table and table["initial"] != InitialState.EXPLICIT.value:
            raise ScenarioError("explicit f0/P0 conflict with initial", field="sim.initial")
        return InitialState.EXPLICIT, _values(f0, "sim.f0"), _values(p0, "sim.P0")

    initial = table.get("initial", InitialState.RANDOM.value)
    try:
        kind = InitialState(initial)
    except ValueError:
        raise ScenarioError(f"unknown initial state {initial!r} (random or zero)", field="sim.initial") from None
    if kind == InitialState.EXPLICIT:
        raise ScenarioError("explicit initial state needs f0 and P0", field="sim.initial")
    return kind, None, None


def _parse_disturbance(doc: dict[str, Any]) -> Optional[SectorDisturbance]:
    if "disturbance" not in doc:
        return None
    table = _table(doc, "disturbance")
    shape = table.get("shape", DisturbanceShape.PAPER_SINUSOID.value)
    try:
        shape = DisturbanceShape(shape)
    except ValueError:
        raise ScenarioError(f"unknown shape {shape!r}", field="disturbance.shape") from None
    additive = table.get("additive", False)
    if not isinstance(additive, bool):
        raise ScenarioError("expected true or false", field="disturbance.additive")
    try:
        return SectorDisturbance(
            k_tilde=_number(table.get("k_tilde", 2.0), "disturbance.k_tilde"),
            xi=_number(table.get("xi", 1.0), "disturbance.xi"),
            shape=shape,
            additive=additive,
        )
    except SimulationError as exc:
        raise ScenarioError(str(exc), field="disturbance") from exc


def _parse_rescale(doc: dict[str, Any]) -> Optional[RescaleSpec]:
    if "rescale" not in doc:
        return None
    table = _table(doc, "rescale")
    defaults = RescaleSpec()
    normalize = table.get("normalize", defaults.normalize)
    if not isinstance(normalize, bool):
        raise ScenarioError("expected true or false", field="rescale.normalize")
    try:
        return RescaleSpec(
            f_nominal=_number(table.get("f_nominal", defaults.f_nominal), "rescale.f_nominal"),
            f_span=_number(table.get("f_span", defaults.f_span), "rescale.f_span"),
            p_nominal=_number(table.get("p_nominal", defaults.p_nominal), "rescale.p_nominal"),
            p_span=_number(table.get("p_span", defaults.p_span), "rescale.p_span"),
            normalize=normalize,
        )
    except SimulationError as exc:
        raise ScenarioError(str(exc), field="rescale") from exc
