#!/usr/bin/env python3
"""
Micro-grid transient toolkit: main entry point.

Classifies, simulates and certifies micro-grid networks described by scenario
files (bundled: nigeria, two_grid, chain3, single_grid).

Usage:
    microgrid classify --scenario nigeria --damping 1 3 6
    microgrid spectrum --scenario nigeria
    microgrid simulate --scenario nigeria --damping 1,3,6 --out results
    microgrid spr-check --M 1 --D 1 --T 1 --k 2
    microgrid replicate-paper --out results

Configuration (environment variables):
    LOG_LEVEL               - "info" (default) or "debug"
    MICROGRID_SEED          - Seed overriding the scenario's (optional)
    MICROGRID_OUTPUT_DIR    - Directory for CSV output          (default: results)
    MICROGRID_OMEGA_MIN     - Lowest frequency of the SPR sweep  (default: 1e-3)
    MICROGRID_OMEGA_MAX     - Highest frequency of the SPR sweep (default: 1e3)
    MICROGRID_OMEGA_POINTS  - Number of log-spaced sweep points  (default: 200)

Exit codes:
    0  success
    1  the analysis found a violation (SPR not certified, diverging run)
    2  input error (bad scenario, invalid parameter, missing file)

Debug Mode (LOG_LEVEL=debug):
    Analysis objects are dumped to debug/ as JSON:
      - scenario-{timestamp}.json   : The parsed Scenario
      - network-D{value}-{timestamp}.json : NetworkClass per damping value
      - spr-k{value}-{timestamp}.json     : SprReport
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields, is_dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

# Optional dotenv support for local development
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

from classify.models import ClassificationError, GridParams, NetworkClass
from classify.network import common_damping_ratio, network_modes
from classify.single import classify_single
from grid.laplacian import build_laplacian, degree_bounds, spectrum, weighted_laplacian
from grid.models import Spectrum, Weighting
from scenario.loader import load_scenario
from scenario.models import Scenario
from simulation.assemble import assemble_single
from simulation.engine import random_initial_state, run_sweep
from simulation.export import write_csv
from simulation.models import (
    DisturbanceShape,
    IntegrationMethod,
    NonFiniteStateError,
    RescaleSpec,
    SectorDisturbance,
    SimConfig,
    SweepJob,
)
from stability.models import LureSystem, SprVerdict
from stability.spr import check_spr, log_omega_grid

logger = logging.getLogger("main")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2

# Sector slope covering the sinusoidal gain 1 + sin(.) in [0, 2].
SINUSOID_SECTOR_SLOPE = 2.0


# =============================================================================
# Environment Variable Configuration
# =============================================================================

def _read_config() -> dict:
    """Read configuration from environment variables.

    Returns:
        Dict with keys: log_level, seed (None when unset), output_dir,
        omega_min, omega_max, omega_points.
    """
    seed = os.getenv("MICROGRID_SEED", "").strip()
    return {
        "log_level": os.getenv("LOG_LEVEL", "info").strip().lower(),
        "seed": int(seed) if seed else None,
        "output_dir": Path(os.getenv("MICROGRID_OUTPUT_DIR", "results").strip()),
        "omega_min": float(os.getenv("MICROGRID_OMEGA_MIN", "1e-3")),
        "omega_max": float(os.getenv("MICROGRID_OMEGA_MAX", "1e3")),
        "omega_points": int(os.getenv("MICROGRID_OMEGA_POINTS", "200")),
    }


def _configure_logging(log_level: str) -> None:
    level = logging.DEBUG if log_level == "debug" else getattr(logging, log_level.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


# =============================================================================
# Debug Output Helpers
# =============================================================================

def _serialize_for_debug(obj: Any) -> Any:
    """
    Recursively serialize an object to JSON-compatible format.

    Handles dataclasses, enums, numpy arrays, complex numbers and nested
    structures.
    """
    if obj is None:
        return None
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return _serialize_for_debug(obj.tolist())
    if isinstance(obj, np.generic):
        return _serialize_for_debug(obj.item())
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _serialize_for_debug(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _serialize_for_debug(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_serialize_for_debug(item) for item in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _dump_debug_object(obj: Any, name: str, debug_dir: Path, timestamp: str) -> None:
    """
    Dump an object to a JSON file in the debug directory.

    Args:
        obj: Object to serialize and dump
        name: Name identifier for the file (e.g., "scenario", "spr-k1")
        debug_dir: Directory to write debug files
        timestamp: Timestamp string for filename (format: YYYYMMDD-HHMMSS)
    """
    debug_dir.mkdir(parents=True, exist_ok=True)
    filepath = debug_dir / f"{name}-{timestamp}.json"
    try:
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(_serialize_for_debug(obj), f, indent=2, default=str)
        logger.debug("dumped %s to %s", name, filepath)
    except (OSError, TypeError, ValueError) as e:
        logger.warning("failed to dump %s: %s", name, e)


@dataclass
class DebugSink:
    """Dumps objects when enabled; a no-op otherwise."""
    enabled: bool = False
    directory: Path = Path("debug")
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).strftime("%Y%m%d-%H%M%S"))

    def dump(self, obj: Any, name: str) -> None:
        if self.enabled:
            _dump_debug_object(obj, name, self.directory, self.timestamp)


# =============================================================================
# Reports
# =============================================================================

@dataclass
class CommandReport:
    """Human-facing lines and files produced by one subcommand."""
    command: str
    exit_code: int = EXIT_OK
    lines: list[str] = field(default_factory=list)
    outputs: list[Path] = field(default_factory=list)

    def say(self, text: str) -> None:
        self.lines.append(text)
        print(f"[{self.command}] {text}")

    def wrote(self, path: Path) -> None:
        self.outputs.append(path)
        self.say(f"wrote {path}")


def _fmt(value: float) -> str:
    return f"{value:g}"


def _format_eig(lam: complex) -> str:
    if lam.imag == 0:
        return f"{lam.real:.4f}"
    return f"{lam.real:.4f}±{abs(lam.imag):.4f}i"


# =============================================================================
# Analyses shared by the subcommands
# =============================================================================

def network_spectrum(scenario: Scenario) -> Spectrum:
    """Spectrum of the T-weighted Laplacian, inertia-weighted when M is not uniformly 1."""
    L = build_laplacian(scenario.topology, Weighting.FROM_T)
    if any(m != 1.0 for m in scenario.inertias):
        L = weighted_laplacian(L, scenario.inertias)
    return spectrum(L)


def classify_network(scenario: Scenario, spec: Optional[Spectrum] = None) -> NetworkClass:
    """
    Network verdict for a homogeneous scenario.

    Raises:
        ClassificationError: If the grids do not share one D/M ratio.
    """
    ratio = common_damping_ratio(scenario.inertias, scenario.dampings)
    spec = spec if spec is not None else network_spectrum(scenario)
    d_max: Optional[int] = None
    if scenario.is_homogeneous() and scenario.inertias[0] == 1.0:
        bound = degree_bounds(scenario.topology).d_max
        d_max = bound if bound >= 1 else None
    return network_modes(spec, ratio, d_max=d_max)


def _with_overrides(
    scenario: Scenario,
    seed: Optional[int] = None,
    method: Optional[IntegrationMethod] = None,
) -> Scenario:
    changes: dict[str, Any] = {}
    if seed is not None:
        changes["seed"] = seed
    if method is not None:
        changes["method"] = method
    return scenario.with_sim(**changes) if changes else scenario


# =============================================================================
# Subcommands
# =============================================================================

def cmd_classify(
    scenario: Scenario,
    dampings: Optional[Sequence[float]] = None,
    debug: Optional[DebugSink] = None,
) -> CommandReport:
    """Single-grid class per node against the mains and the network verdict."""
    report = CommandReport("classify")
    debug = debug or DebugSink()
    variants = [scenario] if not dampings else [scenario.with_damping(D) for D in dampings]

    for sc in variants:
        report.say(f"scenario {sc.name} ({sc.topology.node_count} nodes, {len(sc.topology.edges)} edges)")
        for k, label in enumerate(sc.topology.node_labels):
            tc = classify_single(sc.grid_params(k))
            report.say(
                f"  {label}: {tc.kind.value} (D={_fmt(sc.dampings[k])}, threshold 2√(TM)={tc.damping_threshold:.4g}), "
                f"λ={_format_eig(tc.eigenvalues[0])}"
            )
        if sc.is_single_grid:
            continue
        try:
            nc = classify_network(sc)
        except ClassificationError as exc:
            report.say(f"  network: not classified ({exc})")
            continue
        debug.dump(nc, f"network-D{_fmt(nc.damping)}")
        report.say(f"  network: {nc.describe()}")
    return report


def cmd_spectrum(scenario: Scenario) -> CommandReport:
    """Laplacian spectrum, degree bracket and connectivity."""
    report = CommandReport("spectrum")
    spec = network_spectrum(scenario)
    bounds = degree_bounds(scenario.topology)

    report.say(f"scenario {scenario.name}: n={scenario.topology.node_count}, source={spec.source.value}")
    report.say("eigenvalues: " + ", ".join(f"{mu:.6g}" for mu in spec.eigenvalues))
    report.say(f"μ̃_max = {spec.max_eigenvalue:.4f}")
    report.say(f"d_max = {bounds.d_max}, bracket [{_fmt(bounds.lower)}, {_fmt(bounds.upper)}]")
    if spec.is_connected:
        report.say(f"algebraic connectivity = {spec.algebraic_connectivity:.6g}")
    else:
        report.say(
            f"warning: zero eigenvalue multiplicity {spec.zero_multiplicity} "
            f"({scenario.topology.component_count()} components), no global consensus"
        )
    return report


def _simulation_jobs(
    scenario: Scenario,
    dampings: Optional[Sequence[float]],
    xis: Optional[Sequence[float]],
    prefix: str,
) -> list[SweepJob]:
    """One job per damping value (the scenario as is when none are given) and per xi."""
    jobs: list[SweepJob] = []
    disturbances: list[Optional[SectorDisturbance]] = [scenario.disturbance]
    if xis:
        base = scenario.disturbance or SectorDisturbance(k_tilde=SINUSOID_SECTOR_SLOPE, xi=1.0)
        disturbances = [
            SectorDisturbance(k_tilde=base.k_tilde, xi=xi, shape=base.shape, additive=base.additive)
            for xi in xis
        ]
    if dampings:
        variants = [(_fmt(D), scenario.with_damping(D)) for D in dampings]
    else:
        uniform = len(set(scenario.dampings)) == 1
        variants = [(_fmt(scenario.dampings[0]) if uniform else "mixed", scenario)]

    for tag, sc in variants:
        system = sc.system()
        x0 = sc.initial_state()
        for dist in disturbances:
            name = f"{prefix}-D{tag}"
            if xis and dist is not None:
                name += f"-xi{_fmt(dist.xi)}"
            jobs.append(SweepJob(system=system, x0=x0, config=sc.sim, disturbance=dist, name=name))
    return jobs


def _run_jobs(jobs: list[SweepJob], out_dir: Path, report: CommandReport) -> None:
    try:
        results = run_sweep(jobs)
    except NonFiniteStateError as exc:
        report.say(f"run diverged at step {exc.step}")
        report.exit_code = EXIT_VIOLATION
        return
    for job, result in zip(jobs, results):
        report.wrote(write_csv(result, out_dir / f"{job.name}.csv"))


def cmd_simulate(
    scenario: Scenario,
    out_dir: Path,
    dampings: Optional[Sequence[float]] = None,
    xis: Optional[Sequence[float]] = None,
) -> CommandReport:
    """One CSV per damping value (and per xi when given)."""
    report = CommandReport("simulate")
    jobs = _simulation_jobs(scenario, dampings, xis, prefix=f"simulate-{scenario.name}")
    report.say(
        f"{len(jobs)} run(s) of {scenario.sim.steps} steps, dt={_fmt(scenario.sim.dt)}, "
        f"{scenario.sim.method.value}, seed={scenario.sim.seed}"
    )
    _run_jobs(jobs, out_dir, report)
    return report


def cmd_spr(
    params: GridParams,
    k: float,
    omega_grid: np.ndarray,
    out_dir: Optional[Path] = None,
    debug: Optional[DebugSink] = None,
) -> CommandReport:
    """SPR verdict of Z(s) = I + k G(s) for one grid."""
    report = CommandReport("spr-check")
    debug = debug or DebugSink()
    spr = check_spr(LureSystem(params=params, k=k), omega_grid)
    debug.dump(spr, f"spr-k{_fmt(k)}")
    report.say(spr.summary())
    if out_dir is not None:
        report.wrote(spr.write_csv(out_dir / f"spr-k{_fmt(k)}.csv"))
    if spr.verdict != SprVerdict.SPR:
        report.exit_code = EXIT_VIOLATION
    return report


# Second campaign: both readings of the damping/periodicity sweep.
_CAMPAIGN_2_XI = (1.0, 5.0, 10.0)
_CAMPAIGN_2_D = (1.0, 3.0, 5.0)
_CAMPAIGN_1_D = (1.0, 3.0, 6.0)


def cmd_replicate(
    out_dir: Path,
    dampings: Optional[Sequence[float]] = None,
    xis: Optional[Sequence[float]] = None,
    method: Optional[IntegrationMethod] = None,
    seed: Optional[int] = None,
    omega_grid: Optional[np.ndarray] = None,
) -> CommandReport:
    """
    Both campaigns end to end.

    1. Nigerian network, M = T = 1, D in {1, 3, 6}: 500 steps of dt = 0.01,
       state re-randomized every 10 s, normalized and rescaled to Hz / MWh.
    2. Single grid against the mains, M = T = 1, sinusoidal sector
       disturbance: D = 1 with xi in {1, 5, 10}, and D in {1, 3, 5} with xi = 1,
       1000 steps of dt = 0.01, normalized and rescaled like campaign 1.
    """
    report = CommandReport("replicate-paper")

    # Campaign 1
    nigeria = load_scenario("nigeria")
    nigeria = nigeria.with_sim(
        dt=0.01, steps=500, reinit_period=10.0, rescale=RescaleSpec(normalize=True),
    )
    nigeria = _with_overrides(nigeria, seed=seed, method=method)
    spec = network_spectrum(nigeria)
    report.say(f"campaign 1: nigeria, μ̃_max = {spec.max_eigenvalue:.4f}, d_max = {degree_bounds(nigeria.topology).d_max}")
    d_values = list(dampings) if dampings else list(_CAMPAIGN_1_D)
    for D in d_values:
        report.say(f"  D={_fmt(D)}: {classify_network(nigeria.with_damping(D), spec).describe()}")
    _run_jobs(_simulation_jobs(nigeria, d_values, None, prefix="campaign1-nigeria"), out_dir, report)

    # Campaign 2
    run_seed = nigeria.sim.seed
    single = GridParams(M=1.0, D=1.0, T=1.0)
    config = SimConfig(
        dt=0.01, steps=1000, method=nigeria.sim.method, seed=run_seed, rescale=RescaleSpec(normalize=True),
    )
    x0 = random_initial_state(1, run_seed)
    pairs = [(1.0, xi) for xi in (xis or _CAMPAIGN_2_XI)] + [(D, 1.0) for D in _CAMPAIGN_2_D]
    unique_pairs = list(dict.fromkeys(pairs))
    jobs = [
        SweepJob(
            system=assemble_single(GridParams(M=single.M, D=D, T=single.T)),
            x0=x0,
            config=config,
            disturbance=SectorDisturbance(k_tilde=SINUSOID_SECTOR_SLOPE, xi=xi, shape=DisturbanceShape.PAPER_SINUSOID),
            name=f"campaign2-single-D{_fmt(D)}-xi{_fmt(xi)}",
        )
        for D, xi in unique_pairs
    ]
    report.say(f"campaign 2: single grid, {len(jobs)} run(s) of {config.steps} steps")
    _run_jobs(jobs, out_dir, report)

    grid = omega_grid if omega_grid is not None else log_omega_grid()
    for D in sorted({D for D, _ in unique_pairs}):
        spr = check_spr(LureSystem(params=GridParams(M=1.0, D=D, T=1.0), k=SINUSOID_SECTOR_SLOPE), grid)
        report.say(f"  {spr.summary()}")
        if spr.verdict != SprVerdict.SPR:
            report.exit_code = EXIT_VIOLATION
    return report


# =============================================================================
# CLI
# =============================================================================

def _float_list(values: Optional[Sequence[str]]) -> Optional[list[float]]:
    """Accept `1 3 6` as well as `1,3,6`."""
    if not values:
        return None
    out: list[float] = []
    for value in values:
        out.extend(float(part) for part in value.split(",") if part.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microgrid",
        description="Micro-grid transient toolkit: classify, simulate and certify swing-equation networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def _scenario_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="Scenario file or bundled name (e.g. nigeria)")
        p.add_argument("--damping", nargs="+", help="Damping value(s) overriding the scenario's D")

    def _run_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help="Seed overriding scenario and MICROGRID_SEED")
        p.add_argument("--method", choices=[m.value for m in IntegrationMethod], default=None)
        p.add_argument("--xi", nargs="+", help="Periodicity factor(s) of the sinusoidal disturbance")
        p.add_argument("--out", type=Path, default=None, help="Output directory (default: MICROGRID_OUTPUT_DIR)")

    def _omega_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--omega-min", type=float, default=None)
        p.add_argument("--omega-max", type=float, default=None)
        p.add_argument("--omega-points", type=int, default=None)

    p_classify = sub.add_parser("classify", help="Transient class per grid and network verdict")
    _scenario_args(p_classify)

    p_spectrum = sub.add_parser("spectrum", help="Laplacian spectrum of the scenario topology")
    p_spectrum.add_argument("--scenario", required=True)

    p_simulate = sub.add_parser("simulate", help="Simulate and write CSV trajectories")
    _scenario_args(p_simulate)
    _run_args(p_simulate)

    p_spr = sub.add_parser("spr-check", help="Strict positive realness of Z(s) = I + k G(s)")
    p_spr.add_argument("--M", type=float, default=1.0)
    p_spr.add_argument("--D", type=float, default=1.0)
    p_spr.add_argument("--T", type=float, default=1.0)
    p_spr.add_argument("--k", type=float, default=1.0)
    p_spr.add_argument("--out", type=Path, default=None)
    _omega_args(p_spr)

    p_replicate = sub.add_parser("replicate-paper", help="Run both reference simulation campaigns")
    p_replicate.add_argument("--damping", nargs="+", help="Damping values of the network campaign")
    _run_args(p_replicate)
    _omega_args(p_replicate)

    return parser


def _omega_grid(args: argparse.Namespace, config: dict) -> np.ndarray:
    return log_omega_grid(
        args.omega_min if args.omega_min is not None else config["omega_min"],
        args.omega_max if args.omega_max is not None else config["omega_max"],
        args.omega_points if args.omega_points is not None else config["omega_points"],
    )


def dispatch(args: argparse.Namespace, config: dict) -> CommandReport:
    """Run the selected subcommand; input errors propagate to `main`."""
    debug = DebugSink(enabled=config["log_level"] == "debug")
    seed = getattr(args, "seed", None)
    seed = seed if seed is not None else config["seed"]
    method = IntegrationMethod(args.method) if getattr(args, "method", None) else None
    out_dir = getattr(args, "out", None) or config["output_dir"]

    if args.command == "spr-check":
        params = GridParams(M=args.M, D=args.D, T=args.T)
        return cmd_spr(params, args.k, _omega_grid(args, config), out_dir=args.out, debug=debug)

    if args.command == "replicate-paper":
        return cmd_replicate(
            out_dir,
            dampings=_float_list(args.damping),
            xis=_float_list(args.xi),
            method=method,
            seed=seed,
            omega_grid=_omega_grid(args, config),
        )

    scenario = _with_overrides(load_scenario(args.scenario), seed=seed, method=method)
    debug.dump(scenario, "scenario")

    if args.command == "classify":
        return cmd_classify(scenario, _float_list(args.damping), debug=debug)
    if args.command == "spectrum":
        return cmd_spectrum(scenario)
    return cmd_simulate(scenario, out_dir, _float_list(args.damping), _float_list(args.xi))


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = _read_config()
    _configure_logging(config["log_level"])
    logger.debug("config: %s", config)

    try:
        report = dispatch(args, config)
    except (ValueError, FileNotFoundError) as exc:
        print(f"[{args.command}] error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
