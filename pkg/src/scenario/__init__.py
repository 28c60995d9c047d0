"""
Scenario documents: a topology, its physics and run settings in one TOML file.
"""

from .loader import bundled_scenarios, load_scenario, nigeria_topology, parse_scenario
from .models import InitialState, Scenario, ScenarioError

__all__ = [
    "InitialState",
    "Scenario",
    "ScenarioError",
    "bundled_scenarios",
    "load_scenario",
    "nigeria_topology",
    "parse_scenario",
]
