"""Tests for scenario parsing, validation and the bundled documents."""
from __future__ import annotations

import numpy as np
import pytest

from grid.laplacian import build_laplacian, degree_bounds, spectrum
from scenario.loader import bundled_scenarios, load_scenario, parse_scenario
from scenario.models import InitialState, Scenario, ScenarioError
from simulation.models import DisturbanceShape, IntegrationMethod

TWO_NODES = """
[topology]
labels = ["A", "B"]
[[topology.edges]]
from = "A"
to = "B"
"""


class TestBundled:

    def test_names(self):
        assert bundled_scenarios() == ["chain3", "nigeria", "single_grid", "two_grid"]

    def test_nigeria(self):
        scenario = load_scenario("nigeria")
        topo = scenario.topology
        assert topo.node_count == 11
        assert len(topo.edges) == 10
        assert topo.node_labels[0] == "Yobe"
        assert topo.is_connected()
        assert degree_bounds(topo).d_max == 4
        assert scenario.is_homogeneous()
        assert scenario.sim.reinit_steps == 1000
        assert scenario.rescale is not None and scenario.rescale.normalize

    def test_nigeria_spectrum(self):
        spec = spectrum(build_laplacian(load_scenario("nigeria").topology))
        assert spec.max_eigenvalue == pytest.approx(5.1748, abs=5e-4)

    def test_two_grid_explicit_initial(self):
        scenario = load_scenario("two_grid")
        assert scenario.initial == InitialState.EXPLICIT
        np.testing.assert_array_equal(scenario.initial_state(), [0.2, 0.8, 0.5, 0.5])
        assert scenario.dampings == (2.5, 2.5)

    def test_single_grid_reduces_to_mains(self):
        scenario = load_scenario("single_grid")
        assert scenario.is_single_grid
        system = scenario.system()
        assert system.mains_coupling == 1.0
        np.testing.assert_array_equal(system.state_matrix, [[-1.0, 1.0], [-1.0, 0.0]])
        assert scenario.disturbance is not None
        assert scenario.disturbance.shape == DisturbanceShape.PAPER_SINUSOID
        assert scenario.disturbance.k_tilde == 2.0
        assert scenario.rescale is not None and scenario.rescale.normalize

    def test_load_by_path(self, tmp_path):
        path = tmp_path / "pair.toml"
        path.write_text(TWO_NODES, encoding="utf-8")
        scenario = load_scenario(path)
        assert scenario.name == "pair"

    def test_missing(self):
        with pytest.raises(FileNotFoundError, match="bundled"):
            load_scenario("atlantis")


class TestParse:

    def test_defaults(self):
        """Without [params] and [sim] every node gets M = D = T = 1 and the default run."""
        scenario = parse_scenario(TWO_NODES, name="pair")
        assert scenario.inertias == (1.0, 1.0)
        assert scenario.dampings == (1.0, 1.0)
        assert scenario.sim.dt == 0.01
        assert scenario.sim.steps == 500
        assert scenario.sim.method == IntegrationMethod.RK4
        assert scenario.sim.reinit_period is None
        assert scenario.initial == InitialState.RANDOM
        assert scenario.disturbance is None
        assert scenario.rescale is None

    def test_per_node_values(self):
        scenario = parse_scenario(TWO_NODES + "[params]\nM = [1.0, 2.0]\nD = 3\n")
        assert scenario.inertias == (1.0, 2.0)
        assert scenario.dampings == (3.0, 3.0)
        assert not scenario.is_homogeneous()

    def test_negative_damping_names_node(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + "[params]\nD = [1.0, -1.0]\n")
        assert excinfo.value.field == "params.D[1]"
        assert "node B" in str(excinfo.value)

    def test_wrong_length(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + "[params]\nM = [1.0, 2.0, 3.0]\n")
        assert excinfo.value.field == "params.M"

    def test_syntax_error_has_line(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario('name = "x"\n[topology\nlabels = ["A"]\n')
        assert excinfo.value.line == 2
        assert str(excinfo.value).startswith("line 2: ")

    def test_unknown_label(self):
        text = '[topology]\nlabels = ["A", "B"]\n[[topology.edges]]\nfrom = "A"\nto = "C"\n'
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(text)
        assert excinfo.value.field == "topology.edges[0].to"

    def test_unknown_key(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + "[sim]\nstep = 10\n")
        assert excinfo.value.field == "sim.step"

    def test_duplicate_edge(self):
        with pytest.raises(ScenarioError, match="duplicate") as excinfo:
            parse_scenario(TWO_NODES + '[[topology.edges]]\nfrom = "B"\nto = "A"\n')
        assert excinfo.value.field == "topology"

    def test_infinite_coupling(self):
        text = '[topology]\nlabels = ["A", "B"]\n[[topology.edges]]\nfrom = "A"\nto = "B"\nT = inf\n'
        with pytest.raises(ScenarioError, match="finite positive") as excinfo:
            parse_scenario(text)
        assert excinfo.value.field == "topology"

    def test_missing_topology(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario("[params]\nD = 1.0\n")
        assert excinfo.value.field == "topology"

    def test_sim_table(self):
        text = TWO_NODES + '[sim]\ndt = 0.005\nsteps = 40\nmethod = "euler"\nreinit_period = 0.1\nseed = 7\ninitial = "zero"\n'
        scenario = parse_scenario(text)
        assert scenario.sim.method == IntegrationMethod.EULER
        assert scenario.sim.reinit_steps == 20
        assert scenario.sim.seed == 7
        assert scenario.initial == InitialState.ZERO
        np.testing.assert_array_equal(scenario.initial_state(), np.zeros(4))

    def test_invalid_sim_values(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + '[sim]\nmethod = "leapfrog"\n')
        assert excinfo.value.field == "sim.method"
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + "[sim]\nsteps = 1.5\n")
        assert excinfo.value.field == "sim.steps"
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + "[sim]\ndt = 0.01\nreinit_period = 0.001\n")
        assert excinfo.value.field == "sim"

    def test_half_explicit_initial(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + "[sim]\nf0 = [0.1, 0.2]\n")
        assert excinfo.value.field == "sim.P0"

    def test_random_initial_follows_seed(self):
        a = parse_scenario(TWO_NODES + "[sim]\nseed = 3\n")
        b = parse_scenario(TWO_NODES + "[sim]\nseed = 3\n")
        np.testing.assert_array_equal(a.initial_state(), b.initial_state())
        assert np.all((a.initial_state() >= 0.0) & (a.initial_state() <= 1.0))

    def test_disturbance_table(self):
        scenario = parse_scenario(TWO_NODES + '[disturbance]\nxi = 5.0\nshape = "clipped_linear"\nk_tilde = 0.5\n')
        dist = scenario.disturbance
        assert dist is not None
        assert dist.xi == 5.0
        assert dist.shape == DisturbanceShape.CLIPPED_LINEAR
        assert dist.k_tilde == 0.5

    def test_invalid_disturbance(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + '[disturbance]\nshape = "square"\n')
        assert excinfo.value.field == "disturbance.shape"
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(TWO_NODES + '[disturbance]\nshape = "clipped_linear"\nadditive = true\n')
        assert excinfo.value.field == "disturbance"
        with pytest.raises(ScenarioError, match="k_tilde >= 2") as excinfo:
            parse_scenario(TWO_NODES + "[disturbance]\nk_tilde = 1.5\n")
        assert excinfo.value.field == "disturbance"

    def test_rescale_table(self):
        scenario = parse_scenario(TWO_NODES + "[rescale]\nf_nominal = 60.0\n")
        assert scenario.rescale is not None
        assert scenario.rescale.frequency_band == pytest.approx((59.95, 60.05))
        assert scenario.sim.rescale is scenario.rescale


class TestScenario:

    def test_with_damping(self):
        scenario = load_scenario("chain3").with_damping(6.0)
        assert scenario.dampings == (6.0, 6.0, 6.0)
        assert scenario.system().state_matrix[0, 0] == -6.0

    def test_with_sim(self):
        scenario = load_scenario("chain3").with_sim(seed=9, steps=20)
        assert scenario.sim.seed == 9
        assert scenario.sim.steps == 20
        assert scenario.sim.dt == 0.01

    def test_direct_construction_validates(self):
        topo = load_scenario("two_grid").topology
        with pytest.raises(ScenarioError) as excinfo:
            Scenario(name="bad", topology=topo, inertias=(1.0, 0.0), dampings=(1.0, 1.0), mains_coupling=(1.0, 1.0))
        assert excinfo.value.field == "params.M[1]"
        with pytest.raises(ScenarioError):
            Scenario(
                name="bad",
                topology=topo,
                inertias=(1.0, 1.0),
                dampings=(1.0, 1.0),
                mains_coupling=(1.0, 1.0),
                initial=InitialState.EXPLICIT,
            )
