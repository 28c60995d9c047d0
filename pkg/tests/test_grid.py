"""Tests for topologies, Laplacians, the Jacobi solver and spectra."""
from __future__ import annotations

import logging

import networkx as nx
import numpy as np
import pytest

from grid.jacobi import jacobi_eigenvalues, off_diagonal_norm
from grid.laplacian import build_laplacian, degree_bounds, spectrum, symmetrized, weighted_laplacian
from grid.models import (
    Edge,
    LaplacianError,
    LaplacianMatrix,
    SpectrumSource,
    Topology,
    TopologyError,
    Weighting,
)
from scenario.loader import nigeria_topology


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _random_connected_topology(n: int, seed: int) -> Topology:
    """Connected small-world graph with n nodes."""
    graph = nx.connected_watts_strogatz_graph(n, 2, 0.4, seed=seed)
    labels = [f"n{k}" for k in range(n)]
    return Topology.from_edges(labels, list(graph.edges()))


def _random_symmetric(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(n, n))
    return 0.5 * (a + a.T)


# ---------------------------------------------------------------------------
# Topology
# ---------------------------------------------------------------------------

class TestTopology:

    def test_from_edges_canonicalizes(self):
        """Edges given as (j, i) or by label are stored with i < j."""
        topo = Topology.from_edges(["a", "b", "c"], [(1, 0), ("c", "b", 2.0)])
        assert topo.edges == (Edge(0, 1, 1.0), Edge(1, 2, 2.0))

    def test_duplicate_pair_rejected(self):
        """A repeated unordered pair is an error, not a merge."""
        with pytest.raises(TopologyError, match="duplicate"):
            Topology.from_edges(["a", "b"], [(0, 1), (1, 0)])

    def test_self_loop_rejected(self):
        with pytest.raises(TopologyError, match="self-loop"):
            Topology.from_edges(["a", "b"], [(1, 1)])

    @pytest.mark.parametrize("T", [0.0, -1.0, float("inf"), float("nan")])
    def test_nonpositive_or_infinite_T_rejected(self, T):
        with pytest.raises(TopologyError, match="finite positive"):
            Topology.from_edges(["a", "b"], [(0, 1, T)])

    def test_out_of_range_rejected(self):
        with pytest.raises(TopologyError, match="outside"):
            Topology.from_edges(["a", "b"], [(0, 5)])

    def test_unknown_label_rejected(self):
        with pytest.raises(TopologyError, match="unknown"):
            Topology.from_edges(["a", "b"], [("a", "z")])

    def test_empty_and_duplicate_labels_rejected(self):
        with pytest.raises(TopologyError):
            Topology(node_labels=())
        with pytest.raises(TopologyError, match="unique"):
            Topology(node_labels=("a", "a"))

    def test_chain_degrees(self):
        topo = Topology.chain(5)
        assert topo.degrees() == [1, 2, 2, 2, 1]
        assert topo.is_connected()

    def test_components(self):
        """Two disjoint lines form two components."""
        topo = Topology.from_edges(["a", "b", "c", "d"], [(0, 1), (2, 3)])
        assert topo.component_count() == 2
        assert not topo.is_connected()

    def test_weighted_degrees(self):
        topo = Topology.from_edges(["a", "b", "c"], [(0, 1, 2.0), (1, 2, 0.5)])
        assert topo.weighted_degrees() == [2.0, 2.5, 0.5]
        assert not topo.is_unit_weighted()

    def test_relabel_rejects_non_permutation(self):
        with pytest.raises(TopologyError):
            Topology.chain(3).relabel([0, 0, 1])


# ---------------------------------------------------------------------------
# Laplacian
# ---------------------------------------------------------------------------

class TestBuildLaplacian:

    def test_two_grid_unit(self):
        L = build_laplacian(Topology.two_grid())
        np.testing.assert_array_equal(L.entries, [[1.0, -1.0], [-1.0, 1.0]])

    def test_from_T_uses_edge_weights(self):
        topo = Topology.from_edges(["a", "b", "c"], [(0, 1, 2.0), (1, 2, 3.0)])
        L = build_laplacian(topo, Weighting.FROM_T)
        np.testing.assert_array_equal(L.entries, [[2.0, -2.0, 0.0], [-2.0, 5.0, -3.0], [0.0, -3.0, 3.0]])
        unit = build_laplacian(topo, Weighting.UNIT)
        np.testing.assert_array_equal(np.diag(unit.entries), [1.0, 2.0, 1.0])

    def test_row_sums_and_symmetry(self):
        """Random connected graphs give symmetric Laplacians with zero row sums."""
        for seed in range(5):
            L = build_laplacian(_random_connected_topology(9, seed))
            assert L.is_symmetric()
            np.testing.assert_allclose(L.row_sums(), 0.0, atol=1e-12)

    def test_entries_read_only(self):
        L = build_laplacian(Topology.chain(3))
        with pytest.raises(ValueError):
            L.entries[0, 0] = 5.0

    def test_non_square_rejected(self):
        with pytest.raises(LaplacianError):
            LaplacianMatrix(entries=np.zeros((2, 3)), weighting=Weighting.UNIT)


class TestWeightedLaplacian:

    def test_rows_scaled_by_inverse_inertia(self):
        L = build_laplacian(Topology.two_grid())
        W = weighted_laplacian(L, [2.0, 4.0])
        np.testing.assert_allclose(W.entries, [[0.5, -0.5], [-0.25, 0.25]])
        assert W.is_weighted
        np.testing.assert_allclose(W.row_sums(), 0.0, atol=1e-15)

    def test_already_weighted_rejected(self):
        W = weighted_laplacian(build_laplacian(Topology.two_grid()), [1.0, 2.0])
        with pytest.raises(LaplacianError, match="already"):
            weighted_laplacian(W, [1.0, 2.0])

    def test_nonpositive_inertia_rejected(self):
        with pytest.raises(LaplacianError, match="positive"):
            weighted_laplacian(build_laplacian(Topology.two_grid()), [1.0, 0.0])

    def test_infinite_inertia_rejected(self):
        with pytest.raises(LaplacianError, match="finite"):
            weighted_laplacian(build_laplacian(Topology.two_grid()), [1.0, float("inf")])

    def test_nan_entries_fail_row_sum_check(self):
        broken = LaplacianMatrix(entries=np.full((2, 2), np.nan), weighting=Weighting.UNIT)
        with pytest.raises(LaplacianError, match="row sums"):
            weighted_laplacian(broken, [1.0, 1.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(LaplacianError):
            weighted_laplacian(build_laplacian(Topology.two_grid()), [1.0])

    def test_symmetrized_is_similar(self):
        """The symmetric form has the spectrum of Diag(1/M) L."""
        rng = np.random.default_rng(3)
        topo = _random_connected_topology(7, 3)
        inertias = rng.uniform(0.5, 3.0, size=7)
        W = weighted_laplacian(build_laplacian(topo), inertias)
        S = symmetrized(W)
        np.testing.assert_allclose(S, S.T)
        expected = np.sort(np.linalg.eigvals(W.entries).real)
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(S)), expected, atol=1e-10)


# ---------------------------------------------------------------------------
# Jacobi
# ---------------------------------------------------------------------------

class TestJacobi:

    def test_matches_eigvalsh(self):
        """Random symmetric matrices agree with LAPACK to 1e-10."""
        rng = np.random.default_rng(0)
        for n in (2, 3, 6, 12, 25):
            a = _random_symmetric(n, rng)
            np.testing.assert_allclose(jacobi_eigenvalues(a), np.linalg.eigvalsh(a), atol=1e-10)

    def test_input_not_modified(self):
        a = _random_symmetric(4, np.random.default_rng(1))
        before = a.copy()
        jacobi_eigenvalues(a)
        np.testing.assert_array_equal(a, before)

    def test_diagonal_and_scalar(self):
        np.testing.assert_array_equal(jacobi_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])
        np.testing.assert_array_equal(jacobi_eigenvalues(np.array([[4.0]])), [4.0])

    def test_non_symmetric_rejected(self):
        with pytest.raises(LaplacianError, match="symmetric"):
            jacobi_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_off_diagonal_norm(self):
        assert off_diagonal_norm(np.array([[5.0, 3.0], [4.0, 7.0]])) == pytest.approx(5.0)

    def test_sweep_budget_exhausted_warns(self, caplog):
        """A single sweep is not enough for a dense 8x8 matrix."""
        a = _random_symmetric(8, np.random.default_rng(2))
        with caplog.at_level(logging.WARNING, logger="grid.jacobi"):
            jacobi_eigenvalues(a, max_sweeps=1)
        assert "did not reach" in caplog.text


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

class TestSpectrum:

    def test_two_grid(self):
        spec = spectrum(build_laplacian(Topology.two_grid()))
        assert spec.eigenvalues == pytest.approx((0.0, 2.0), abs=1e-12)
        assert spec.source == SpectrumSource.UNWEIGHTED_LAPLACIAN
        assert spec.is_connected

    def test_chain3(self):
        spec = spectrum(build_laplacian(Topology.chain(3)))
        assert spec.eigenvalues == pytest.approx((0.0, 1.0, 3.0), abs=1e-12)
        assert spec.algebraic_connectivity == pytest.approx(1.0)

    def test_nigeria_max_eigenvalue(self):
        """The Nigerian interconnection has mu~_max = 5.1748."""
        topo = nigeria_topology()
        spec = spectrum(build_laplacian(topo))
        assert spec.max_eigenvalue == pytest.approx(5.1748, abs=5e-4)
        assert spec.zero_multiplicity == 1
        assert degree_bounds(topo).d_max == 4

    def test_disconnected_warns(self, caplog):
        topo = Topology.from_edges(["a", "b", "c", "d"], [(0, 1), (2, 3)])
        with caplog.at_level(logging.WARNING, logger="grid.laplacian"):
            spec = spectrum(build_laplacian(topo))
        assert spec.zero_multiplicity == 2
        assert not spec.is_connected
        assert "disconnected" in caplog.text

    def test_degree_bracket_holds(self):
        """d_max <= mu_max <= 2 d_max on random connected graphs."""
        for seed in range(10):
            topo = _random_connected_topology(10, seed)
            spec = spectrum(build_laplacian(topo))
            assert degree_bounds(topo).contains(spec.max_eigenvalue)

    def test_permutation_invariance(self):
        """Relabeling the nodes leaves the spectrum unchanged."""
        rng = np.random.default_rng(7)
        topo = _random_connected_topology(8, 7)
        perm = [int(k) for k in rng.permutation(8)]
        original = spectrum(build_laplacian(topo)).eigenvalues
        permuted = spectrum(build_laplacian(topo.relabel(perm))).eigenvalues
        assert permuted == pytest.approx(original, abs=1e-10)

    def test_weighted_spectrum(self):
        """Equal inertias M scale the unit spectrum by 1/M."""
        L = build_laplacian(Topology.chain(3))
        spec = spectrum(weighted_laplacian(L, [2.0, 2.0, 2.0]))
        assert spec.source == SpectrumSource.WEIGHTED_LAPLACIAN
        assert spec.eigenvalues == pytest.approx((0.0, 0.5, 1.5), abs=1e-12)
