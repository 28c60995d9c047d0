# grid/models.py
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence

import networkx as nx
import numpy as np

# Row-sum and zero-eigenvalue tolerances shared across the package.
ROW_SUM_TOL = 1e-12
ZERO_EIGENVALUE_TOL = 1e-9


# =============================================================================
# Exceptions
# =============================================================================

class TopologyError(ValueError):
    """Invalid micro-grid interconnection topology."""
    pass


class LaplacianError(ValueError):
    """Invalid Laplacian matrix or weighting."""
    pass


# =============================================================================
# Enums
# =============================================================================

class Weighting(str, Enum):
    """Off-diagonal weights used when building a Laplacian."""
    UNIT = "unit"        # -1 per edge, diagonal = node degree
    FROM_T = "from_t"    # -T_ij per edge, diagonal = sum of incident T_ij


class SpectrumSource(str, Enum):
    UNWEIGHTED_LAPLACIAN = "unweighted_laplacian"
    WEIGHTED_LAPLACIAN = "weighted_laplacian"  # Diag(1/M) L


# =============================================================================
# Topology
# =============================================================================

@dataclass(frozen=True)
class Edge:
    """Undirected power line between grids i and j (canonical form i < j)."""
    i: int
    j: int
    T: float = 1.0  # synchronizing coefficient, per-unit


@dataclass(frozen=True)
class Topology:
    """
    Undirected weighted graph of micro-grids.

    Edges are stored canonicalized (i < j). Construct through
    `Topology.from_edges` when edges may come in either orientation; the
    constructor itself only accepts canonical edges.
    """
    node_labels: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.node_labels)
        if n == 0:
            raise TopologyError("topology must have at least one node")
        if len(set(self.node_labels)) != n:
            raise TopologyError("node labels must be unique")

        seen: set[tuple[int, int]] = set()
        for edge in self.edges:
            if not (0 <= edge.i < n and 0 <= edge.j < n):
                raise TopologyError(f"edge ({edge.i}, {edge.j}) references a node outside 0..{n - 1}")
            if edge.i == edge.j:
                raise TopologyError(f"self-loop on node {edge.i} ({self.node_labels[edge.i]})")
            if edge.i > edge.j:
                raise TopologyError(f"edge ({edge.i}, {edge.j}) is not canonical (i < j)")
            if not (math.isfinite(edge.T) and edge.T > 0):
                raise TopologyError(
                    f"edge {self.node_labels[edge.i]}-{self.node_labels[edge.j]} "
                    f"needs a finite positive synchronizing coefficient, got {edge.T}"
                )
            key = (edge.i, edge.j)
            if key in seen:
                raise TopologyError(
                    f"duplicate edge {self.node_labels[edge.i]}-{self.node_labels[edge.j]}"
                )
            seen.add(key)

    # ----------------------------
    # Constructors
    # ----------------------------

    @classmethod
    def from_edges(
        cls,
        labels: Sequence[str],
        edges: Iterable[tuple[int | str, int | str] | tuple[int | str, int | str, float]],
    ) -> Topology:
        """
        Build a topology from (i, j) or (i, j, T) tuples.

        Endpoints may be node indices or node labels. Each pair is
        canonicalized to i < j; a repeated unordered pair is an error rather
        than a silent merge.
        """
        labels = tuple(labels)
        index = {label: k for k, label in enumerate(labels)}

        def _resolve(node: int | str) -> int:
            if isinstance(node, str):
                if node not in index:
                    raise TopologyError(f"edge references unknown node label {node!r}")
                return index[node]
            return int(node)

        canonical: list[Edge] = []
        for raw in edges:
            if len(raw) == 2:
                a, b = raw  # type: ignore[misc]
                weight = 1.0
            else:
                a, b, weight = raw  # type: ignore[misc]
            i, j = _resolve(a), _resolve(b)
            canonical.append(Edge(min(i, j), max(i, j), float(weight)))
        return cls(node_labels=labels, edges=tuple(canonical))

    @classmethod
    def chain(cls, n: int, T: float = 1.0) -> Topology:
        """Path graph 0-1-...-(n-1)."""
        if n < 1:
            raise TopologyError("chain needs at least one node")
        labels = tuple(f"g{k}" for k in range(n))
        return cls(node_labels=labels, edges=tuple(Edge(k, k + 1, T) for k in range(n - 1)))

    @classmethod
    def two_grid(cls, T: float = 1.0) -> Topology:
        return cls.chain(2, T)

    # ----------------------------
    # Queries
    # ----------------------------

    @property
    def node_count(self) -> int:
        return len(self.node_labels)

    def degrees(self) -> list[int]:
        """Number of incident edges per node."""
        deg = [0] * self.node_count
        for edge in self.edges:
            deg[edge.i] += 1
            deg[edge.j] += 1
        return deg

    def weighted_degrees(self) -> list[float]:
        """Sum of incident synchronizing coefficients per node."""
        deg = [0.0] * self.node_count
        for edge in self.edges:
            deg[edge.i] += edge.T
            deg[edge.j] += edge.T
        return deg

    def is_unit_weighted(self) -> bool:
        return all(edge.T == 1.0 for edge in self.edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_weighted_edges_from((e.i, e.j, e.T) for e in self.edges)
        return graph

    def component_count(self) -> int:
        return nx.number_connected_components(self.to_networkx())

    def is_connected(self) -> bool:
        return self.component_count() == 1

    def relabel(self, permutation: Sequence[int]) -> Topology:
        """
        Reorder nodes so that new node k is old node permutation[k].

        The graph is unchanged up to isomorphism, which is what the
        permutation-invariance checks on the spectrum rely on.
        """
        if sorted(permutation) != list(range(self.node_count)):
            raise TopologyError("permutation must be a rearrangement of 0..n-1")
        new_index = {old: new for new, old in enumerate(permutation)}
        labels = tuple(self.node_labels[old] for old in permutation)
        edges = [(new_index[e.i], new_index[e.j], e.T) for e in self.edges]
        return Topology.from_edges(labels, edges)


# =============================================================================
# Laplacian and spectrum
# =============================================================================

@dataclass(frozen=True, eq=False)
class LaplacianMatrix:
    """
    Dense n x n graph Laplacian.

    `inertias` is set only for the inertia-weighted form Diag(1/M) L, which is
    not symmetric; it is kept so the spectrum can be computed on the similar
    symmetric matrix Diag(M^-1/2) L Diag(M^-1/2).
    """
    entries: np.ndarray
    weighting: Weighting
    inertias: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise LaplacianError(f"Laplacian must be a nonempty square matrix, got shape {entries.shape}")
        if self.inertias is not None and len(self.inertias) != entries.shape[0]:
            raise LaplacianError("inertia count does not match Laplacian size")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    @property
    def is_weighted(self) -> bool:
        return self.inertias is not None

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, self.entries.T, rtol=0.0, atol=tol))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a Laplacian, sorted ascending."""
    eigenvalues: tuple[float, ...]
    source: SpectrumSource
    zero_multiplicity: int = field(init=False)

    def __post_init__(self) -> None:
        zeros = sum(1 for mu in self.eigenvalues if abs(mu) <= ZERO_EIGENVALUE_TOL)
        object.__setattr__(self, "zero_multiplicity", zeros)

    @property
    def max_eigenvalue(self) -> float:
        return self.eigenvalues[-1]

    @property
    def algebraic_connectivity(self) -> float:
        """Second-smallest eigenvalue (0.0 for a single node)."""
        return self.eigenvalues[1] if len(self.eigenvalues) > 1 else 0.0

    @property
    def is_connected(self) -> bool:
        return self.zero_multiplicity == 1


class DegreeBounds(NamedTuple):
    """d_max <= max Laplacian eigenvalue <= 2 d_max for any graph with an edge."""
    d_max: int
    lower: float
    upper: float

    def contains(self, value: float, slack: float = 1e-9) -> bool:
        return self.lower - slack <= value <= self.upper + slack
