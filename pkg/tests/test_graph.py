"""
Tests for the graph model and traversal primitives.
"""

import numpy as np
import pytest

from app.mccs.errors import GraphError, InputError
from app.mccs.graph import (
    Assignment,
    Connectivity,
    bfs_layers,
    build_grid,
    build_sparse,
    connected_components,
)


class TestBuildGrid:
    """Test class for grid construction."""

    @pytest.mark.parametrize("extents,nodes,edges", [
        ((1, 1), 1, 0),
        ((2, 2), 4, 4),
        ((3, 3), 9, 12),
        ((2, 3), 6, 7),
        ((5,), 5, 4),
        ((2, 2, 2), 8, 12),
    ])
    def test_node_and_edge_counts(self, extents, nodes, edges):
        """Grids have prod(n) nodes and the axis-aligned edge count."""
        graph = build_grid(extents)

        assert graph.n_nodes == nodes
        assert graph.n_edges == edges

    def test_row_major_indexing(self):
        """The last axis varies fastest."""
        graph = build_grid((2, 3))

        assert graph.neighbors(0) == (1, 3)
        assert graph.neighbors(4) == (1, 3, 5)
        assert graph.grid_meta.extents == (2, 3)
        assert graph.grid_meta.connectivity is Connectivity.FOUR

    def test_three_dimensional_uses_six_neighborhood(self):
        """3D grids get the 6-neighborhood."""
        graph = build_grid((3, 3, 3))

        assert graph.grid_meta.connectivity is Connectivity.SIX
        assert len(graph.neighbors(13)) == 6

    @pytest.mark.parametrize("extents", [(), (0, 3), (2, -1), (2, 2, 2, 2)])
    def test_invalid_extents(self, extents):
        """Empty, nonpositive or 4D extents are rejected."""
        with pytest.raises(GraphError):
            build_grid(extents)

    def test_wrong_connectivity(self):
        """Only the axis-aligned neighborhood of the dimension is supported."""
        with pytest.raises(GraphError):
            build_grid((3, 3), Connectivity.SIX)


class TestBuildSparse:
    """Test class for edge-list construction."""

    def test_reversed_pairs_collapse(self):
        """(0,1) and (1,0) are one edge."""
        graph = build_sparse(3, [(0, 1), (1, 0), (1, 2)])

        assert graph.adjacency == ((1,), (0, 2), (1,))
        assert graph.n_edges == 2

    def test_isolated_nodes(self):
        """Nodes without edges have no neighbors."""
        graph = build_sparse(2, [])

        assert graph.adjacency == ((), ())

    def test_edges_listed_once_in_order(self, path5):
        """edges() yields (i, j) with i < j in ascending order."""
        assert list(path5.edges()) == [(0, 1), (1, 2), (2, 3), (3, 4)]

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(-1, 2)]])
    def test_invalid_edges(self, edges):
        """Self-loops and out-of-range indices are rejected."""
        with pytest.raises(GraphError):
            build_sparse(5, edges)


class TestAssignment:
    """Test class for binary labelings."""

    def test_from_nodes(self):
        """Active nodes are set to 1."""
        x = Assignment.from_nodes(5, [0, 2, 4])

        assert x.labels == (1, 0, 1, 0, 1)
        assert x.active == (0, 2, 4)
        assert len(x) == 5
        assert x[2] == 1

    def test_invalid_labels(self):
        """Only 0 and 1 are valid labels."""
        with pytest.raises(InputError):
            Assignment((0, 2, 1))

    def test_out_of_range_node(self):
        """Active nodes must exist."""
        with pytest.raises(InputError):
            Assignment.from_nodes(3, [3])

    def test_empty(self):
        """The empty labeling has no actives."""
        assert Assignment.empty(4).active == ()


class TestConnectedComponents:
    """Test class for component splitting on PATH5."""

    def test_isolated_actives(self, path5):
        """Alternating actives are singletons."""
        assert connected_components(path5, Assignment.from_nodes(5, [0, 2, 4])) == [(0,), (2,), (4,)]

    def test_all_active(self, path5):
        """A fully active path is one component."""
        assert connected_components(path5, [1] * 5) == [(0, 1, 2, 3, 4)]

    def test_no_actives(self, path5):
        """No actives, no components."""
        assert connected_components(path5, [0] * 5) == []

    def test_ordering(self, grid3x3):
        """Components are sorted and ordered by smallest member."""
        labels = [0, 0, 1, 1, 0, 1, 0, 1, 1]

        assert connected_components(grid3x3, labels) == [(2, 5, 7, 8), (3,)]

    def test_boundary_and_connectivity(self, path5):
        """Boundary excludes members; connected sets are detected."""
        assert path5.boundary([1, 2]) == (0, 3)
        assert path5.is_connected_set([1, 2, 3])
        assert not path5.is_connected_set([0, 2])
        assert path5.is_connected_set([])


class TestBfsLayers:
    """Test class for breadth-first layers on PATH5."""

    def test_layers_from_end(self, path5):
        """Distances along the path."""
        assert bfs_layers(path5, {4}, lambda j: False, 2) == [(3,), (2,)]

    def test_blocked_frontier(self, path5):
        """A blocked neighbor exhausts the search."""
        assert bfs_layers(path5, {0}, lambda j: j == 1, 3) == []

    def test_multiple_seeds(self, path5):
        """Layers grow from all seeds at once."""
        assert bfs_layers(path5, {0, 4}, lambda j: False, 1) == [(1, 3)]

    def test_stops_when_exhausted(self, path5):
        """No empty trailing layers are produced."""
        assert bfs_layers(path5, {0}, lambda j: False, 10) == [(1,), (2,), (3,), (4,)]

    def test_zero_layers(self, path5):
        """max_layers 0 yields nothing."""
        assert bfs_layers(path5, {0}, lambda j: False, 0) == []


def relaxed_distances(graph, seeds, blocked):
    """Hop distances from ``seeds`` by repeated relaxation over non-blocked nodes."""
    dist = {s: 0 for s in seeds}
    changed = True
    while changed:
        changed = False
        for i in range(graph.n_nodes):
            if i in seeds or blocked[i]:
                continue
            best = min((dist[j] + 1 for j in graph.adjacency[i] if j in dist), default=None)
            if best is not None and best < dist.get(i, best + 1):
                dist[i] = best
                changed = True
    return dist


class TestGraphProperties:
    """Test class for structural properties on random grids."""

    @pytest.mark.parametrize("extents", [(1,), (7,), (3, 5), (6, 6), (2, 3, 4), (3, 3, 3)])
    def test_sparse_rebuild_matches_grid(self, extents):
        """A grid rebuilt from its own edge list has the same adjacency."""
        grid = build_grid(extents)
        rebuilt = build_sparse(grid.n_nodes, grid.edges())

        assert rebuilt.adjacency == grid.adjacency
        assert rebuilt.n_edges == grid.n_edges

    def test_components_partition_active_set(self):
        """Components cover exactly the active nodes, are connected and never touch."""
        rng = np.random.default_rng(5)
        for _ in range(100):
            graph = build_grid((int(rng.integers(1, 9)), int(rng.integers(1, 9))))
            labels = [int(v) for v in rng.random(graph.n_nodes) < 0.45]
            components = connected_components(graph, labels)

            covered = [i for comp in components for i in comp]
            assert sorted(covered) == [i for i, v in enumerate(labels) if v]
            assert len(covered) == len(set(covered))
            assert [comp[0] for comp in components] == sorted(comp[0] for comp in components)
            for comp in components:
                assert list(comp) == sorted(comp)
                assert graph.is_connected_set(comp)
                assert not any(labels[j] for j in graph.boundary(comp))

    def test_bfs_layers_match_distances(self):
        """Layer t holds exactly the nodes at distance t + 1 on blocked grids up to 8x8."""
        rng = np.random.default_rng(11)
        for _ in range(100):
            graph = build_grid((int(rng.integers(1, 9)), int(rng.integers(1, 9))))
            blocked = [bool(v) for v in rng.random(graph.n_nodes) < 0.25]
            open_nodes = [i for i in range(graph.n_nodes) if not blocked[i]]
            if not open_nodes:
                continue
            count = int(rng.integers(1, min(3, len(open_nodes)) + 1))
            seeds = set(int(i) for i in rng.choice(open_nodes, size=count, replace=False))

            dist = relaxed_distances(graph, seeds, blocked)
            depth = max(dist.values())
            expected = [
                tuple(sorted(i for i, d in dist.items() if d == t + 1))
                for t in range(depth)
            ]

            assert bfs_layers(graph, seeds, lambda j: blocked[j], graph.n_nodes) == expected
            assert bfs_layers(graph, seeds, lambda j: blocked[j], 2) == expected[:2]
