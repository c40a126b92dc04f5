"""
Tests for the vertex separator strategies.
"""

import numpy as np
import pytest

from app.mccs.errors import InputError, SeparatorError
from app.mccs.graph import Assignment, build_grid, build_sparse, connected_components
from app.mccs.separators import (
    StrategyKind,
    StrategyName,
    equidistant_separator,
    find_separators,
    k_separators,
    minimal_separator,
    nearest_separator,
)
from tests.conftest import brute_force_separator_size


class TestStrategyKind:
    """Test class for strategy descriptors."""

    def test_parametric(self):
        """Only the k-strategies carry k."""
        assert StrategyKind(StrategyName.K_NEAREST, 4).parametric
        assert not StrategyKind("minimal").parametric
        assert StrategyKind("nearest").label == "nearest"

    def test_invalid_k(self):
        """k must be positive."""
        with pytest.raises(InputError):
            StrategyKind(StrategyName.K_NEAREST, 0)

    def test_unknown_name(self):
        """Unknown strategy names are rejected."""
        with pytest.raises(ValueError):
            StrategyKind("fastest")


class TestNearestSeparator:
    """Test class for the immediate-neighborhood strategy on PATH5, actives {0, 2, 4}."""

    @pytest.mark.parametrize("component,expected", [([4], (3,)), ([2], (1, 3)), ([0], (1,))])
    def test_inactive_neighbors(self, path5, path5_active, component, expected):
        """The separator is the component's boundary."""
        assert nearest_separator(path5, path5_active, component) == expected

    def test_non_maximal_component(self, path5):
        """A component with active neighbors is rejected."""
        with pytest.raises(SeparatorError):
            nearest_separator(path5, [1, 1, 0, 0, 0], [0])

    def test_inactive_member(self, path5, path5_active):
        """Components must be active."""
        with pytest.raises(SeparatorError):
            nearest_separator(path5, path5_active, [1])


class TestMinimalSeparator:
    """Test class for the max-flow strategy."""

    def test_path_tie_goes_to_source(self, path5):
        """Every single gap node separates; the source side wins the tie."""
        x = Assignment.from_nodes(5, [0, 4])

        assert minimal_separator(path5, x, [0], [4]) == (1,)

    def test_grid_corners(self):
        """Opposite corners of a 2x3 grid need two nodes."""
        graph = build_grid((2, 3))
        x = Assignment.from_nodes(6, [0, 5])
        separator = minimal_separator(graph, x, [0], [5])

        assert len(separator) == 2
        assert brute_force_separator_size(graph, x.labels, [0], [5]) == 2

    def test_smaller_side_wins(self):
        """A narrow neck near the sink beats a wide cut near the source."""
        # star around 0, funnel into 6 through the single node 5
        graph = build_sparse(7, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (4, 5), (5, 6)])
        x = Assignment.from_nodes(7, [0, 6])

        separator = minimal_separator(graph, x, [0], [6])

        assert len(separator) == 1
        assert separator in ((4,), (5,))

    def test_disconnected_sides_give_empty_separator(self):
        """No inactive path, nothing to cut."""
        graph = build_sparse(4, [(0, 1), (2, 3)])

        assert minimal_separator(graph, [1, 0, 0, 1], [0], [3]) == ()

    def test_active_bridge(self, path5):
        """Source and sink already joined by active nodes."""
        with pytest.raises(SeparatorError):
            minimal_separator(path5, [1, 1, 1, 0, 0], [0], [2])

    def test_other_components_are_passable(self):
        """Third-party active nodes are never part of the separator."""
        x = Assignment.from_nodes(5, [0, 2, 4])
        graph = build_sparse(5, [(0, 1), (1, 2), (2, 3), (3, 4)])

        separator = minimal_separator(graph, x, [4], [0])

        assert len(separator) == 1
        assert not set(separator) & {0, 2, 4}


class TestEquidistantSeparator:
    """Test class for the meeting-front strategy."""

    def test_midpoint(self, path5):
        """Fronts from 0 and 4 meet at 2."""
        assert equidistant_separator(path5, Assignment.from_nodes(5, [0, 4]), [0], [4]) == (2,)

    def test_meet_across_edge(self):
        """Fronts meeting across (1, 2) take the component-side node."""
        graph = build_sparse(4, [(0, 1), (1, 2), (2, 3)])

        assert equidistant_separator(graph, [1, 0, 0, 1], [0], [3]) == (1,)

    def test_joined_sides(self, path5):
        """Active adjacency violates the precondition."""
        with pytest.raises(SeparatorError):
            equidistant_separator(path5, [1, 1, 0, 0, 0], [0], [1])

    def test_result_separates(self, grid3x3):
        """Removing the separator disconnects the sides."""
        x = Assignment.from_nodes(9, [0, 8])
        separator = set(equidistant_separator(grid3x3, x, [0], [8]))
        passable = [0 if i in separator else 1 for i in range(9)]

        assert all(not ({0, 8} <= set(c)) for c in connected_components(grid3x3, passable))


class TestKSeparators:
    """Test class for the layered strategies on PATH5."""

    def test_two_layers(self, path5):
        """Component {3, 4} against 0: layers {2} and {1}."""
        x = Assignment.from_nodes(5, [0, 3, 4])

        assert k_separators(path5, x, [3, 4], 2) == [(2,), (1,)]

    def test_capped_by_component_size(self, path5, path5_active):
        """A single-node component yields one layer."""
        assert k_separators(path5, path5_active, [4], 5) == [(3,)]

    def test_interleave_keeps_even_layers(self, path5):
        """Only the distance-2 layer survives."""
        x = Assignment.from_nodes(5, [0, 3, 4])

        assert k_separators(path5, x, [3, 4], 2, interleave=True) == [(1,)]

    def test_interleave_falls_back_to_nearest(self, path5):
        """Without a valid even layer the distance-1 layer is used."""
        x = Assignment.from_nodes(5, [0, 2])

        assert k_separators(path5, x, [2], 3, interleave=True) == [(1, 3)]

    def test_stops_at_foreign_contact(self, path5):
        """The layer touching another component is the last one."""
        x = Assignment.from_nodes(5, [0, 1, 3, 4])

        assert k_separators(path5, x, [3, 4], 5) == [(2,)]

    def test_invalid_k(self, path5, path5_active):
        """k must be positive."""
        with pytest.raises(InputError):
            k_separators(path5, path5_active, [4], 0)


class TestFindSeparators:
    """Test class for strategy dispatch."""

    @pytest.mark.parametrize("strategy,expected", [
        (StrategyKind(StrategyName.NEAREST), [(3,)]),
        (StrategyKind(StrategyName.MINIMAL), [(3,)]),
        (StrategyKind(StrategyName.EQUIDISTANT), [(3,)]),
        (StrategyKind(StrategyName.K_NEAREST, 2), [(3,)]),
        (StrategyKind(StrategyName.K_INTERLEAVE, 2), [(3,)]),
    ])
    def test_dispatch(self, path5, path5_active, strategy, expected):
        """Component {4} against {2}: every strategy finds {3}."""
        assert find_separators(path5, path5_active, (4,), (2,), strategy) == expected

    def test_unreachable_component_gives_empty_separator(self):
        """A component in its own connected piece gets the empty separator."""
        graph = build_sparse(3, [(0, 1)])

        result = find_separators(graph, [1, 0, 1], (2,), (0,), StrategyKind(StrategyName.K_NEAREST, 3))

        assert result == [()]


ALL_STRATEGIES = [
    StrategyKind(StrategyName.NEAREST),
    StrategyKind(StrategyName.MINIMAL),
    StrategyKind(StrategyName.EQUIDISTANT),
    StrategyKind(StrategyName.K_NEAREST, 2),
    StrategyKind(StrategyName.K_NEAREST, 4),
    StrategyKind(StrategyName.K_INTERLEAVE, 2),
    StrategyKind(StrategyName.K_INTERLEAVE, 4),
]


def still_joined(graph, removed, component, target):
    """Whether ``component`` reaches ``target`` once ``removed`` is taken out of the graph."""
    passable = [0 if i in removed else 1 for i in range(graph.n_nodes)]
    return any(
        set(comp) & set(component) and set(comp) & set(target)
        for comp in connected_components(graph, passable)
    )


class TestSeparatorValidity:
    """Test class for separator validity on random grids up to 6x6."""

    @pytest.mark.parametrize("strategy", ALL_STRATEGIES, ids=lambda s: s.label)
    def test_every_separator_cuts_component_off(self, strategy):
        """Each returned set is inactive and disconnects the component from the target."""
        rng = np.random.default_rng(23)
        checked = 0
        while checked < 60:
            graph = build_grid((int(rng.integers(2, 7)), int(rng.integers(2, 7))))
            labels = tuple(int(v) for v in rng.random(graph.n_nodes) < 0.35)
            components = connected_components(graph, labels)
            if len(components) < 2:
                continue
            target = components[int(rng.integers(0, len(components)))]

            for component in components:
                if component is target:
                    continue
                for separator in find_separators(graph, labels, component, target, strategy):
                    assert not any(labels[i] for i in separator)
                    assert not still_joined(graph, set(separator), component, target)
            checked += 1
