"""Tests for canonical forms, enumeration and graph6 IO."""

import random
from itertools import combinations

import networkx as nx
import pytest

from gaplab.errors import DomainError, ParseError, ResourceError
from gaplab.graphs import (
    Graph,
    canonical_form,
    canonical_graph6,
    complete_graph,
    empty_graph,
    enumerate_graphs,
    from_graph6,
    graph_from_json,
    graph_to_json,
    is_isomorphic,
    labeled_graphs,
    path_graph,
    to_graph6,
    to_networkx,
)


class TestGraph:
    """Tests for the Graph value."""

    def test_degrees(self) -> None:
        """Test degrees of a path."""
        p = path_graph(4)
        assert p.degrees() == [1, 2, 2, 1]
        assert p.min_degree() == 1
        assert empty_graph(0).min_degree() == 0

    def test_invalid_edges(self) -> None:
        """Test loops and out-of-range edges."""
        with pytest.raises(DomainError):
            Graph.from_edges(3, [(2, 2)])
        with pytest.raises(DomainError):
            Graph.from_edges(2, [(1, 3)])

    def test_json(self) -> None:
        """Test the edge-list object form."""
        g = graph_from_json({"n": 3, "edges": [[1, 2], [3, 2]]})
        assert g == path_graph(3)
        assert graph_to_json(g) == {"n": 3, "edges": [[1, 2], [2, 3]]}
        with pytest.raises(ParseError):
            graph_from_json({"edges": []})
        with pytest.raises(ParseError):
            graph_from_json({"n": 2, "edges": [[1, 1]]})


class TestGraph6:
    """Tests for graph6 IO."""

    def test_known_codes(self) -> None:
        """Test header-less graph6 codes of small graphs."""
        assert to_graph6(complete_graph(3)) == "Bw"
        assert to_graph6(empty_graph(3)) == "B?"
        assert to_graph6(empty_graph(1)) == "@"

    def test_read_back(self) -> None:
        """Test from_graph6 inverts to_graph6."""
        g = Graph.from_edges(5, [(1, 4), (2, 5), (3, 4)])
        assert from_graph6(to_graph6(g)) == g

    def test_invalid(self) -> None:
        """Test malformed graph6 raises ParseError."""
        with pytest.raises(ParseError):
            from_graph6("é")


class TestCanonicalForm:
    """Tests for canonical_form and is_isomorphic."""

    def test_relabeling_invariance(self) -> None:
        """Test every relabeling of a graph shares its canonical form."""
        rng = random.Random(5)
        g = Graph.from_edges(6, [(1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (2, 6)])
        for _ in range(30):
            order = list(range(1, 7))
            rng.shuffle(order)
            h = g.relabel(order)
            assert is_isomorphic(g, h)
            assert canonical_form(h) == canonical_form(g)

    def test_not_isomorphic(self) -> None:
        """Test K2 + K1 against P3."""
        assert not is_isomorphic(Graph.from_edges(3, [(1, 2)]), path_graph(3))

    def test_two_vertex_forms(self) -> None:
        """Test the labeled graphs on 2 vertices collapse to 2 forms."""
        assert len({canonical_form(g) for g in labeled_graphs(2)}) == 2

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_agrees_with_networkx(self, n: int) -> None:
        """Test canonical forms agree with networkx isomorphism on all labeled graphs."""
        graphs = list(labeled_graphs(n))
        rng = random.Random(n)
        for g, h in (rng.sample(graphs, 2) for _ in range(200)):
            assert is_isomorphic(g, h) == nx.is_isomorphic(to_networkx(g), to_networkx(h))


class TestEnumerateGraphs:
    """Tests for enumerate_graphs."""

    @pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156), (7, 1044)])
    def test_class_counts(self, n: int, count: int) -> None:
        """Test the number of isomorphism classes."""
        assert len(enumerate_graphs(n)) == count

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_brute_force(self, n: int) -> None:
        """Test enumeration equals the canonical forms of all labeled graphs."""
        assert set(enumerate_graphs(n)) == {canonical_form(g) for g in labeled_graphs(n)}

    def test_pairwise_nonisomorphic(self) -> None:
        """Test no two representatives on 5 vertices are isomorphic per networkx."""
        graphs = [to_networkx(g) for g in enumerate_graphs(5)]
        for a, b in combinations(graphs, 2):
            if a.number_of_edges() == b.number_of_edges():
                assert not nx.is_isomorphic(a, b)

    def test_deterministic_order(self) -> None:
        """Test representatives come sorted by graph6."""
        codes = [canonical_graph6(g) for g in enumerate_graphs(4)]
        assert codes == sorted(codes)

    def test_bound(self) -> None:
        """Test orders above the bound raise ResourceError."""
        with pytest.raises(ResourceError):
            enumerate_graphs(9)
        with pytest.raises(ResourceError):
            enumerate_graphs(6, bound=5)
