"""Tests for decks, pcount and the reconstruction pipeline pieces."""

import json
import random
from collections import Counter

import pytest

from gaplab.errors import DomainError, InvalidDeckError, InvalidSpecError, ParseError, ResourceError
from gaplab.fp import Const, Length, Sum, Table
from gaplab.graphs import Graph, complete_graph, empty_graph, enumerate_graphs, path_graph, to_graph6
from gaplab.natpoly import NatPoly
from gaplab.reconstruct import (
    Deck,
    Proceed,
    RejectGapZero,
    brute_force_pcount,
    deck,
    deck_gap_witness,
    deck_witness_report,
    delete_vertex,
    edge_count_feasible,
    is_legitimate,
    load_decks,
    multiplied_to_indexed,
    padded_targets,
    pcount,
    q_reconstruction_report,
    restricted_legitimate,
)
from gaplab.strings import Domain, unary

K1 = "@"
K2 = "A_"
TWO_K1 = "A?"
SUCCESSOR = Sum((Length(), Const(1)))


class TestDeleteVertex:
    """Tests for delete_vertex and deck."""

    def test_shifts_higher_vertices(self) -> None:
        """Test deleting the middle vertex of a path."""
        assert delete_vertex(path_graph(3), 2) == empty_graph(2)
        assert delete_vertex(path_graph(4), 1) == path_graph(3)

    def test_out_of_range(self) -> None:
        """Test vertex numbers outside 1..n."""
        with pytest.raises(DomainError):
            delete_vertex(path_graph(3), 4)

    def test_triangle_deck(self) -> None:
        """Test the deck of K3 is three copies of K2."""
        assert deck(complete_graph(3)).cards == (K2, K2, K2)

    def test_path_deck(self) -> None:
        """Test the deck of P3 is K2, K2 and 2K1."""
        assert deck(path_graph(3)) == Deck.from_graph6([K2, TWO_K1, K2])

    def test_relabel_invariant(self) -> None:
        """Test isomorphic graphs have equal decks."""
        g = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 3)])
        assert deck(g) == deck(g.relabel([4, 2, 1, 3]))


class TestDeck:
    """Tests for Deck construction."""

    def test_empty(self) -> None:
        """Test a deck needs cards."""
        with pytest.raises(InvalidDeckError):
            Deck.from_graphs([])

    def test_mixed_orders(self) -> None:
        """Test cards must share a vertex count."""
        with pytest.raises(InvalidDeckError, match="mixed"):
            Deck.from_graph6([K2, "Bw"])

    def test_serialization(self) -> None:
        """Test cards are canonical and sorted."""
        d = Deck.from_graphs([Graph.from_edges(2, [(1, 2)]), empty_graph(2)])
        assert d.serialization() == f"{TWO_K1},{K2}"


class TestPcount:
    """Tests for pcount and legitimacy."""

    def test_two_isolated_cards(self) -> None:
        """Test <K1, K1> has both 2-vertex graphs as preimages."""
        assert pcount(Deck.from_graph6([K1, K1])) == 2

    def test_triangle_deck(self) -> None:
        """Test <K2, K2, K2> comes only from K3."""
        assert pcount(Deck.from_graph6([K2, K2, K2])) == 1

    def test_edge_count_infeasible(self) -> None:
        """Test 'Bw,B?,B?,B?' fails the edge-count condition."""
        d = Deck.from_graph6(["Bw", "B?", "B?", "B?"])
        assert not edge_count_feasible(d)
        assert pcount(d) == 0
        assert not is_legitimate(d)

    def test_edge_and_isolated_cards(self) -> None:
        """Test <K2, 2K1, 2K1> is the deck of K2 + K1."""
        d = Deck.from_graph6([K2, TWO_K1, TWO_K1])
        assert is_legitimate(d)
        assert d == deck(Graph.from_edges(3, [(1, 2)]))

    def test_card_order_mismatch(self) -> None:
        """Test cards on the wrong number of vertices give 0."""
        assert pcount(Deck.from_graph6([K2, K2])) == 0

    def test_bound(self) -> None:
        """Test decks beyond the bound raise ResourceError."""
        d = deck(complete_graph(6))
        with pytest.raises(ResourceError):
            pcount(d, bound=5)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_agrees_with_brute_force(self, n: int) -> None:
        """Test the indexed count matches direct enumeration."""
        for g in enumerate_graphs(n):
            d = deck(g)
            assert pcount(d) == brute_force_pcount(d)

    @pytest.mark.parametrize("n", [6, 7])
    def test_larger_orders_against_enumeration(self, n: int, rng: random.Random) -> None:
        """Test pcount on real and tampered decks against counts from enumerating all graphs."""
        graphs = enumerate_graphs(n)
        counts = Counter(deck(g) for g in graphs)
        for d in counts:
            assert pcount(d) == counts[d]
        cards = enumerate_graphs(n - 1)
        for g in rng.sample(graphs, 40):
            codes = list(deck(g).cards)
            codes[rng.randrange(n)] = to_graph6(rng.choice(cards))
            tampered = Deck.from_graph6(codes)
            assert pcount(tampered) == counts.get(tampered, 0)
            if not edge_count_feasible(tampered):
                assert counts.get(tampered, 0) == 0

    def test_brute_force_on_illegitimate(self) -> None:
        """Test a deck nothing has."""
        d = Deck.from_graph6([K2, K2, TWO_K1, TWO_K1])
        assert brute_force_pcount(d) == pcount(d) == 0


class TestRestrictedLegitimate:
    """Tests for the minimum-degree front end."""

    def test_proceeds_on_low_degree_cards(self) -> None:
        """Test K2 cards with k = 1."""
        assert restricted_legitimate(deck(complete_graph(3)), 1) == Proceed(1)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_large_k_is_plain_legitimacy(self, n: int) -> None:
        """Test k >= n - 2 never rejects a card and agrees with is_legitimate."""
        decks = [deck(g) for g in enumerate_graphs(n)]
        if n >= 3:
            decks.append(Deck(tuple(sorted([to_graph6(complete_graph(n - 1))] * (n - 1) + [to_graph6(empty_graph(n - 1))]))))
        for d in decks:
            expected = brute_force_pcount(d)
            for k in (n - 2, n - 1, n + 3):
                result = restricted_legitimate(d, k)
                assert result == Proceed(expected)
                assert (result.count > 0) == is_legitimate(d)

    def test_rejects_dense_card(self) -> None:
        """Test a K3 card with k = 1."""
        result = restricted_legitimate(deck(complete_graph(4)), 1)
        assert isinstance(result, RejectGapZero)
        assert result.card == to_graph6(complete_graph(3))


class TestPaddedTargets:
    """Tests for padded_targets and multiplied_to_indexed."""

    def test_random_tables(self, rng: random.Random) -> None:
        """Test h(0^n) * h' = hhat and hhat is the full product for random h tables."""
        for _ in range(50):
            m = rng.randint(0, 6)
            values = [rng.randint(-5, 5) for _ in range(m + 1)]
            h = Table(tuple((unary(i), v) for i, v in enumerate(values)))
            expected = 1
            for v in values:
                expected *= v
            for n in range(m + 1):
                hhat, hprime = padded_targets(h, m, n)
                assert hhat == expected
                assert values[n] * hprime == hhat

    def test_successor(self) -> None:
        """Test h(0^i) = i + 1 with m = 3 and n = 2."""
        assert padded_targets(SUCCESSOR, 3, 2) == (24, 8)

    def test_identity(self) -> None:
        """Test h(0^n) * h' = hhat for every n."""
        for n in range(5):
            hhat, hprime = padded_targets(SUCCESSOR, 4, n)
            assert (n + 1) * hprime == hhat

    def test_n_above_length(self) -> None:
        """Test n must not exceed the input length."""
        with pytest.raises(DomainError):
            padded_targets(SUCCESSOR, 2, 3)

    def test_multiplied_targets(self) -> None:
        """Test targets i * f1(0^n)."""
        spec = multiplied_to_indexed(Const(7), NatPoly.constant(3), Domain("01", 2))
        assert spec.targets("01") == [7, 14, 21]
        negative = multiplied_to_indexed(Const(-2), NatPoly.constant(2), Domain("01", 2))
        assert set(negative.targets("1")) == {-2, -4}

    def test_vanishing_f1(self) -> None:
        """Test f1 = 0 has no multiplied targets."""
        with pytest.raises(InvalidSpecError):
            multiplied_to_indexed(Const(0), NatPoly.constant(1), Domain("01", 1))


class TestQReconstructionReport:
    """Tests for q_reconstruction_report."""

    def test_reconstructible_orders(self) -> None:
        """Test every graph on 3..7 vertices has pcount 1."""
        report = q_reconstruction_report(7, NatPoly.constant(1))
        assert report.ok
        assert report.max_pcount == 1
        assert report.graphs_checked == 4 + 11 + 34 + 156 + 1044
        assert [order.graphs for order in report.orders] == [4, 11, 34, 156, 1044]

    def test_two_vertex_violation(self) -> None:
        """Test n = 2 breaks q = 1."""
        report = q_reconstruction_report(2, NatPoly.constant(1), n_min=2)
        assert report.max_pcount == 2
        assert len(report.violations) == 2

    def test_linear_bound(self) -> None:
        """Test q(n) = n covers n = 2 and 3."""
        report = q_reconstruction_report(3, NatPoly((0, 1)), n_min=2)
        assert report.ok
        assert report.histogram == {1: 4, 2: 2}

    def test_extra_decks(self) -> None:
        """Test hand-written decks are counted."""
        d = Deck.from_graph6(["Bw", "B?", "B?", "B?"])
        report = q_reconstruction_report(3, NatPoly.constant(1), extra_decks=[d])
        assert report.extra_decks == {d.serialization(): 0}


class TestDeckWitness:
    """Tests for the deck gap witness."""

    def test_legitimate_deck(self) -> None:
        """Test the gap is pcount * hhat on a legitimate deck."""
        d = deck(path_graph(3))
        witness = deck_gap_witness(d, SUCCESSOR, NatPoly.constant(1))
        assert witness.legitimate
        assert witness.gap == witness.hhat
        assert witness.input_length == len(d.serialization())

    def test_illegitimate_deck(self) -> None:
        """Test the gap is 0 on an illegitimate deck."""
        witness = deck_gap_witness(Deck.from_graph6([K2, K2, TWO_K1, TWO_K1]), SUCCESSOR, NatPoly.constant(1))
        assert witness.gap == 0
        assert witness.matches and witness.index_in_range

    def test_report(self) -> None:
        """Test all decks of graphs on 1..5 vertices with q(n) = n."""
        report = deck_witness_report(5, NatPoly((0, 1)), SUCCESSOR)
        assert report.ok
        assert report.checked > 34


class TestLoadDecks:
    """Tests for load_decks."""

    def test_lines(self) -> None:
        """Test comma-separated lines with comments."""
        decks = load_decks(f"# decks\n{K1},{K1}\n\n{K2},{K2},{K2}\n")
        assert [pcount(d) for d in decks] == [2, 1]

    def test_json(self) -> None:
        """Test JSON decks with graph6 and edge-list cards."""
        text = json.dumps([[K2, {"n": 2, "edges": [[1, 2]]}, "A_"]])
        (d,) = load_decks(text)
        assert d.cards == (K2, K2, K2)

    def test_invalid_json(self) -> None:
        """Test JSON that is not an array of arrays."""
        with pytest.raises(ParseError):
            load_decks('["A_"]')
        with pytest.raises(ParseError):
            load_decks("[[")
