"""Decks, preimage counting and the q-Reconstruction pipeline pieces."""

from __future__ import annotations

import json
import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache
from math import prod

from pydantic import BaseModel, Field

from .errors import DomainError, InvalidDeckError, InvalidSpecError, ParseError
from .fp import At, First, FPFunc, Index, Product
from .graphs import (
    MAX_GRAPH_ORDER,
    Graph,
    canonical_graph6,
    check_order,
    enumerate_graphs,
    from_graph6,
    graph_from_json,
)
from .natpoly import NatPoly
from .strings import DEFAULT_ALPHABET, Domain, unary
from .targets import TargetSpec

logger = logging.getLogger("gaplab")


@dataclass(frozen=True)
class Deck:
    """Multiset of cards, stored as sorted canonical graph6 codes."""

    cards: tuple[str, ...]

    @classmethod
    def from_graphs(cls, cards: Iterable[Graph]) -> Deck:
        graphs = list(cards)
        if not graphs:
            raise InvalidDeckError("a deck needs at least one card")
        sizes = {card.order for card in graphs}
        if len(sizes) != 1:
            raise InvalidDeckError(f"cards have mixed vertex counts {sorted(sizes)}")
        return cls(tuple(sorted(canonical_graph6(card) for card in graphs)))

    @classmethod
    def from_graph6(cls, codes: Iterable[str]) -> Deck:
        return cls.from_graphs(from_graph6(code) for code in codes)

    def graphs(self) -> list[Graph]:
        return [from_graph6(code) for code in self.cards]

    @property
    def size(self) -> int:
        return len(self.cards)

    def card_order(self) -> int:
        orders = {card.order for card in self.graphs()}
        if len(orders) != 1:
            raise InvalidDeckError(f"cards have mixed vertex counts {sorted(orders)}")
        return orders.pop()

    def serialization(self) -> str:
        """The input string <G_1, ..., G_n> fed to a gap machine."""
        return ",".join(self.cards)


def load_decks(text: str) -> list[Deck]:
    """Decks from a JSON array of card lists or from lines of comma-separated graph6.

    JSON cards may be graph6 strings or {"n": ..., "edges": [...]} objects.
    Blank lines and lines starting with '#' are skipped.
    """
    if text.lstrip().startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.pos) from e
        if not all(isinstance(cards, list) for cards in data):
            raise ParseError("a JSON deck file is an array of card arrays")
        return [Deck.from_graphs(graph_from_json(card) for card in cards) for cards in data]
    decks = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            decks.append(Deck.from_graph6(code for code in line.split(",") if code.strip()))
    return decks


def delete_vertex(graph: Graph, k: int) -> Graph:
    """Remove vertex k and shift the vertices above it down by one."""
    if not 1 <= k <= graph.order:
        raise DomainError(f"vertex {k} not in 1..{graph.order}")

    def shift(v: int) -> int:
        return v - 1 if v > k else v

    return Graph.from_edges(
        graph.order - 1,
        ((shift(u), shift(v)) for u, v in graph.edges if k not in (u, v)),
    )


def deck(graph: Graph) -> Deck:
    if graph.order < 1:
        raise DomainError("the graph without vertices has no deck")
    return Deck.from_graphs(delete_vertex(graph, k) for k in range(1, graph.order + 1))


@lru_cache(maxsize=None)
def _preimage_index(n: int) -> Counter[tuple[str, ...]]:
    index: Counter[tuple[str, ...]] = Counter(deck(g).cards for g in enumerate_graphs(n))
    logger.info(f"Indexed {sum(index.values())} decks of {n}-vertex graphs")
    return index


def edge_count_feasible(d: Deck) -> bool:
    """Card edge counts must sum to (n - 2)|E| for some integer |E| when n >= 3."""
    n = d.size
    if n < 3:
        return True
    total = sum(card.edge_count for card in d.graphs())
    return total % (n - 2) == 0


def _check_deck(d: Deck, bound: int) -> bool:
    """Validate ``d``; False when its card size cannot match its card count."""
    if not d.cards:
        raise InvalidDeckError("a deck needs at least one card")
    card_order = d.card_order()
    check_order(d.size, bound)
    if card_order != d.size - 1:
        logger.debug(f"Deck of {d.size} cards has cards on {card_order} vertices")
        return False
    return True


def pcount(d: Deck, bound: int = MAX_GRAPH_ORDER) -> int:
    """Number of nonisomorphic graphs whose deck is ``d``."""
    if not _check_deck(d, bound) or not edge_count_feasible(d):
        return 0
    return _preimage_index(d.size).get(d.cards, 0)


def brute_force_pcount(d: Deck, bound: int = MAX_GRAPH_ORDER) -> int:
    """pcount without the edge-count prefilter or the memoized index."""
    if not _check_deck(d, bound):
        return 0
    return sum(1 for g in enumerate_graphs(d.size, bound) if deck(g) == d)


def is_legitimate(d: Deck, bound: int = MAX_GRAPH_ORDER) -> bool:
    return pcount(d, bound) > 0


@dataclass(frozen=True)
class RejectGapZero:
    """Some card lies outside the restricted class."""

    card: str


@dataclass(frozen=True)
class Proceed:
    count: int


def restricted_legitimate(d: Deck, k: int, bound: int = MAX_GRAPH_ORDER) -> RejectGapZero | Proceed:
    """Gap machine front end for the class of graphs with minimum degree <= k."""
    for code, card in zip(d.cards, d.graphs()):
        if card.min_degree() > k:
            return RejectGapZero(code)
    return Proceed(pcount(d, bound))


# Length padding and target embeddings


def padded_targets(h: FPFunc, input_length: int, n: int, alphabet: str = DEFAULT_ALPHABET) -> tuple[int, int]:
    """Return (hhat(0^m), h') for m = input_length.

    hhat(0^m) is the product of h(0^i) over 0 <= i <= m and h' leaves out
    the factor i = n, so h(0^n) * h' = hhat(0^m).
    """
    if not 0 <= n <= input_length:
        raise DomainError(f"need 0 <= n <= input length, got n={n}, m={input_length}")
    values = [h.evaluate(unary(i, alphabet), alphabet) for i in range(input_length + 1)]
    return prod(values), prod(value for i, value in enumerate(values) if i != n)


def multiplied_to_indexed(f1: FPFunc, r: NatPoly, domain: Domain | None = None) -> TargetSpec:
    """Targets f2(<0^n, i>) = i * f1(0^n) for 1 <= i <= r(n)."""
    domain = domain or Domain()
    for n in domain.lengths():
        if f1.evaluate(unary(n, domain.alphabet), domain.alphabet) == 0:
            raise InvalidSpecError(f"f1 vanishes at length {n}")
    return TargetSpec("length", Product((Index(), At(f1, First()))), r)


# Reports


class PcountViolation(BaseModel):
    n: int
    graph: str
    pcount: int
    bound: int


class OrderSummary(BaseModel):
    n: int
    graphs: int
    max_pcount: int


class ReconstructionReport(BaseModel):
    n_min: int
    n_max: int
    q: str
    graphs_checked: int = 0
    max_pcount: int = 0
    histogram: dict[int, int] = Field(default_factory=dict)
    orders: list[OrderSummary] = Field(default_factory=list)
    violations: list[PcountViolation] = Field(default_factory=list)
    extra_decks: dict[str, int] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def q_reconstruction_report(
    n_max: int,
    q: NatPoly,
    n_min: int = 3,
    bound: int = MAX_GRAPH_ORDER,
    extra_decks: Iterable[Deck] = (),
) -> ReconstructionReport:
    """pcount(deck(G)) for every canonical G with n_min <= |V| <= n_max."""
    check_order(n_max, bound)
    n_min = max(n_min, 1)
    report = ReconstructionReport(n_min=n_min, n_max=n_max, q=str(q))
    histogram: Counter[int] = Counter()
    for n in range(n_min, n_max + 1):
        counts = []
        for g in enumerate_graphs(n, bound):
            count = pcount(deck(g), bound)
            counts.append(count)
            histogram[count] += 1
            if count > q(n):
                report.violations.append(
                    PcountViolation(n=n, graph=canonical_graph6(g), pcount=count, bound=q(n))
                )
        report.orders.append(OrderSummary(n=n, graphs=len(counts), max_pcount=max(counts, default=0)))
        logger.info(f"n={n}: {len(counts)} graphs, max pcount {max(counts, default=0)}")
    for d in extra_decks:
        report.extra_decks[d.serialization()] = pcount(d, bound)
    report.graphs_checked = sum(histogram.values())
    report.max_pcount = max(histogram, default=0)
    report.histogram = dict(sorted(histogram.items()))
    return report


class DeckWitness(BaseModel):
    """One input of the q-Reconstruction gap machine."""

    deck: str
    n: int
    input_length: int
    pcount: int
    legitimate: bool
    gap: int
    hhat: int
    index_in_range: bool
    matches: bool


def deck_gap_witness(
    d: Deck,
    h: FPFunc,
    q: NatPoly,
    bound: int = MAX_GRAPH_ORDER,
    alphabet: str = DEFAULT_ALPHABET,
) -> DeckWitness:
    """Gap pcount * h(0^n) * h'(input) against the target i * hhat(0^{|input|}).

    The input is the deck's serialization. On a legitimate deck the gap
    equals i * hhat with i = pcount in 1..q(n); otherwise it is 0.
    """
    n = d.size
    input_length = len(d.serialization())
    count = pcount(d, bound)
    hhat, hprime = padded_targets(h, input_length, n, alphabet)
    gap = count * h.evaluate(unary(n, alphabet), alphabet) * hprime
    legitimate = count > 0
    in_range = 1 <= count <= q(n) if legitimate else count == 0
    return DeckWitness(
        deck=d.serialization(),
        n=n,
        input_length=input_length,
        pcount=count,
        legitimate=legitimate,
        gap=gap,
        hhat=hhat,
        index_in_range=in_range,
        matches=gap == count * hhat,
    )


class DeckWitnessReport(BaseModel):
    checked: int = 0
    failures: list[DeckWitness] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def deck_witness_report(
    n_max: int,
    q: NatPoly,
    h: FPFunc,
    extra_decks: Iterable[Deck] = (),
    bound: int = MAX_GRAPH_ORDER,
) -> DeckWitnessReport:
    """deck_gap_witness over the decks of all graphs on 1..n_max vertices."""
    check_order(n_max, bound)
    report = DeckWitnessReport()
    decks = [deck(g) for n in range(1, n_max + 1) for g in enumerate_graphs(n, bound)]
    for d in [*decks, *extra_decks]:
        witness = deck_gap_witness(d, h, q, bound)
        report.checked += 1
        if not (witness.matches and witness.index_in_range):
            report.failures.append(witness)
    logger.info(f"Checked {report.checked} deck witnesses, {len(report.failures)} failure(s)")
    return report
