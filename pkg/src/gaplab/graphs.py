"""Small simple graphs: canonical forms, orderly enumeration and graph6 IO.

Vertices are 1..n. The canonical form of a graph is its relabeling whose
adjacency code is lexicographically smallest, where the code lists the
upper triangle column by column (the graph6 bit order) and only vertex
orders with nondecreasing degree are considered. That set of orders is
preserved by isomorphisms, so two graphs share a canonical form exactly
when they are isomorphic.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Any

import networkx as nx

from .errors import DomainError, ParseError, ResourceError

logger = logging.getLogger("gaplab")

MAX_GRAPH_ORDER = 8


@dataclass(frozen=True)
class Graph:
    order: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        if self.order < 0:
            raise DomainError("vertex count must be nonnegative")
        for u, v in self.edges:
            if not (1 <= u < v <= self.order):
                raise DomainError(f"edge ({u}, {v}) is not a pair u < v of vertices in 1..{self.order}")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> Graph:
        normalized = set()
        for u, v in edges:
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            normalized.add((min(u, v), max(u, v)))
        return cls(order, frozenset(normalized))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbor bitmask per vertex, 0-based."""
        masks = [0] * self.order
        for u, v in self.edges:
            masks[u - 1] |= 1 << (v - 1)
            masks[v - 1] |= 1 << (u - 1)
        return tuple(masks)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self.masks[v - 1].bit_count()

    def degrees(self) -> list[int]:
        return [mask.bit_count() for mask in self.masks]

    def min_degree(self) -> int:
        """Smallest vertex degree; 0 for the graph without vertices."""
        return min(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u - 1] >> (v - 1) & 1)

    def relabel(self, order: list[int]) -> Graph:
        """Graph whose vertex i + 1 is the old vertex ``order[i]``."""
        position = {old: new + 1 for new, old in enumerate(order)}
        return Graph.from_edges(self.order, ((position[u], position[v]) for u, v in self.edges))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(1, n + 1), 2))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, v + 1) for v in range(1, n)))


def _best_order(graph: Graph) -> list[int]:
    masks = graph.masks
    degrees = graph.degrees()
    best: list[int] = []
    best_columns: list[int] = []

    def search(order: list[int], columns: list[int], remaining: list[int]) -> None:
        nonlocal best, best_columns
        if best and columns > best_columns[: len(columns)]:
            return
        if not remaining:
            if not best or columns < best_columns:
                best, best_columns = order, columns
            return
        low = min(degrees[v] for v in remaining)
        for v in remaining:
            if degrees[v] != low:
                continue
            column = 0
            for u in order:
                column = column << 1 | (masks[u] >> v & 1)
            rest = [u for u in remaining if u != v]
            search(order + [v], columns + [column] if order else columns, rest)

    search([], [], list(range(graph.order)))
    return [v + 1 for v in best]


@lru_cache(maxsize=200_000)
def canonical_form(graph: Graph) -> Graph:
    if graph.order <= 1:
        return graph
    return graph.relabel(_best_order(graph))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.order == h.order and g.edge_count == h.edge_count and canonical_form(g) == canonical_form(h)


def to_networkx(graph: Graph) -> nx.Graph:
    result = nx.Graph()
    result.add_nodes_from(range(1, graph.order + 1))
    result.add_edges_from(sorted(graph.edges))
    return result


def from_networkx(nx_graph: nx.Graph) -> Graph:
    """Relabel nodes 1..n in their iteration order."""
    position = {node: i + 1 for i, node in enumerate(nx_graph.nodes)}
    return Graph.from_edges(len(position), ((position[u], position[v]) for u, v in nx_graph.edges))


def to_graph6(graph: Graph) -> str:
    return nx.to_graph6_bytes(to_networkx(graph), header=False).decode("ascii").strip()


def from_graph6(text: str) -> Graph:
    try:
        return from_networkx(nx.from_graph6_bytes(text.strip().encode("ascii")))
    except (nx.NetworkXError, ValueError, IndexError, UnicodeEncodeError) as e:
        raise ParseError(f"invalid graph6 string {text!r}: {e}") from e


def canonical_graph6(graph: Graph) -> str:
    return to_graph6(canonical_form(graph))


def graph_to_json(graph: Graph) -> dict[str, Any]:
    return {"n": graph.order, "edges": [list(edge) for edge in sorted(graph.edges)]}


def graph_from_json(data: Any) -> Graph:
    """Accept a graph6 string or an {"n": ..., "edges": [[u, v], ...]} object."""
    if isinstance(data, str):
        return from_graph6(data)
    if not isinstance(data, dict) or "n" not in data:
        raise ParseError(f"expected a graph6 string or an edge-list object, got {data!r}")
    try:
        return Graph.from_edges(int(data["n"]), ((int(u), int(v)) for u, v in data.get("edges", [])))
    except (TypeError, ValueError, DomainError) as e:
        raise ParseError(f"invalid edge list: {e}") from e


def labeled_graphs(n: int) -> Iterator[Graph]:
    """All 2^(n choose 2) graphs on vertices 1..n."""
    slots = list(combinations(range(1, n + 1), 2))
    for bits in range(1 << len(slots)):
        yield Graph(n, frozenset(slot for i, slot in enumerate(slots) if bits >> i & 1))


def check_order(n: int, bound: int) -> None:
    if n < 0:
        raise DomainError("vertex count must be nonnegative")
    if n > min(bound, MAX_GRAPH_ORDER):
        raise ResourceError(f"graphs on {n} vertices exceed the bound {min(bound, MAX_GRAPH_ORDER)}")


@lru_cache(maxsize=None)
def _classes(n: int) -> tuple[Graph, ...]:
    if n == 0:
        return (Graph(0),)
    found: set[Graph] = set()
    for smaller in _classes(n - 1):
        for size in range(n):
            for neighbors in combinations(range(1, n), size):
                extended = Graph(n, smaller.edges | {(u, n) for u in neighbors})
                found.add(canonical_form(extended))
    logger.info(f"Enumerated {len(found)} graphs on {n} vertices")
    return tuple(sorted(found, key=to_graph6))


def enumerate_graphs(n: int, bound: int = MAX_GRAPH_ORDER) -> tuple[Graph, ...]:
    """One canonical representative per isomorphism class, sorted by graph6."""
    check_order(n, bound)
    return _classes(n)
