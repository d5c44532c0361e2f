from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import TypeVar

import networkx as nx
from loguru import logger
from networkx.utils import UnionFind

from prymtools.errors import DisconnectedGraphError, DomainError, InputFormatError

Rat = Fraction

V = TypeVar("V", bound="IntegerVector")


class IntegerVector:
    """Finitely supported integer vector keyed by vertex or edge ids.

    Zero entries are dropped so that equality is equality of vectors.
    """

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Mapping[int, int] | None = None) -> None:
        cleaned = {
            int(key): int(value)
            for key, value in sorted((coefficients or {}).items())
            if value != 0
        }
        self._coefficients = MappingProxyType(cleaned)

    @property
    def coefficients(self) -> Mapping[int, int]:
        return self._coefficients

    @classmethod
    def unit(cls: type[V], key: int, value: int = 1) -> V:
        return cls({key: value})

    def __getitem__(self, key: int) -> int:
        return self._coefficients.get(key, 0)

    def items(self) -> Iterable[tuple[int, int]]:
        return self._coefficients.items()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._coefficients)

    def is_zero(self) -> bool:
        return not self._coefficients

    def _combine(self: V, other: IntegerVector, sign: int) -> V:
        merged = dict(self._coefficients)
        for key, value in other.items():
            merged[key] = merged.get(key, 0) + sign * value
        return type(self)(merged)

    def __add__(self: V, other: V) -> V:
        return self._combine(other, 1)

    def __sub__(self: V, other: V) -> V:
        return self._combine(other, -1)

    def __neg__(self: V) -> V:
        return type(self)({key: -value for key, value in self.items()})

    def __mul__(self: V, scalar: int) -> V:
        return type(self)({key: scalar * value for key, value in self.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerVector):
            return NotImplemented
        return dict(self._coefficients) == dict(other._coefficients)

    def __hash__(self) -> int:
        return hash(frozenset(self._coefficients.items()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({dict(self._coefficients)})"

    def as_dict(self) -> dict[int, int]:
        return dict(self._coefficients)


class Chain(IntegerVector):
    """Integer 1-chain; keys are edge ids."""

    __slots__ = ()

    def boundary(self, graph: Graph) -> dict[int, int]:
        result: dict[int, int] = {}
        for eid, value in self.items():
            edge = graph.edge(eid)
            result[edge.dst] = result.get(edge.dst, 0) + value
            result[edge.src] = result.get(edge.src, 0) - value
        return {v: c for v, c in result.items() if c != 0}

    def is_cycle(self, graph: Graph) -> bool:
        return not self.boundary(graph)


@dataclass(frozen=True)
class Edge:
    id: int
    src: int
    dst: int

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst

    def other(self, vertex: int) -> int:
        return self.dst if vertex == self.src else self.src


@dataclass(frozen=True, eq=False)
class Graph:
    """Oriented multigraph with exact positive edge lengths.

    Loops and parallel edges are allowed. Missing lengths default to 1.
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    lengths: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        vertices = tuple(sorted(self.vertices))
        if len(set(vertices)) != len(vertices):
            raise InputFormatError("duplicate vertex ids")
        edges = tuple(sorted(self.edges, key=lambda e: e.id))
        if len({e.id for e in edges}) != len(edges):
            raise InputFormatError("duplicate edge ids")
        known = set(vertices)
        for edge in edges:
            if edge.src not in known or edge.dst not in known:
                raise InputFormatError(f"edge {edge.id} references an unknown vertex")
        lengths: dict[int, Fraction] = {}
        edge_ids = {e.id for e in edges}
        for eid in self.lengths:
            if eid not in edge_ids:
                raise InputFormatError(f"length given for unknown edge {eid}")
        for edge in edges:
            length = Fraction(self.lengths.get(edge.id, 1))
            if length <= 0:
                raise InputFormatError(f"edge {edge.id} must have positive length")
            lengths[edge.id] = length
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "lengths", MappingProxyType(lengths))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and dict(self.lengths) == dict(other.lengths)
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges, frozenset(self.lengths.items())))

    @cached_property
    def _edge_index(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self) -> dict[int, tuple[Edge, ...]]:
        incident: dict[int, list[Edge]] = {v: [] for v in self.vertices}
        for edge in self.edges:
            incident[edge.src].append(edge)
            if not edge.is_loop:
                incident[edge.dst].append(edge)
        return {v: tuple(es) for v, es in incident.items()}

    def edge(self, eid: int) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError as e:
            raise DomainError(f"unknown edge id {eid}") from e

    def length(self, eid: int) -> Fraction:
        return self.lengths[eid]

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges)

    def incident(self, vertex: int) -> tuple[Edge, ...]:
        """Edges touching ``vertex``; a loop is listed once."""
        return self._incidence[vertex]

    def has_loops(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def weight(self, edge_ids: Iterable[int]) -> Fraction:
        result = Fraction(1)
        for eid in edge_ids:
            result *= self.lengths[eid]
        return result

    def to_networkx(self, removed: Iterable[int] = ()) -> nx.MultiGraph:
        skip = set(removed)
        nx_graph = nx.MultiGraph()
        nx_graph.add_nodes_from(self.vertices)
        for edge in self.edges:
            if edge.id not in skip:
                nx_graph.add_edge(edge.src, edge.dst, key=edge.id)
        return nx_graph

    def with_lengths(self, lengths: Mapping[int, Fraction]) -> Graph:
        return Graph(self.vertices, self.edges, dict(lengths))


def connected_components(graph: Graph, removed: Iterable[int] = ()) -> list[frozenset[int]]:
    """Components of ``graph`` minus the edges in ``removed``; vertices stay."""
    removed = set(removed)
    unknown = removed - set(graph.edge_ids)
    if unknown:
        raise DomainError(f"cannot remove unknown edges {sorted(unknown)}")
    components = nx.connected_components(graph.to_networkx(removed))
    return sorted((frozenset(c) for c in components), key=min)


def require_connected(graph: Graph) -> None:
    components = connected_components(graph)
    if len(components) > 1:
        logger.error(f"disconnected graph with {len(components)} components")
        raise DisconnectedGraphError(components)


def genus(graph: Graph) -> int:
    require_connected(graph)
    return len(graph.edges) - len(graph.vertices) + 1


def is_spanning_tree(graph: Graph, tree: Iterable[int]) -> bool:
    tree = set(tree)
    if not tree <= set(graph.edge_ids) or len(tree) != len(graph.vertices) - 1:
        return False
    forest = UnionFind(graph.vertices)
    for eid in sorted(tree):
        edge = graph.edge(eid)
        if forest[edge.src] == forest[edge.dst]:
            return False
        forest.union(edge.src, edge.dst)
    return True


def spanning_trees(graph: Graph) -> Iterator[frozenset[int]]:
    """All spanning trees, in lexicographic order of their sorted edge ids.

    Include/exclude backtracking over edges in id order; an edge is skipped
    when it would close a cycle, and excluding an edge is abandoned as soon as
    the edges still available can no longer connect the graph.
    """
    require_connected(graph)
    edges = [e for e in graph.edges if not e.is_loop]
    needed = len(graph.vertices) - 1

    def still_spannable(chosen: list[Edge], start: int) -> bool:
        forest = UnionFind(graph.vertices)
        for edge in chosen:
            forest.union(edge.src, edge.dst)
        for edge in edges[start:]:
            forest.union(edge.src, edge.dst)
        return len({forest[v] for v in graph.vertices}) == 1

    def extend(chosen: list[Edge], start: int) -> Iterator[frozenset[int]]:
        if len(chosen) == needed:
            yield frozenset(e.id for e in chosen)
            return
        if len(edges) - start < needed - len(chosen):
            return
        edge = edges[start]
        forest = UnionFind(graph.vertices)
        for other in chosen:
            forest.union(other.src, other.dst)
        if forest[edge.src] != forest[edge.dst]:
            yield from extend([*chosen, edge], start + 1)
        if still_spannable(chosen, start + 1):
            yield from extend(chosen, start + 1)

    yield from extend([], 0)


def first_spanning_tree(graph: Graph) -> frozenset[int]:
    return next(iter(spanning_trees(graph)))


def tree_path(graph: Graph, tree: Iterable[int], start: int, end: int) -> Chain:
    """Chain of the unique path from ``start`` to ``end`` inside ``tree``."""
    nx_tree = nx.Graph()
    nx_tree.add_nodes_from(graph.vertices)
    for eid in tree:
        edge = graph.edge(eid)
        nx_tree.add_edge(edge.src, edge.dst, id=eid)
    walk = nx.shortest_path(nx_tree, start, end)
    coefficients: dict[int, int] = {}
    for u, w in zip(walk, walk[1:]):
        eid = nx_tree[u][w]["id"]
        coefficients[eid] = 1 if graph.edge(eid).src == u else -1
    return Chain(coefficients)


def fundamental_cycle(graph: Graph, tree: Iterable[int], eid: int) -> Chain:
    """The cycle supported on ``tree`` plus ``eid`` that contains ``+eid``."""
    tree = frozenset(tree)
    if eid in tree:
        raise DomainError(f"edge {eid} belongs to the tree")
    if not is_spanning_tree(graph, tree):
        raise DomainError("tree is not a spanning tree")
    edge = graph.edge(eid)
    if edge.is_loop:
        return Chain.unit(eid)
    return Chain.unit(eid) + tree_path(graph, tree, edge.dst, edge.src)


def chain_pairing(c: IntegerVector, d: IntegerVector) -> int:
    return sum(value * d[key] for key, value in c.items())


def length_pairing(c: Chain, d: Chain, graph: Graph) -> Fraction:
    return sum(
        (value * d[eid] * graph.length(eid) for eid, value in c.items()), Fraction(0)
    )


def subdivide_edge(
    graph: Graph, eid: int, first_length: Fraction | None = None
) -> tuple[Graph, dict[int, int], int]:
    """Split ``eid`` at a new vertex.

    The first half keeps the id and runs from the old source to the new
    vertex; the second half gets a fresh id. Returns the new graph, the
    edge provenance map (new id -> old id) and the id of the second half.
    """
    edge = graph.edge(eid)
    total = graph.length(eid)
    if first_length is None:
        first_length = total / 2
    if not 0 < first_length < total:
        raise DomainError(f"subdivision point must lie strictly inside edge {eid}")
    middle = max(graph.vertices) + 1
    second = max(graph.edge_ids) + 1
    edges = [e for e in graph.edges if e.id != eid]
    edges += [Edge(eid, edge.src, middle), Edge(second, middle, edge.dst)]
    lengths = dict(graph.lengths)
    lengths[eid] = first_length
    lengths[second] = total - first_length
    provenance = {e: e for e in graph.edge_ids}
    provenance[second] = eid
    return Graph((*graph.vertices, middle), tuple(edges), lengths), provenance, second
