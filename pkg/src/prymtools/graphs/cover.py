from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Literal

import networkx as nx
from loguru import logger
from networkx.utils import UnionFind

from prymtools.errors import ConsistencyError, DomainError, InvalidCoverError
from prymtools.graphs.core import (
    Chain,
    Edge,
    Graph,
    first_spanning_tree,
    is_spanning_tree,
    require_connected,
    subdivide_edge,
    tree_path,
)

PLUS = 1
MINUS = -1


def lift_vertex(vertex: int, sign: int) -> int:
    """Total-graph id of the lift of ``vertex`` on the given sheet."""
    return 2 * vertex if sign == PLUS else 2 * vertex + 1


def plus_lift_id(eid: int) -> int:
    return 2 * eid


def minus_lift_id(eid: int) -> int:
    return 2 * eid + 1


@dataclass(frozen=True, eq=False)
class FreeDoubleCover:
    """A connected free double cover in (spanning tree, flip set) form.

    Total vertex ``2v`` / ``2v+1`` is the lift of ``v`` on the plus / minus
    sheet, and total edge ``2e`` / ``2e+1`` is the plus / minus lift of ``e``.
    The plus sheet is the component of the lifted tree through the plus lifts.
    """

    base: Graph
    tree: frozenset[int]
    flips: frozenset[int]
    e0: int
    total: Graph
    lift_plus: Mapping[int, int]
    lift_minus: Mapping[int, int]
    sheet: Mapping[int, tuple[int, int]]
    vertex_involution: Mapping[int, int]
    edge_involution: Mapping[int, int]
    sigma: Mapping[int, int]

    def project_edge(self, total_edge: int) -> int:
        return total_edge // 2

    def project_vertex(self, total_vertex: int) -> int:
        return self.sheet[total_vertex][0]

    def involute_edge(self, total_edge: int) -> int:
        return self.edge_involution[total_edge]

    def lifts(self, eid: int) -> tuple[int, int]:
        return self.lift_plus[eid], self.lift_minus[eid]

    @property
    def genus(self) -> int:
        return len(self.base.edges) - len(self.base.vertices) + 1

    def voltages(self) -> dict[int, int]:
        """The Z/2 voltage of every base edge: -1 exactly on the flip set."""
        return {eid: MINUS if eid in self.flips else PLUS for eid in self.base.edge_ids}

    def lift_signs(self) -> dict[int, int]:
        return dict(self.sigma)


def _check_presentation(
    base: Graph, tree: frozenset[int], flips: frozenset[int], e0: int | None
) -> int:
    require_connected(base)
    if not is_spanning_tree(base, tree):
        logger.error(f"edges {sorted(tree)} do not form a spanning tree")
        raise InvalidCoverError(f"edges {sorted(tree)} do not form a spanning tree")
    if not flips:
        raise InvalidCoverError("disconnected cover: the flip set is empty")
    unknown = flips - set(base.edge_ids)
    if unknown:
        raise InvalidCoverError(f"unknown flip edges {sorted(unknown)}")
    if flips & tree:
        raise InvalidCoverError(f"flip edges {sorted(flips & tree)} lie in the tree")
    if e0 is None:
        return min(flips)
    if e0 not in flips:
        raise InvalidCoverError(f"distinguished edge {e0} is not a flip edge")
    return e0


def build_cover(
    base: Graph,
    tree: Iterable[int],
    flips: Iterable[int],
    e0: int | None = None,
    lift_signs: Mapping[int, int] | None = None,
) -> FreeDoubleCover:
    """
    Construct the total graph of the cover presented by a spanning tree and a flip set.

    Args:
        base: The connected base graph.
        tree: Edge ids of a spanning tree of ``base``; no tree edge is flipped.
        flips: Non-empty set of non-tree edges whose lifts cross sheets.
        e0: Distinguished flip edge. Defaults to the smallest flip id. Its
            plus lift always starts on the plus sheet.
        lift_signs: Per other flip edge, +1 when its plus lift starts on the
            plus sheet and -1 when it starts on the minus sheet. Default +1.

    Returns:
        The cover, with total vertex 2v / 2v+1 over v and total edge 2e / 2e+1
        over e.

    Raises:
        InvalidCoverError: If the presentation is not a connected free double cover.
    """
    tree = frozenset(tree)
    flips = frozenset(flips)
    e0 = _check_presentation(base, tree, flips, e0)
    lift_signs = dict(lift_signs or {})
    for eid, sign in lift_signs.items():
        if eid not in flips:
            raise InvalidCoverError(f"lift sign given for edge {eid}, which is not flipped")
        if sign not in (PLUS, MINUS):
            raise InvalidCoverError(f"lift sign of edge {eid} must be +1 or -1")
    if lift_signs.get(e0, PLUS) != PLUS:
        raise InvalidCoverError("the plus lift of the distinguished edge starts on the plus sheet")

    edges: list[Edge] = []
    lengths: dict[int, Fraction] = {}
    sigma: dict[int, int] = {}
    for edge in base.edges:
        if edge.id in flips:
            sign = lift_signs.get(edge.id, PLUS)
            if edge.id != e0:
                sigma[edge.id] = sign
            plus = Edge(plus_lift_id(edge.id), lift_vertex(edge.src, sign), lift_vertex(edge.dst, -sign))
            minus = Edge(minus_lift_id(edge.id), lift_vertex(edge.src, -sign), lift_vertex(edge.dst, sign))
        else:
            plus = Edge(plus_lift_id(edge.id), lift_vertex(edge.src, PLUS), lift_vertex(edge.dst, PLUS))
            minus = Edge(minus_lift_id(edge.id), lift_vertex(edge.src, MINUS), lift_vertex(edge.dst, MINUS))
        edges += [plus, minus]
        lengths[plus.id] = lengths[minus.id] = base.length(edge.id)

    vertices = [lift_vertex(v, s) for v in base.vertices for s in (PLUS, MINUS)]
    total = Graph(tuple(vertices), tuple(edges), lengths)
    sheet = {lift_vertex(v, s): (v, s) for v in base.vertices for s in (PLUS, MINUS)}
    vertex_involution = {lift_vertex(v, s): lift_vertex(v, -s) for v in base.vertices for s in (PLUS, MINUS)}
    edge_involution: dict[int, int] = {}
    for eid in base.edge_ids:
        edge_involution[plus_lift_id(eid)] = minus_lift_id(eid)
        edge_involution[minus_lift_id(eid)] = plus_lift_id(eid)

    logger.debug(
        f"built cover: base |V|={len(base.vertices)} |E|={len(base.edges)}, "
        f"tree={sorted(tree)}, flips={sorted(flips)}, e0={e0}"
    )
    return FreeDoubleCover(
        base=base,
        tree=tree,
        flips=flips,
        e0=e0,
        total=total,
        lift_plus=MappingProxyType({eid: plus_lift_id(eid) for eid in base.edge_ids}),
        lift_minus=MappingProxyType({eid: minus_lift_id(eid) for eid in base.edge_ids}),
        sheet=MappingProxyType(sheet),
        vertex_involution=MappingProxyType(vertex_involution),
        edge_involution=MappingProxyType(edge_involution),
        sigma=MappingProxyType(sigma),
    )


def _sub_vertices(cov: FreeDoubleCover, edges: frozenset[int], vertices: Iterable[int] | None) -> frozenset[int]:
    chosen = set(vertices or ())
    for eid in edges:
        edge = cov.base.edge(eid)
        chosen |= {edge.src, edge.dst}
    if not chosen:
        raise DomainError("empty subgraph")
    return frozenset(chosen)


def _lifted_connected(cov: FreeDoubleCover, edges: frozenset[int], vertices: frozenset[int]) -> bool:
    lifted = nx.MultiGraph()
    lifted.add_nodes_from(lift_vertex(v, s) for v in vertices for s in (PLUS, MINUS))
    for eid in edges:
        for lift in cov.lifts(eid):
            edge = cov.total.edge(lift)
            lifted.add_edge(edge.src, edge.dst, key=lift)
    return bool(nx.is_connected(lifted))


def _has_odd_cycle(cov: FreeDoubleCover, edges: frozenset[int], vertices: frozenset[int]) -> bool:
    """Try to two-colour the sub-graph by flip parity; failure means an odd cycle."""
    forest = UnionFind(vertices)
    switch: dict[int, int] = {}
    tree_edges: set[int] = set()
    for eid in sorted(edges):
        edge = cov.base.edge(eid)
        if forest[edge.src] != forest[edge.dst]:
            forest.union(edge.src, edge.dst)
            tree_edges.add(eid)
    voltage = cov.voltages()
    adjacency = nx.Graph()
    adjacency.add_nodes_from(vertices)
    for eid in tree_edges:
        edge = cov.base.edge(eid)
        adjacency.add_edge(edge.src, edge.dst, id=eid)
    root = min(vertices)
    switch[root] = PLUS
    for u, w in nx.bfs_edges(adjacency, root):
        switch[w] = switch[u] * voltage[adjacency[u][w]["id"]]
    for eid in edges - tree_edges:
        edge = cov.base.edge(eid)
        if switch[edge.src] * voltage[eid] * switch[edge.dst] == MINUS:
            return True
    return False


def preimage_connected(
    cov: FreeDoubleCover,
    edges: Iterable[int],
    vertices: Iterable[int] | None = None,
    method: Literal["both", "lift", "parity"] = "both",
) -> bool:
    """Whether the preimage of a connected sub-graph of the base is connected.

    ``lift`` checks connectivity of the lifted sub-graph directly, ``parity``
    looks for a cycle carrying an odd number of flip edges; ``both`` runs the
    two and insists they agree.
    """
    edges = frozenset(edges)
    chosen = _sub_vertices(cov, edges, vertices)
    sub = nx.MultiGraph()
    sub.add_nodes_from(chosen)
    for eid in edges:
        edge = cov.base.edge(eid)
        sub.add_edge(edge.src, edge.dst, key=eid)
    if not nx.is_connected(sub):
        raise DomainError(f"sub-graph on edges {sorted(edges)} is not connected")
    if method == "lift":
        return _lifted_connected(cov, edges, chosen)
    if method == "parity":
        return _has_odd_cycle(cov, edges, chosen)
    direct = _lifted_connected(cov, edges, chosen)
    parity = _has_odd_cycle(cov, edges, chosen)
    if direct != parity:
        logger.error(f"preimage connectivity disagrees on edges {sorted(edges)}: lift={direct}, parity={parity}")
        raise ConsistencyError(f"preimage connectivity methods disagree on edges {sorted(edges)}")
    return direct


def pushforward_chain(cov: FreeDoubleCover, chain: Chain) -> Chain:
    result: dict[int, int] = {}
    for total_edge, value in chain.items():
        eid = cov.project_edge(total_edge)
        result[eid] = result.get(eid, 0) + value
    return Chain(result)


def pullback_chain(cov: FreeDoubleCover, chain: Chain) -> Chain:
    result: dict[int, int] = {}
    for eid, value in chain.items():
        plus, minus = cov.lifts(eid)
        result[plus] = value
        result[minus] = value
    return Chain(result)


def involute_chain(cov: FreeDoubleCover, chain: Chain) -> Chain:
    return Chain({cov.involute_edge(eid): value for eid, value in chain.items()})


def switching(base: Graph, tree: frozenset[int], voltages: Mapping[int, int]) -> dict[int, int]:
    """Vertex signs that make every tree edge carry voltage +1."""
    root = min(base.vertices)
    switch = {root: PLUS}
    path_to = {v: tree_path(base, tree, root, v) for v in base.vertices}
    for v, path in path_to.items():
        sign = PLUS
        for eid in path.support:
            sign *= voltages[eid]
        switch[v] = sign
    return switch


def cover_from_voltages(
    base: Graph,
    voltages: Mapping[int, int],
    tree: Iterable[int] | None = None,
    e0: int | None = None,
) -> tuple[FreeDoubleCover, dict[int, int]]:
    """Turn a Z/2 voltage assignment into the (tree, flips) presentation.

    The tree defaults to the lexicographically least spanning tree. Returns
    the cover and the vertex switching used.
    """
    require_connected(base)
    missing = set(base.edge_ids) - set(voltages)
    if missing:
        raise InvalidCoverError(f"voltages missing for edges {sorted(missing)}")
    if any(value not in (PLUS, MINUS) for value in voltages.values()):
        raise InvalidCoverError("voltages must be +1 or -1")
    chosen = frozenset(tree) if tree is not None else first_spanning_tree(base)
    if not is_spanning_tree(base, chosen):
        raise InvalidCoverError(f"edges {sorted(chosen)} do not form a spanning tree")
    switch = switching(base, chosen, voltages)
    flips = {
        edge.id
        for edge in base.edges
        if switch[edge.src] * voltages[edge.id] * switch[edge.dst] == MINUS
    }
    return build_cover(base, chosen, flips, e0=e0), switch


@dataclass(frozen=True)
class CoverIsomorphism:
    """Identification of the total graphs of two presentations of one cover."""

    vertex_map: Mapping[int, int]
    edge_map: Mapping[int, int]

    def chain(self, chain: Chain) -> Chain:
        return Chain({self.edge_map[eid]: value for eid, value in chain.items()})


def retree(
    cov: FreeDoubleCover, tree: Iterable[int], e0: int | None = None
) -> tuple[FreeDoubleCover, CoverIsomorphism]:
    """Present the same cover on another spanning tree."""
    new_cover, switch = cover_from_voltages(cov.base, cov.voltages(), tree, e0)
    vertex_map = {
        total_vertex: lift_vertex(v, sign * switch[v])
        for total_vertex, (v, sign) in cov.sheet.items()
    }
    edge_map: dict[int, int] = {}
    for total_edge in cov.total.edges:
        eid = cov.project_edge(total_edge.id)
        v, sign = cov.sheet[total_edge.src]
        plus, minus = new_cover.lifts(eid)
        edge_map[total_edge.id] = plus if sign * switch[v] == PLUS else minus
    for total_edge in cov.total.edges:
        image = new_cover.total.edge(edge_map[total_edge.id])
        if (image.src, image.dst) != (vertex_map[total_edge.src], vertex_map[total_edge.dst]):
            raise ConsistencyError(f"re-presentation does not preserve edge {total_edge.id}")
    return new_cover, CoverIsomorphism(MappingProxyType(vertex_map), MappingProxyType(edge_map))


@dataclass(frozen=True)
class LooplessModel:
    cover: FreeDoubleCover
    base_provenance: Mapping[int, int]
    total_provenance: Mapping[int, int]

    def original_base_edge(self, eid: int) -> int:
        return self.base_provenance[eid]

    def original_total_edge(self, total_edge: int) -> int:
        return self.total_provenance[total_edge]


def loopless_model(cov: FreeDoubleCover) -> LooplessModel:
    """Subdivide the base loops whose lifts are loops.

    Flipped loops already lift to pairs of parallel edges, so only the
    unflipped ones are split; the first half joins the tree.
    """
    base = cov.base
    tree = set(cov.tree)
    provenance = {eid: eid for eid in base.edge_ids}
    for eid in sorted(base.edge_ids):
        edge = base.edge(eid)
        if not edge.is_loop or eid in cov.flips:
            continue
        base, _, second = subdivide_edge(base, eid)
        provenance[second] = provenance[eid]
        tree.add(eid)
        logger.debug(f"subdivided loop {eid}, second half is edge {second}")
    if base is cov.base:
        model = cov
    else:
        model = build_cover(base, tree, cov.flips, e0=cov.e0, lift_signs=cov.sigma)
    total_provenance: dict[int, int] = {}
    for eid, original in provenance.items():
        if eid == original:
            total_provenance[plus_lift_id(eid)] = plus_lift_id(eid)
            total_provenance[minus_lift_id(eid)] = minus_lift_id(eid)
        else:
            total_provenance[plus_lift_id(eid)] = plus_lift_id(original)
            total_provenance[minus_lift_id(eid)] = minus_lift_id(original)
    return LooplessModel(model, MappingProxyType(provenance), MappingProxyType(total_provenance))


def subdivide_cover_edge(
    cov: FreeDoubleCover, eid: int, first_length: Fraction | None = None
) -> FreeDoubleCover:
    """Subdivide a base edge and lift the subdivision to the cover.

    A tree edge stays in the tree as two halves; a non-tree edge keeps its
    first half off the tree (flipped iff the edge was) and puts the second
    half in the tree.
    """
    base, _, second = subdivide_edge(cov.base, eid, first_length)
    tree = set(cov.tree) | {second}
    if eid in cov.tree:
        tree.add(eid)
    return build_cover(base, tree, cov.flips, e0=cov.e0, lift_signs=cov.sigma)


def with_lengths(cov: FreeDoubleCover, lengths: Mapping[int, Fraction]) -> FreeDoubleCover:
    """The same presentation over the base with new edge lengths."""
    return build_cover(cov.base.with_lengths(lengths), cov.tree, cov.flips, e0=cov.e0, lift_signs=cov.sigma)
