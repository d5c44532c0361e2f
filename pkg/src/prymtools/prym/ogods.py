"""Odd genus-one decompositions and the volume sums built from them."""

from __future__ import annotations

import concurrent.futures
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice

from loguru import logger
from networkx.utils import UnionFind

from prymtools.graphs.core import Graph, genus, require_connected, spanning_trees
from prymtools.graphs.cover import FreeDoubleCover, preimage_connected
from prymtools.linalg import qq_det


@dataclass(frozen=True)
class OgodComponent:
    vertices: frozenset[int]
    edges: frozenset[int]
    genus: int
    preimage_connected: bool

    def as_dict(self) -> dict[str, object]:
        return {
            "vertices": sorted(self.vertices),
            "edges": sorted(self.edges),
            "genus": self.genus,
            "preimage_connected": self.preimage_connected,
        }


@dataclass(frozen=True)
class OgodRecord:
    edges: tuple[int, ...]
    rank: int
    components: tuple[OgodComponent, ...]
    weight: Fraction

    @property
    def multiplicity(self) -> int:
        """Contribution 4^(r-1) of this decomposition to the Prym volume sum."""
        return 4 ** (self.rank - 1)

    def as_dict(self) -> dict[str, object]:
        return {
            "edges": list(self.edges),
            "rank": self.rank,
            "weight": self.weight,
            "components": [c.as_dict() for c in self.components],
        }


def _genus_one_components(base: Graph, removed: Sequence[int]) -> list[tuple[frozenset[int], frozenset[int]]] | None:
    """Components of ``base`` minus ``removed`` if each has genus exactly one.

    Union-find over the kept edges stops at the first component acquiring a
    second independent cycle. Since the kept edges number |V| when
    |removed| = g - 1, no component exceeding genus one forces all to equal one.
    """
    skip = set(removed)
    forest = UnionFind(base.vertices)
    cycles: dict[int, int] = {}
    kept = [e for e in base.edges if e.id not in skip]
    for edge in kept:
        root_src, root_dst = forest[edge.src], forest[edge.dst]
        if root_src == root_dst:
            count = cycles.get(root_src, 0) + 1
            if count > 1:
                return None
            cycles[root_src] = count
        else:
            merged = cycles.pop(root_src, 0) + cycles.pop(root_dst, 0)
            if merged > 1:
                return None
            forest.union(edge.src, edge.dst)
            cycles[forest[edge.src]] = merged
    groups: dict[int, set[int]] = {}
    for v in base.vertices:
        groups.setdefault(forest[v], set()).add(v)
    if any(cycles.get(root, 0) != 1 for root in groups):
        return None
    result = []
    for root, vertices in groups.items():
        edges = frozenset(e.id for e in kept if forest[e.src] == root)
        result.append((frozenset(vertices), edges))
    return sorted(result, key=lambda item: min(item[0]))


def ogod_record(cov: FreeDoubleCover, removed: Iterable[int]) -> OgodRecord | None:
    """The decomposition record for ``removed``, or ``None`` if it is not an ogod."""
    removed = tuple(sorted(removed))
    if len(set(removed)) != len(removed) or len(removed) != cov.genus - 1:
        return None
    parts = _genus_one_components(cov.base, removed)
    if parts is None:
        return None
    components = []
    for vertices, edges in parts:
        connected = preimage_connected(cov, edges, vertices, method="parity")
        if not connected:
            return None
        components.append(OgodComponent(vertices, edges, 1, connected))
    return OgodRecord(removed, len(components), tuple(components), cov.base.weight(removed))


def is_ogod(cov: FreeDoubleCover, removed: Iterable[int]) -> bool:
    return ogod_record(cov, removed) is not None


def _scan(cov: FreeDoubleCover, subsets: list[tuple[int, ...]]) -> list[OgodRecord]:
    records = []
    for subset in subsets:
        record = ogod_record(cov, subset)
        if record is not None:
            records.append(record)
    return records


def _chunks(items: Iterable[tuple[int, ...]], size: int) -> Iterable[list[tuple[int, ...]]]:
    iterator = iter(items)
    while chunk := list(islice(iterator, size)):
        yield chunk


def enumerate_ogods(cov: FreeDoubleCover, workers: int = 1) -> list[OgodRecord]:
    """
    Every odd genus-one decomposition of the cover.

    Args:
        cov: The cover.
        workers: Thread count for scanning the (g-1)-subsets of base edges.

    Returns:
        The decompositions sorted lexicographically by edge ids.
    """
    require_connected(cov.base)
    size = cov.genus - 1
    subsets = combinations(cov.base.edge_ids, size)
    if workers <= 1:
        records = _scan(cov, list(subsets))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            it = executor.map(lambda chunk: _scan(cov, chunk), _chunks(subsets, 256))
            records = [record for part in it for record in part]
    records.sort(key=lambda r: r.edges)
    logger.debug(f"found {len(records)} ogods among {size}-subsets of {len(cov.base.edges)} edges")
    return records


def rank_counts(records: Iterable[OgodRecord]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for record in records:
        counts[record.rank] = counts.get(record.rank, 0) + 1
    return dict(sorted(counts.items()))


def vol2_jacobian(graph: Graph, method: str = "kirchhoff") -> Fraction:
    """Sum of w(F) over the complements F of spanning trees.

    ``kirchhoff`` evaluates the sum as (product of all lengths) times the
    weighted tree count with conductances 1/length; ``trees`` sums directly.
    """
    require_connected(graph)
    if method == "trees":
        everything = set(graph.edge_ids)
        return sum((graph.weight(everything - tree) for tree in spanning_trees(graph)), Fraction(0))
    if method != "kirchhoff":
        raise ValueError(f"unknown method {method!r}")
    conductance = graph.with_lengths({eid: 1 / graph.length(eid) for eid in graph.edge_ids})
    weighted = _weighted_reduced_laplacian(conductance)
    return graph.weight(graph.edge_ids) * qq_det(weighted)


def _weighted_reduced_laplacian(graph: Graph) -> list[list[Fraction]]:
    index = {v: i for i, v in enumerate(graph.vertices)}
    n = len(graph.vertices)
    entries = [[Fraction(0)] * n for _ in range(n)]
    for edge in graph.edges:
        if edge.is_loop:
            continue
        u, w = index[edge.src], index[edge.dst]
        c = graph.length(edge.id)
        entries[u][u] += c
        entries[w][w] += c
        entries[u][w] -= c
        entries[w][u] -= c
    return [row[1:] for row in entries[1:]]


def vol2_prym(cov: FreeDoubleCover, records: Iterable[OgodRecord] | None = None) -> Fraction:
    """
    Squared Prym volume as a weighted sum over odd genus-one decompositions.

    Args:
        cov: The cover.
        records: Precomputed decompositions, enumerated when omitted.

    Returns:
        The sum of 4^(r-1) times the product of edge lengths over each decomposition.
    """
    if records is None:
        records = enumerate_ogods(cov)
    return sum((record.multiplicity * record.weight for record in records), Fraction(0))


def ogod_sum_order(cov: FreeDoubleCover) -> int:
    """Unit-length Prym volume sum, i.e. sum of 4^(r-1) over all ogods."""
    genus(cov.base)
    return sum(record.multiplicity for record in enumerate_ogods(cov))
