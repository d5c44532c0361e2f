"""Seeded random graphs and covers for the property suites."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from prymtools.graphs.core import Edge, Graph
from prymtools.graphs.cover import MINUS, PLUS, FreeDoubleCover, build_cover


def random_length(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 6)))


def random_graph(
    rng: np.random.Generator,
    max_vertices: int = 7,
    max_genus: int = 5,
    min_genus: int = 1,
    rational_lengths: bool = False,
    allow_loops: bool = True,
) -> Graph:
    """A connected multigraph whose first edges 1..n-1 form a spanning tree."""
    n = int(rng.integers(1 if allow_loops else 2, max_vertices + 1))
    edges: list[Edge] = []
    for v in range(2, n + 1):
        parent = int(rng.integers(1, v))
        src, dst = (parent, v) if rng.integers(0, 2) else (v, parent)
        edges.append(Edge(len(edges) + 1, src, dst))
    extra = int(rng.integers(min_genus, max_genus + 1))
    while extra:
        src, dst = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
        if src == dst and not allow_loops:
            continue
        edges.append(Edge(len(edges) + 1, src, dst))
        extra -= 1
    lengths = {e.id: random_length(rng) for e in edges} if rational_lengths else {}
    return Graph(tuple(range(1, n + 1)), tuple(edges), lengths)


def random_cover(
    rng: np.random.Generator,
    max_vertices: int = 7,
    max_genus: int = 5,
    min_genus: int = 1,
    rational_lengths: bool = False,
    random_signs: bool = True,
) -> FreeDoubleCover:
    """A random connected double cover presented on the graph's built-in tree."""
    base = random_graph(rng, max_vertices, max_genus, min_genus, rational_lengths)
    tree = frozenset(range(1, len(base.vertices)))
    chords = [eid for eid in base.edge_ids if eid not in tree]
    flips = {eid for eid in chords if rng.integers(0, 2)}
    if not flips:
        flips.add(chords[int(rng.integers(0, len(chords)))])
    e0 = min(flips)
    signs = {}
    if random_signs:
        signs = {eid: PLUS if rng.integers(0, 2) else MINUS for eid in flips if eid != e0}
    return build_cover(base, tree, flips, e0=e0, lift_signs=signs)


def random_covers(
    seed: int, count: int, max_vertices: int = 7, max_genus: int = 5, min_genus: int = 1, **kwargs: bool
) -> list[FreeDoubleCover]:
    rng = np.random.default_rng(seed)
    return [random_cover(rng, max_vertices, max_genus, min_genus, **kwargs) for _ in range(count)]
