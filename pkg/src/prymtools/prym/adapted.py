"""Cell matrices in a basis adapted to one odd genus-one decomposition.

The cover is re-presented on a tree made of a spanning tree per component of
``base - F`` and the edges of ``F`` that connect the components to the one
holding the least vertex. In that presentation the cell matrix over ``F`` is
lower triangular once rows and columns are put in discovery order.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from prymtools.errors import ConsistencyError, DomainError
from prymtools.graphs.core import Graph, first_spanning_tree
from prymtools.graphs.cover import FreeDoubleCover, retree
from prymtools.prym.abel import cell_matrix, require_loopless
from prymtools.prym.lattice import prym_basis
from prymtools.prym.ogods import OgodComponent, ogod_record


@dataclass(frozen=True)
class AdaptedCell:
    cover: FreeDoubleCover
    tree: frozenset[int]
    e0: int
    edges: tuple[int, ...]
    row_edges: tuple[int, ...]
    column_edges: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rank: int

    @property
    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self.matrix[i][i] for i in range(len(self.matrix)))

    def is_lower_triangular(self) -> bool:
        return all(
            self.matrix[i][j] == 0
            for i in range(len(self.matrix))
            for j in range(i + 1, len(self.matrix))
        )

    def expected_diagonal(self) -> tuple[int, ...]:
        size = len(self.matrix)
        return tuple(2 if i < self.rank - 1 else 1 for i in range(size))

    def as_dict(self) -> dict[str, object]:
        return {
            "tree": sorted(self.tree),
            "e0": self.e0,
            "edges": list(self.edges),
            "rows": list(self.row_edges),
            "columns": list(self.column_edges),
            "matrix": [list(row) for row in self.matrix],
            "rank": self.rank,
        }


def _component_tree(base: Graph, component: OgodComponent) -> tuple[frozenset[int], int]:
    """Least spanning tree of a genus-one component and its one remaining edge."""
    edges = tuple(base.edge(eid) for eid in sorted(component.edges))
    lengths = {e.id: base.length(e.id) for e in edges}
    subgraph = Graph(tuple(component.vertices), edges, lengths)
    tree = first_spanning_tree(subgraph)
    (extra,) = (eid for eid in sorted(component.edges) if eid not in tree)
    return tree, extra


def _connecting_edges(
    base: Graph, components: Sequence[OgodComponent], removed: Sequence[int]
) -> tuple[list[int], list[int]]:
    """Breadth-first search on the graph with the components contracted.

    Returns the edges of ``removed`` that first reach each new component and
    the indices of the components in the order they were reached.
    """
    owner = {v: k for k, component in enumerate(components) for v in component.vertices}
    seen = {0}
    queue = deque([0])
    connecting: list[int] = []
    order: list[int] = []
    while queue:
        current = queue.popleft()
        for eid in sorted(removed):
            edge = base.edge(eid)
            ends = {owner[edge.src], owner[edge.dst]}
            if current not in ends or len(ends) == 1:
                continue
            (other,) = ends - {current}
            if other in seen:
                continue
            seen.add(other)
            queue.append(other)
            connecting.append(eid)
            order.append(other)
    return connecting, order


def adapted_cell_matrix(cov: FreeDoubleCover, edges: Sequence[int]) -> AdaptedCell:
    """The matrix of the cell ``edges`` (total edges over an ogod) in the adapted basis."""
    require_loopless(cov)
    projected = [cov.project_edge(eid) for eid in edges]
    record = ogod_record(cov, projected)
    if record is None:
        raise DomainError(f"edges {list(edges)} do not lie over an odd genus-one decomposition")

    component_trees = [_component_tree(cov.base, component) for component in record.components]
    connecting, order = _connecting_edges(cov.base, record.components, record.edges)
    tree = frozenset().union(*(t for t, _ in component_trees), connecting)
    e0 = component_trees[0][1]
    adapted, iso = retree(cov, tree, e0=e0)

    cell = tuple(iso.edge_map[eid] for eid in edges)
    by_base = {adapted.project_edge(eid): eid for eid in cell}
    remaining = [eid for eid in record.edges if eid not in connecting]
    column_edges = tuple(by_base[eid] for eid in [*connecting, *remaining])
    row_edges = tuple(component_trees[k][1] for k in order) + tuple(remaining)

    basis = prym_basis(adapted)
    if sorted(row_edges) != sorted(basis.generators):
        logger.error(f"adapted rows {row_edges} differ from basis generators {basis.generators}")
        raise ConsistencyError("adapted basis does not match the ogod's construction order")
    matrix = cell_matrix(adapted, basis, column_edges).matrix
    rows = [basis.generators.index(eid) for eid in row_edges]
    reordered = tuple(matrix[i] for i in rows)
    return AdaptedCell(adapted, tree, e0, cell, row_edges, column_edges, reordered, record.rank)
