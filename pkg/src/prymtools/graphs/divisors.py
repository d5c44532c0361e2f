from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from math import prod

from loguru import logger
from sympy import Matrix, ZZ, factorint
from sympy.matrices.normalforms import smith_normal_form

from prymtools.errors import DomainError
from prymtools.graphs.core import Graph, IntegerVector, require_connected, spanning_trees
from prymtools.linalg import qq_solve, zz_det


class Divisor(IntegerVector):
    """Integer combination of vertices."""

    __slots__ = ()

    @property
    def degree(self) -> int:
        return sum(value for _, value in self.items())


@dataclass(frozen=True)
class AbelianGroupStructure:
    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    @property
    def order(self) -> int | None:
        """Group order, or ``None`` for an infinite group."""
        if self.free_rank:
            return None
        return prod(self.invariant_factors)

    def as_dict(self) -> dict[str, object]:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank, "order": self.order}


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    firing: dict[int, int] | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def laplacian(graph: Graph) -> Matrix:
    """Valency minus adjacency, rows and columns in vertex-id order.

    A loop adds two to both the valency and the adjacency of its vertex, so
    loops leave the Laplacian unchanged.
    """
    index = {v: i for i, v in enumerate(graph.vertices)}
    n = len(graph.vertices)
    entries = [[0] * n for _ in range(n)]
    for edge in graph.edges:
        if edge.is_loop:
            continue
        u, w = index[edge.src], index[edge.dst]
        entries[u][u] += 1
        entries[w][w] += 1
        entries[u][w] -= 1
        entries[w][u] -= 1
    return Matrix(entries)


def reduced_laplacian(graph: Graph) -> Matrix:
    """Laplacian with the row and column of the smallest vertex removed."""
    full = laplacian(graph)
    return full[1:, 1:]


def jacobian_order(graph: Graph) -> int:
    require_connected(graph)
    reduced = reduced_laplacian(graph)
    if reduced.rows == 0:
        return 1
    return abs(zz_det(reduced.tolist()))


def _canonical_factors(diagonal: Sequence[int]) -> tuple[int, ...]:
    """Turn any diagonal presentation into the divisibility chain d1 | d2 | ..."""
    exponents: dict[int, list[int]] = {}
    for value in diagonal:
        for p, k in factorint(abs(value)).items():
            exponents.setdefault(p, []).append(k)
    length = max((len(ks) for ks in exponents.values()), default=0)
    factors = [1] * length
    for p, ks in exponents.items():
        for i, k in enumerate(sorted(ks, reverse=True)):
            factors[length - 1 - i] *= p**k
    return tuple(f for f in factors if f > 1)


def group_structure(relations: Matrix) -> AbelianGroupStructure:
    """Cokernel of an integer relation matrix, ``Z^rows / (column span)``."""
    rows, cols = relations.shape
    if rows == 0:
        return AbelianGroupStructure(())
    if cols == 0:
        return AbelianGroupStructure((), rows)
    normal = smith_normal_form(relations, domain=ZZ)
    diagonal = [int(normal[i, i]) for i in range(min(rows, cols))]
    nonzero = [d for d in diagonal if d != 0]
    return AbelianGroupStructure(_canonical_factors(nonzero), rows - len(nonzero))


def jacobian_structure(graph: Graph) -> AbelianGroupStructure:
    require_connected(graph)
    return group_structure(reduced_laplacian(graph))


def _vector(graph: Graph, divisor: IntegerVector) -> list[int]:
    unknown = set(divisor.support) - set(graph.vertices)
    if unknown:
        raise DomainError(f"divisor uses unknown vertices {sorted(unknown)}")
    return [divisor[v] for v in graph.vertices]


def principal_divisor(graph: Graph, firing: IntegerVector) -> Divisor:
    """Divisor obtained from the zero divisor by firing each vertex ``firing[v]`` times."""
    image = laplacian(graph) * Matrix(_vector(graph, firing))
    return Divisor({v: -int(image[i]) for i, v in enumerate(graph.vertices)})


def chip_fire(graph: Graph, divisor: Divisor, firing: IntegerVector) -> Divisor:
    return divisor + principal_divisor(graph, firing)


def linearly_equivalent(graph: Graph, d1: Divisor, d2: Divisor) -> EquivalenceResult:
    """Decide ``d1 - d2 = -L a`` over the integers.

    The reduced system (smallest vertex never fires) has a unique rational
    solution; the divisors are equivalent exactly when it is integral.
    """
    require_connected(graph)
    if d1.degree != d2.degree:
        return EquivalenceResult(False)
    difference = _vector(graph, d2 - d1)
    if len(graph.vertices) == 1:
        return EquivalenceResult(True, {graph.vertices[0]: 0})
    reduced = reduced_laplacian(graph)
    solution = qq_solve(reduced.tolist(), difference[1:])
    if any(x.denominator != 1 for x in solution):
        logger.debug(f"no integral firing script, solution {solution}")
        return EquivalenceResult(False)
    firing = {graph.vertices[0]: 0}
    firing.update({v: int(x) for v, x in zip(graph.vertices[1:], solution)})
    return EquivalenceResult(True, firing)


def spanning_tree_count(graph: Graph) -> int:
    return sum(1 for _ in spanning_trees(graph))
