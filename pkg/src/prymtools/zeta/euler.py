"""Slow oracle for 1/zeta: count reduced closed paths and expand the Euler product.

Closed reduced paths are counted with powers of the non-backtracking dart
transfer matrix, not by listing cycles up to rotation. Primitive counts then
follow by inversion over divisors of the length.
"""

from __future__ import annotations

from math import comb

import numpy as np
from loguru import logger
from sympy import divisors

from prymtools.errors import DomainError
from prymtools.graphs.core import Graph
from prymtools.zeta.ihara import IntPolynomial

MAX_PATH_LENGTH = 12


def darts(graph: Graph) -> list[tuple[int, int, int, int]]:
    """Both orientations of every edge as (edge id, direction, tail, head)."""
    result = []
    for edge in graph.edges:
        result.append((edge.id, 1, edge.src, edge.dst))
        result.append((edge.id, -1, edge.dst, edge.src))
    return result


def transfer_matrix(graph: Graph) -> np.ndarray:
    """Non-backtracking dart transfer matrix with exact integer entries."""
    dart_list = darts(graph)
    size = len(dart_list)
    matrix = np.zeros((size, size), dtype=object)
    for i, (eid, direction, _, head) in enumerate(dart_list):
        for j, (fid, other, tail, _) in enumerate(dart_list):
            if head == tail and not (eid == fid and direction == -other):
                matrix[i, j] = 1
    return matrix


def closed_reduced_counts(graph: Graph, max_length: int = MAX_PATH_LENGTH) -> list[int]:
    """``counts[k-1]`` reduced closed paths of length k (tail-less, with a start)."""
    if max_length < 1:
        raise DomainError("path length bound must be positive")
    matrix = transfer_matrix(graph)
    power = matrix.copy()
    counts = []
    for _ in range(max_length):
        counts.append(int(np.trace(power)))
        power = power.dot(matrix)
    return counts


def primitive_counts(counts: list[int]) -> list[int]:
    """Number of prime classes per length from the closed path counts."""
    primes: list[int] = []
    for m in range(1, len(counts) + 1):
        rest = counts[m - 1] - sum(d * primes[d - 1] for d in divisors(m) if d < m)
        if rest % m:
            raise DomainError(f"closed path counts are inconsistent at length {m}")
        primes.append(rest // m)
    return primes


def euler_product_reciprocal(graph: Graph, max_degree: int = MAX_PATH_LENGTH) -> IntPolynomial:
    """The product of (1 - s^m) over prime classes, truncated at ``max_degree``."""
    primes = primitive_counts(closed_reduced_counts(graph, max_degree))
    product = [0] * (max_degree + 1)
    product[0] = 1
    for m, count in enumerate(primes, start=1):
        factor = [0] * (max_degree + 1)
        for k in range(max_degree // m + 1):
            factor[m * k] = (-1) ** k * comb(count, k)
        product = [
            sum(product[i] * factor[n - i] for i in range(n + 1)) for n in range(max_degree + 1)
        ]
    logger.debug(f"prime classes by length: {primes}")
    return IntPolynomial(tuple(product))
