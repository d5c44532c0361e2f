from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Literal

from loguru import logger
from sympy import Matrix

from prymtools.errors import ConsistencyError, DomainError
from prymtools.graphs.core import IntegerVector, genus, require_connected
from prymtools.graphs.cover import MINUS, PLUS, FreeDoubleCover, lift_vertex
from prymtools.graphs.divisors import AbelianGroupStructure, Divisor, group_structure, jacobian_order
from prymtools.linalg import zz_det
from prymtools.prym.ogods import ogod_sum_order

PrymMethod = Literal["ratio", "signed_det", "ogod_sum"]
PRYM_METHODS: tuple[PrymMethod, ...] = ("ratio", "signed_det", "ogod_sum")


@dataclass(frozen=True)
class SignedLaplacian:
    """Laplacian of the base twisted by the flip set.

    ``incidence`` is the twisted incidence matrix B (vertices by edges) with
    ``matrix == B * B.T``.
    """

    matrix: Matrix
    incidence: Matrix
    edge_order: tuple[int, ...]

    @property
    def det(self) -> int:
        return zz_det(self.matrix.tolist())


def norm(cov: FreeDoubleCover, divisor: IntegerVector) -> Divisor:
    result: dict[int, int] = {}
    for total_vertex, value in divisor.items():
        v = cov.project_vertex(total_vertex)
        result[v] = result.get(v, 0) + value
    return Divisor(result)


def kernel_divisor(cov: FreeDoubleCover, top: Mapping[int, int]) -> Divisor:
    """The divisor sum of a_v (v+ - v-) given its plus-sheet coefficients."""
    result: dict[int, int] = {}
    for v, value in top.items():
        result[lift_vertex(v, PLUS)] = value
        result[lift_vertex(v, MINUS)] = -value
    return Divisor(result)


def top_sheet_vector(cov: FreeDoubleCover, divisor: IntegerVector) -> dict[int, int]:
    if not norm(cov, divisor).is_zero():
        raise DomainError("divisor is not in the kernel of the norm map")
    return {v: divisor[lift_vertex(v, PLUS)] for v in cov.base.vertices}


def parity(cov: FreeDoubleCover, divisor: IntegerVector) -> int:
    """Parity of a divisor whose norm vanishes: plus-sheet degree mod 2."""
    top = top_sheet_vector(cov, divisor)
    return sum(top.values()) % 2


def twisted_incidence(cov: FreeDoubleCover) -> Matrix:
    index = {v: i for i, v in enumerate(cov.base.vertices)}
    columns = []
    for edge in cov.base.edges:
        column = [0] * len(index)
        flipped = edge.id in cov.flips
        if edge.is_loop:
            column[index[edge.src]] = 2 if flipped else 0
        else:
            column[index[edge.dst]] = 1
            column[index[edge.src]] = 1 if flipped else -1
        columns.append(column)
    if not columns:
        return Matrix.zeros(len(index), 0)
    return Matrix(columns).T


def signed_laplacian(cov: FreeDoubleCover) -> SignedLaplacian:
    """Off-diagonal: flipped minus unflipped edges; diagonal: non-loop edges plus 4 per flipped loop."""
    index = {v: i for i, v in enumerate(cov.base.vertices)}
    n = len(index)
    entries = [[0] * n for _ in range(n)]
    for edge in cov.base.edges:
        flipped = edge.id in cov.flips
        u = index[edge.src]
        if edge.is_loop:
            entries[u][u] += 4 if flipped else 0
            continue
        w = index[edge.dst]
        entries[u][u] += 1
        entries[w][w] += 1
        sign = 1 if flipped else -1
        entries[u][w] += sign
        entries[w][u] += sign
    return SignedLaplacian(Matrix(entries), twisted_incidence(cov), cov.base.edge_ids)


def flip_degrees(cov: FreeDoubleCover) -> list[int]:
    """Per base vertex: flipped non-loop edges plus twice the flipped loops."""
    index = {v: i for i, v in enumerate(cov.base.vertices)}
    u = [0] * len(index)
    for edge in cov.base.edges:
        if edge.id not in cov.flips:
            continue
        if edge.is_loop:
            u[index[edge.src]] += 2
        else:
            u[index[edge.src]] += 1
            u[index[edge.dst]] += 1
    return u


def kernel_relations(cov: FreeDoubleCover) -> Matrix:
    """Relations of the norm kernel in plus-sheet coordinates.

    Anti-invariant principal divisors are spanned by the twisted Laplacian
    columns together with the divisor of firing the whole plus sheet.
    """
    signed = signed_laplacian(cov).matrix
    return signed.row_join(Matrix(flip_degrees(cov)))


def kernel_norm_structure(cov: FreeDoubleCover) -> AbelianGroupStructure:
    return group_structure(kernel_relations(cov))


def prym_structure(cov: FreeDoubleCover) -> AbelianGroupStructure:
    """The even-parity subgroup of the norm kernel.

    Even vectors have the basis 2e_1, e_i - e_1; a relation r has coordinates
    (sum(r)/2, r_2, ..., r_n) there.
    """
    relations = kernel_relations(cov)
    rows = []
    for j in range(relations.cols):
        column = [int(x) for x in relations[:, j]]
        total = sum(column)
        if total % 2:
            logger.error(f"relation column {j} has odd degree {total}")
            raise ConsistencyError("kernel relation with odd parity")
        rows.append([total // 2, *column[1:]])
    return group_structure(Matrix(rows).T)


def prym_order(cov: FreeDoubleCover, method: PrymMethod = "ratio") -> int:
    """
    Order of the Prym group of a connected double cover.

    Args:
        cov: The cover.
        method: ``ratio`` divides |Jac(total)| by 2|Jac(base)|, ``signed_det``
            takes a quarter of the signed Laplacian determinant, ``ogod_sum``
            adds 4^(r-1) over the odd genus-one decompositions.

    Returns:
        The order, a positive integer.

    Raises:
        ConsistencyError: If a quotient that must be exact is not.
    """
    require_connected(cov.base)
    if method == "ratio":
        total, base = jacobian_order(cov.total), jacobian_order(cov.base)
        if total % (2 * base):
            logger.error(f"|Jac(total)|={total} is not divisible by 2|Jac(base)|={2 * base}")
            raise ConsistencyError("Jacobian order ratio is not an integer")
        return total // (2 * base)
    if method == "signed_det":
        det = signed_laplacian(cov).det
        if det % 4:
            logger.error(f"signed Laplacian determinant {det} is not divisible by 4")
            raise ConsistencyError("signed Laplacian determinant is not divisible by 4")
        return det // 4
    if method == "ogod_sum":
        return ogod_sum_order(cov)
    raise DomainError(f"unknown method {method!r}")


@dataclass(frozen=True)
class PrymOrderReport:
    values: dict[str, int]

    @property
    def agreement(self) -> bool:
        return len(set(self.values.values())) == 1

    @property
    def order(self) -> int:
        if not self.agreement:
            raise ConsistencyError(f"Prym order methods disagree: {self.values}")
        return next(iter(self.values.values()))

    def as_dict(self) -> dict[str, object]:
        return {**self.values, "agreement": self.agreement}


def prym_orders(cov: FreeDoubleCover, methods: tuple[PrymMethod, ...] = PRYM_METHODS) -> PrymOrderReport:
    """
    Run several order formulas on the same cover.

    Args:
        cov: The cover.
        methods: Which formulas to evaluate, in report order.

    Returns:
        A report holding each value and whether they all agree.
    """
    values = {method: prym_order(cov, method) for method in methods}
    report = PrymOrderReport(values)
    if report.agreement:
        logger.info(f"Prym order {report.order} agreed by {', '.join(methods)}")
    else:
        logger.error(f"Prym order methods disagree: {values}")
    return report


def cauchy_binet_sum(cov: FreeDoubleCover) -> Fraction:
    """A quarter of the sum of squared maximal minors of the twisted incidence matrix."""
    g = genus(cov.base)
    incidence = twisted_incidence(cov)
    edges = cov.base.edge_ids
    position = {eid: j for j, eid in enumerate(edges)}
    total = 0
    for removed in combinations(edges, g - 1):
        keep = [position[eid] for eid in edges if eid not in removed]
        minor = incidence.extract(list(range(incidence.rows)), keep)
        total += zz_det(minor.tolist()) ** 2
    return Fraction(total, 4)
