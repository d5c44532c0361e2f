"""Ihara zeta functions and the Artin-Ihara L-function of a double cover.

Both reciprocals come from the three-term determinant formula
``(1 - s^2)^(g-1) det(I - A s + (D - I) s^2)`` where ``D`` is the degree
matrix (a loop counts twice) and ``A`` the adjacency matrix (a loop adds 2 to
its diagonal entry). For the L-function the adjacency is twisted: flipped
edges enter with a minus sign.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger
from sympy import ZZ, Poly, symbols
from sympy.polys.matrices import DomainMatrix

from prymtools.errors import ConsistencyError, DomainError
from prymtools.graphs.core import Graph, genus
from prymtools.graphs.cover import FreeDoubleCover

s = symbols("s")
RING = ZZ[s]


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial in ``s``; ``coefficients[k]`` multiplies ``s**k``."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coefficients = [int(c) for c in self.coefficients]
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @classmethod
    def from_poly(cls, poly: Poly) -> IntPolynomial:
        return cls(tuple(reversed([int(c) for c in poly.all_coeffs()])))

    def to_poly(self) -> Poly:
        return Poly(list(reversed(self.coefficients)) or [0], s, domain=ZZ)

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        return IntPolynomial.from_poly(self.to_poly() * other.to_poly())

    def __call__(self, value: int | Fraction) -> Fraction:
        result = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * value + c
        return result

    def shift(self, a: int) -> IntPolynomial:
        """The polynomial in t obtained by substituting s = a + t."""
        if self.is_zero():
            return self
        return IntPolynomial.from_poly(self.to_poly().shift(a))

    def truncate(self, max_degree: int) -> IntPolynomial:
        return IntPolynomial(self.coefficients[: max_degree + 1])

    def as_list(self) -> list[int]:
        return list(self.coefficients)


def _ring_element(constant: int, linear: int, quadratic: int) -> object:
    return RING.from_sympy(constant + linear * s + quadratic * s**2)


def bass_determinant(
    vertices: Sequence[int],
    adjacency: Mapping[tuple[int, int], int],
    degrees: Mapping[int, int],
) -> IntPolynomial:
    """det(I - A s + (D - I) s^2) by fraction-free elimination over ZZ[s]."""
    if not vertices:
        return IntPolynomial((1,))
    index = {v: i for i, v in enumerate(vertices)}
    n = len(index)
    rows = []
    for u in vertices:
        row = []
        for w in vertices:
            diagonal = u == w
            row.append(
                _ring_element(
                    1 if diagonal else 0,
                    -adjacency.get((u, w), 0),
                    degrees[u] - 1 if diagonal else 0,
                )
            )
        rows.append(row)
    matrix = DomainMatrix(rows, (n, n), RING)
    det = RING.to_sympy(matrix.det())
    return IntPolynomial.from_poly(Poly(det, s, domain=ZZ))


def _adjacency(graph: Graph, flips: frozenset[int] = frozenset()) -> tuple[dict[tuple[int, int], int], dict[int, int]]:
    adjacency: dict[tuple[int, int], int] = {}
    degrees = {v: 0 for v in graph.vertices}
    for edge in graph.edges:
        sign = -1 if edge.id in flips else 1
        if edge.is_loop:
            key = (edge.src, edge.src)
            adjacency[key] = adjacency.get(key, 0) + 2 * sign
            degrees[edge.src] += 2
            continue
        for key in ((edge.src, edge.dst), (edge.dst, edge.src)):
            adjacency[key] = adjacency.get(key, 0) + sign
        degrees[edge.src] += 1
        degrees[edge.dst] += 1
    return adjacency, degrees


def _prefactor(g: int) -> IntPolynomial:
    return IntPolynomial.from_poly(Poly(1 - s**2, s, domain=ZZ) ** (g - 1))


def ihara_zeta_reciprocal(graph: Graph) -> IntPolynomial:
    """
    1/zeta by the three-term determinant formula.

    Args:
        graph: A connected graph of genus at least one. A loop counts twice in
            both the adjacency and the degree.

    Returns:
        The integer polynomial (1-s^2)^(g-1) det(I - A s + (D - I) s^2).
    """
    g = genus(graph)
    if g < 1:
        raise DomainError("the zeta function of a tree is trivial")
    adjacency, degrees = _adjacency(graph)
    return _prefactor(g) * bass_determinant(graph.vertices, adjacency, degrees)


def artin_L_reciprocal(cov: FreeDoubleCover) -> IntPolynomial:
    """Reciprocal L-function of the sign character of the cover."""
    g = genus(cov.base)
    if g == 0:
        raise DomainError("a connected double cover needs a base of genus at least one")
    adjacency, degrees = _adjacency(cov.base, cov.flips)
    return _prefactor(g) * bass_determinant(cov.base.vertices, adjacency, degrees)


def vanishing_order_and_leading(p: IntPolynomial, at: int = 1) -> tuple[int, int]:
    """Order of vanishing at ``s = at`` and the first nonzero Taylor coefficient there."""
    if p.is_zero():
        raise DomainError("the zero polynomial has no leading coefficient")
    shifted = p.shift(at)
    for order, coefficient in enumerate(shifted.coefficients):
        if coefficient:
            return order, coefficient
    raise ConsistencyError("nonzero polynomial with no nonzero coefficient")


def factorization_holds(cov: FreeDoubleCover) -> bool:
    """Whether 1/zeta(total) equals 1/zeta(base) times 1/L exactly."""
    total = ihara_zeta_reciprocal(cov.total)
    product = ihara_zeta_reciprocal(cov.base) * artin_L_reciprocal(cov)
    if total != product:
        logger.error(f"zeta factorization fails: {total.as_list()} != {product.as_list()}")
    return total == product


def northshield_jacobian_order(graph: Graph) -> int:
    """|Jac| from the leading Taylor coefficient of 1/zeta at s = 1.

    The coefficient is (-1)^(g-1) 2^g (g-1) |Jac| at order g.
    """
    g = genus(graph)
    if g < 2:
        raise DomainError("the class number expansion needs genus at least two")
    order, leading = vanishing_order_and_leading(ihara_zeta_reciprocal(graph))
    if order != g:
        raise ConsistencyError(f"1/zeta vanishes to order {order} at s = 1, expected {g}")
    scale = (-1) ** (g - 1) * 2**g * (g - 1)
    if leading % scale:
        raise ConsistencyError(f"leading coefficient {leading} is not divisible by {scale}")
    return leading // scale


def lfunction_prym_order(cov: FreeDoubleCover) -> int:
    """|Prym| from 1/L at s = 1: order g-1 with coefficient (-1)^(g-1) 2^(g-1) 4 |Prym|."""
    g = cov.genus
    order, leading = vanishing_order_and_leading(artin_L_reciprocal(cov))
    if order != g - 1:
        raise ConsistencyError(f"1/L vanishes to order {order} at s = 1, expected {g - 1}")
    scale = (-1) ** (g - 1) * 2 ** (g - 1) * 4
    if leading % scale:
        raise ConsistencyError(f"leading coefficient {leading} is not divisible by {scale}")
    return leading // scale


def prym_order_from_zeta(cov: FreeDoubleCover) -> int:
    """|Jac(total)| / (2 |Jac(base)|) with both orders read off zeta functions."""
    total = northshield_jacobian_order(cov.total)
    base = northshield_jacobian_order(cov.base)
    if total % (2 * base):
        raise ConsistencyError(f"{total} is not divisible by {2 * base}")
    return total // (2 * base)


@dataclass(frozen=True)
class ZetaReport:
    coefficients: tuple[int, ...]
    order: int
    leading: int

    @classmethod
    def of(cls, p: IntPolynomial) -> ZetaReport:
        order, leading = vanishing_order_and_leading(p)
        return cls(p.coefficients, order, leading)

    def as_dict(self) -> dict[str, object]:
        return {"coefficients": list(self.coefficients), "order": self.order, "leading": self.leading}
