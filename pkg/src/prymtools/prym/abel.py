"""The degree g-1 Abel-Prym map, one cell at a time.

A cell is an ordered list of g-1 total edges with their fixed orientations.
On a cell the map is affine: the point with parameters x (distance from each
edge's source) goes to ``corner + M x`` in the coordinates dual to the Prym
basis, where ``M[j][i] = <basis_j, f_i - i(f_i)> / 2``. Coordinates are taken
modulo the lattice spanned by the rows of the Gram matrix.
"""

from __future__ import annotations

import concurrent.futures
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import ceil, floor
from typing import Literal

import numpy as np
from loguru import logger

from prymtools.errors import ConsistencyError, DomainError, LoopyModelError, NonGenericTargetError
from prymtools.graphs.core import Chain, chain_pairing
from prymtools.graphs.cover import FreeDoubleCover
from prymtools.linalg import mat_vec, qq_det, qq_inverse, qq_solve
from prymtools.prym.lattice import PrymBasis, prym_basis
from prymtools.prym.ogods import OgodRecord, enumerate_ogods, ogod_record

Matrix = tuple[tuple[Fraction, ...], ...]


def require_loopless(cov: FreeDoubleCover) -> None:
    if cov.total.has_loops():
        loops = sorted(e.id for e in cov.total.edges if e.is_loop)
        raise LoopyModelError(f"total graph has loops {loops}; subdivide with loopless_model first")


def edge_column(basis: PrymBasis, total_edge: int) -> tuple[Fraction, ...]:
    """Derivative of the map along ``total_edge`` per unit length."""
    cov = basis.cover
    partner = cov.involute_edge(total_edge)
    return tuple(
        Fraction(cycle[total_edge] - cycle[partner], 2) for cycle in basis.cycles
    )


def _matrix_from_columns(columns: Sequence[Sequence[Fraction]], size: int) -> Matrix:
    return tuple(tuple(column[j] for column in columns) for j in range(size))


@dataclass(frozen=True)
class CellMatrix:
    edges: tuple[int, ...]
    basis: PrymBasis = field(repr=False)
    matrix: Matrix
    det: Fraction
    degree: int

    def as_dict(self) -> dict[str, object]:
        return {
            "edges": list(self.edges),
            "matrix": [list(row) for row in self.matrix],
            "det": self.det,
            "degree": self.degree,
        }


def _check_cell(cov: FreeDoubleCover, basis: PrymBasis, edges: Sequence[int]) -> None:
    require_loopless(cov)
    if basis.cover is not cov:
        raise DomainError("basis belongs to a different cover")
    if len(edges) != basis.rank:
        raise DomainError(f"a cell needs {basis.rank} edges, got {len(edges)}")
    for eid in edges:
        cov.total.edge(eid)


def cell_matrix(cov: FreeDoubleCover, basis: PrymBasis, edges: Sequence[int]) -> CellMatrix:
    """
    Matrix of the Abel-Prym map on the cell ``edges``.

    Args:
        cov: A cover with a loopless total graph.
        basis: Prym basis of ``cov``.
        edges: g-1 total edge ids; column k is the derivative along ``edges[k]``.

    Returns:
        The matrix with its determinant and degree ``|det|``.

    Raises:
        LoopyModelError: If the total graph has loops.
        ConsistencyError: If the determinant is not an integer.
    """
    _check_cell(cov, basis, edges)
    matrix = _matrix_from_columns([edge_column(basis, eid) for eid in edges], basis.rank)
    det = qq_det(matrix)
    if det.denominator != 1:
        logger.error(f"cell {list(edges)} has non-integral determinant {det}")
        raise ConsistencyError(f"cell {list(edges)} has non-integral determinant {det}")
    return CellMatrix(tuple(edges), basis, matrix, det, abs(int(det)))


def predicted_degree(cov: FreeDoubleCover, edges: Sequence[int]) -> int:
    """2^(r-1) when the projected edges form a rank r ogod, otherwise 0."""
    projected = [cov.project_edge(eid) for eid in edges]
    if len(set(projected)) != len(projected):
        return 0
    record = ogod_record(cov, projected)
    return 0 if record is None else 2 ** (record.rank - 1)


def cell_degree(cov: FreeDoubleCover, edges: Sequence[int], basis: PrymBasis | None = None) -> int:
    basis = basis or prym_basis(cov)
    by_det = cell_matrix(cov, basis, edges).degree
    by_ogod = predicted_degree(cov, edges)
    if by_det != by_ogod:
        logger.error(f"cell {list(edges)}: |det| = {by_det} but ogod count gives {by_ogod}")
        raise ConsistencyError(f"cell {list(edges)}: degree {by_det} from the matrix, {by_ogod} from ogods")
    return by_det


def lifted_cells(cov: FreeDoubleCover, record: OgodRecord) -> Iterator[tuple[int, ...]]:
    """The 2^(g-1) cells over an ogod, edges ordered as in the ogod."""
    yield from product(*(cov.lifts(eid) for eid in record.edges))


def scan_cells(cov: FreeDoubleCover, basis: PrymBasis | None = None, workers: int = 1) -> list[CellMatrix]:
    """Cell matrices for every multiset of g-1 total edges, degrees cross-checked."""
    require_loopless(cov)
    basis = basis or prym_basis(cov)
    cells = list(combinations_with_replacement(cov.total.edge_ids, basis.rank))

    def check(edges: tuple[int, ...]) -> CellMatrix:
        cell = cell_matrix(cov, basis, edges)
        expected = predicted_degree(cov, edges)
        if cell.degree != expected:
            raise ConsistencyError(f"cell {list(edges)}: degree {cell.degree}, expected {expected}")
        return cell

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        result = list(executor.map(check, cells))
    logger.info(f"checked {len(result)} cells, {sum(1 for c in result if c.degree)} non-contracted")
    return result


@dataclass(frozen=True)
class BalanceReport:
    """Column-replacement determinants around a codimension-one cell."""

    rest: tuple[int, ...]
    vertex: int
    neighbours: tuple[tuple[int, int, Fraction], ...]

    @property
    def signed_sum(self) -> Fraction:
        return sum((det for _, _, det in self.neighbours), Fraction(0))

    @property
    def positive_mass(self) -> Fraction:
        return sum((det for _, _, det in self.neighbours if det > 0), Fraction(0))

    @property
    def negative_mass(self) -> Fraction:
        return -sum((det for _, _, det in self.neighbours if det < 0), Fraction(0))

    @property
    def degree(self) -> Fraction:
        return self.positive_mass

    @property
    def balanced(self) -> bool:
        return self.signed_sum == 0

    @property
    def pattern(self) -> tuple[int, ...]:
        return tuple(sorted((abs(int(det)) for _, _, det in self.neighbours if det), reverse=True))

    @property
    def kind(self) -> str:
        return {0: "contracted", 2: "two", 3: "three", 4: "four"}.get(len(self.pattern), "other")

    def as_dict(self) -> dict[str, object]:
        return {
            "rest": list(self.rest),
            "vertex": self.vertex,
            "neighbours": [{"edge": e, "orientation": o, "det": d} for e, o, d in self.neighbours],
            "signed_sum": self.signed_sum,
            "degree": self.degree,
            "kind": self.kind,
        }


def vertex_balance(basis: PrymBasis, rest: Sequence[int], vertex: int) -> BalanceReport:
    """Determinants of the cells ``rest + f`` for every edge f at ``vertex``.

    Each f is oriented away from ``vertex`` and its column is placed first.
    """
    cov = basis.cover
    rest_columns = [edge_column(basis, eid) for eid in rest]
    neighbours = []
    for edge in cov.total.incident(vertex):
        orientation = 1 if edge.src == vertex else -1
        column = tuple(orientation * x for x in edge_column(basis, edge.id))
        det = qq_det(_matrix_from_columns([column, *rest_columns], basis.rank))
        neighbours.append((edge.id, orientation, det))
    return BalanceReport(tuple(rest), vertex, tuple(neighbours))


def harmonicity_balance(
    cov: FreeDoubleCover,
    basis: PrymBasis,
    edges: Sequence[int],
    drop_index: int,
    vertex_end: Literal["source", "target"] = "source",
) -> BalanceReport:
    """Balance at the codimension-one cell where point ``drop_index`` sits at an endpoint."""
    _check_cell(cov, basis, edges)
    if not 0 <= drop_index < len(edges):
        raise DomainError(f"drop index {drop_index} out of range")
    dropped = cov.total.edge(edges[drop_index])
    vertex = dropped.src if vertex_end == "source" else dropped.dst
    rest = [eid for i, eid in enumerate(edges) if i != drop_index]
    report = vertex_balance(basis, rest, vertex)
    _check_balance(report)
    return report


def _check_balance(report: BalanceReport) -> None:
    if not report.balanced:
        logger.error(f"unbalanced codimension-one cell {report.as_dict()}")
        raise ConsistencyError(f"signed sum {report.signed_sum} at vertex {report.vertex} is not zero")


def outgoing_cochain_vanishes(basis: PrymBasis, vertex: int) -> bool:
    """Each basis cycle pairs to zero with the star of ``vertex``."""
    cov = basis.cover
    star: dict[int, int] = {}
    for edge in cov.total.incident(vertex):
        star[edge.id] = 1 if edge.src == vertex else -1
    star_chain = Chain(star)
    return all(chain_pairing(cycle, star_chain) == 0 for cycle in basis.cycles)


def codimension_one_scan(cov: FreeDoubleCover, basis: PrymBasis | None = None, workers: int = 1) -> list[BalanceReport]:
    """Balance reports at every codimension-one cell (g-2 edge points plus a vertex)."""
    require_loopless(cov)
    basis = basis or prym_basis(cov)
    if basis.rank == 0:
        return []
    rests = list(combinations_with_replacement(cov.total.edge_ids, basis.rank - 1))
    jobs = [(rest, v) for rest in rests for v in cov.total.vertices]
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        reports = list(executor.map(lambda job: vertex_balance(basis, *job), jobs))
    for report in reports:
        _check_balance(report)
    for vertex in cov.total.vertices:
        if not outgoing_cochain_vanishes(basis, vertex):
            raise ConsistencyError(f"a basis cycle has non-zero divergence at vertex {vertex}")
    logger.info(f"{len(reports)} codimension-one cells balanced")
    return reports


@dataclass(frozen=True)
class TorsorPoint:
    coords: tuple[Fraction, ...]

    def __sub__(self, other: TorsorPoint) -> tuple[Fraction, ...]:
        return tuple(a - b for a, b in zip(self.coords, other.coords))

    def lattice_vector(self, other: TorsorPoint, gram: Matrix) -> tuple[Fraction, ...]:
        """The lambda with G lambda = self - other."""
        return qq_solve(gram, self - other)

    def equivalent(self, other: TorsorPoint, gram: Matrix) -> bool:
        if not gram:
            return True
        return all(x.denominator == 1 for x in self.lattice_vector(other, gram))

    def as_dict(self) -> dict[str, object]:
        return {"coords": list(self.coords)}


def _point_value(basis: PrymBasis, total_edge: int, parameter: Fraction) -> tuple[Fraction, ...]:
    """Coordinates of one point: pairing of (c - i c) with each basis cycle.

    ``c`` runs from the root along the total tree to the edge's source and
    then ``parameter`` along the edge.
    """
    cov = basis.cover
    edge = cov.total.edge(total_edge)
    length = cov.total.length(total_edge)
    if not 0 <= parameter <= length:
        raise DomainError(f"parameter {parameter} outside [0, {length}] on edge {total_edge}")
    path = basis.root_paths[edge.src]
    values = []
    for cycle in basis.cycles:
        value = Fraction(0)
        for eid, coefficient in path.items():
            partner = cov.involute_edge(eid)
            value += Fraction(coefficient * (cycle[eid] - cycle[partner]) * cov.total.length(eid), 2)
        partner = cov.involute_edge(total_edge)
        value += parameter * Fraction(cycle[total_edge] - cycle[partner], 2)
        values.append(value)
    return tuple(values)


def torsor_coordinates(cov: FreeDoubleCover, basis: PrymBasis, divisor: Sequence[tuple[int, Fraction]]) -> TorsorPoint:
    """
    Image of an effective divisor in the Prym torsor.

    Args:
        cov: A cover with a loopless total graph.
        basis: Prym basis of ``cov``.
        divisor: g-1 points as (total edge id, distance from the edge's source).

    Returns:
        The point in basis coordinates, before reduction modulo the Gram lattice.
    """
    require_loopless(cov)
    if len(divisor) != basis.rank:
        raise DomainError(f"divisor needs {basis.rank} points, got {len(divisor)}")
    coords = [Fraction(0)] * basis.rank
    for total_edge, parameter in divisor:
        for j, value in enumerate(_point_value(basis, total_edge, Fraction(parameter))):
            coords[j] += value
    return TorsorPoint(tuple(coords))


@dataclass(frozen=True)
class FiberPoint:
    edges: tuple[int, ...]
    parameters: tuple[Fraction, ...]
    local_degree: int
    shift: tuple[int, ...]

    def as_dict(self) -> dict[str, object]:
        return {
            "edges": list(self.edges),
            "parameters": list(self.parameters),
            "local_degree": self.local_degree,
            "shift": list(self.shift),
        }


@dataclass(frozen=True)
class _PreparedCell:
    edges: tuple[int, ...]
    lengths: tuple[Fraction, ...]
    degree: int
    offset: tuple[Fraction, ...]
    solve_target: Matrix
    solve_lattice: Matrix
    corner_shifts: tuple[tuple[Fraction, ...], ...]


class FiberSolver:
    """Preimages of points of the Prym torsor.

    Everything that does not depend on the target is computed once: for each
    non-contracted cell the inverse matrix, the corner value and the lattice
    coordinates of the cell's corners.
    """

    def __init__(self, cov: FreeDoubleCover, basis: PrymBasis | None = None) -> None:
        require_loopless(cov)
        self.cover = cov
        self.basis = basis or prym_basis(cov)
        self.gram = self.basis.gram
        self.gram_inverse = qq_inverse(self.gram)
        self.ogods = enumerate_ogods(cov)
        self.cells = [self._prepare(edges) for record in self.ogods for edges in lifted_cells(cov, record)]
        logger.debug(f"fiber solver ready with {len(self.cells)} cells")

    def _prepare(self, edges: tuple[int, ...]) -> _PreparedCell:
        cell = cell_matrix(self.cover, self.basis, edges)
        corner = torsor_coordinates(self.cover, self.basis, [(eid, Fraction(0)) for eid in edges]).coords
        inverse = qq_inverse(cell.matrix)
        lengths = tuple(self.cover.total.length(eid) for eid in edges)
        offset = tuple(-x for x in mat_vec(inverse, corner))
        solve_lattice = _matmul(inverse, self.gram)
        corner_shifts = []
        for choice in product((0, 1), repeat=len(edges)):
            x = [length if bit else Fraction(0) for bit, length in zip(choice, lengths)]
            image = mat_vec(cell.matrix, x)
            corner_shifts.append(mat_vec(self.gram_inverse, [a + b for a, b in zip(image, corner)]))
        return _PreparedCell(edges, lengths, cell.degree, offset, inverse, solve_lattice, tuple(corner_shifts))

    def fiber(self, target: TorsorPoint) -> list[FiberPoint]:
        """
        Every divisor mapping to ``target`` modulo the Gram lattice.

        Args:
            target: A point of the torsor in basis coordinates.

        Returns:
            One point per non-contracted cell and lattice shift that reaches
            the target, with its local degree.

        Raises:
            NonGenericTargetError: If the target meets the boundary of a cell image.
        """
        if len(target.coords) != self.basis.rank:
            raise DomainError(f"target needs {self.basis.rank} coordinates")
        target_shift = mat_vec(self.gram_inverse, target.coords)
        points: list[FiberPoint] = []
        for cell in self.cells:
            points.extend(self._solve_cell(cell, target, target_shift))
        return points

    def _solve_cell(self, cell: _PreparedCell, target: TorsorPoint, target_shift: tuple[Fraction, ...]) -> list[FiberPoint]:
        rank = self.basis.rank
        low = [min(shift[j] for shift in cell.corner_shifts) - target_shift[j] for j in range(rank)]
        high = [max(shift[j] for shift in cell.corner_shifts) - target_shift[j] for j in range(rank)]
        base = [a + b for a, b in zip(mat_vec(cell.solve_target, target.coords), cell.offset)]
        found = []
        ranges = [range(floor(lo), ceil(hi) + 1) for lo, hi in zip(low, high)]
        for shift in product(*ranges):
            x = [a + b for a, b in zip(base, mat_vec(cell.solve_lattice, shift))]
            if any(xi < 0 or xi > length for xi, length in zip(x, cell.lengths)):
                continue
            if any(xi == 0 or xi == length for xi, length in zip(x, cell.lengths)):
                logger.debug(f"target {target.coords} meets the boundary of cell {cell.edges}")
                raise NonGenericTargetError()
            found.append(FiberPoint(cell.edges, tuple(x), cell.degree, tuple(shift)))
        return found

    def random_target(self, rng: np.random.Generator, denominator: int = 10007) -> TorsorPoint:
        """A point of the torsor with random coordinates in the fundamental domain."""
        weights = [Fraction(int(rng.integers(1, denominator)), denominator) for _ in range(self.basis.rank)]
        coords = tuple(
            sum((w * self.gram[k][j] for k, w in enumerate(weights)), Fraction(0))
            for j in range(self.basis.rank)
        )
        return TorsorPoint(coords)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    columns = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in columns) for row in a)


def fiber(cov: FreeDoubleCover, basis: PrymBasis, target: TorsorPoint) -> list[FiberPoint]:
    """One-shot :meth:`FiberSolver.fiber`."""
    return FiberSolver(cov, basis).fiber(target)


@dataclass(frozen=True)
class GlobalDegreeReport:
    expected: int
    sums: tuple[int, ...]
    resampled: int

    @property
    def agreement(self) -> bool:
        return all(total == self.expected for total in self.sums)

    def as_dict(self) -> dict[str, object]:
        return {"expected": self.expected, "sums": list(self.sums), "resampled": self.resampled, "agreement": self.agreement}


def global_degree(
    cov: FreeDoubleCover,
    targets: int = 20,
    seed: int = 0,
    basis: PrymBasis | None = None,
    max_attempts: int = 1000,
) -> GlobalDegreeReport:
    """Sum of local degrees over the fibers of random generic targets."""
    solver = FiberSolver(cov, basis)
    rng = np.random.default_rng(seed)
    sums: list[int] = []
    resampled = 0
    while len(sums) < targets:
        if resampled > max_attempts:
            raise DomainError("could not find generic targets")
        target = solver.random_target(rng)
        try:
            points = solver.fiber(target)
        except NonGenericTargetError:
            resampled += 1
            continue
        sums.append(sum(point.local_degree for point in points))
    expected = 2 ** solver.basis.rank
    report = GlobalDegreeReport(expected, tuple(sums), resampled)
    if report.agreement:
        logger.info(f"global degree {expected} at {targets} generic targets")
    else:
        logger.error(f"fiber degree sums {sums} differ from {expected}")
    return report


def cell_image_volume2(cov: FreeDoubleCover, basis: PrymBasis, edges: Sequence[int]) -> Fraction:
    """Squared volume of a cell's image, the Prym torus having squared volume det G."""
    cell = cell_matrix(cov, basis, edges)
    weight = cov.total.weight(edges)
    return cell.det**2 * weight**2 / qq_det(basis.gram)


def volume_cover_total(cov: FreeDoubleCover, basis: PrymBasis | None = None) -> tuple[Fraction, Fraction]:
    """Degree-weighted image volume of all cells against 2^(g-1) det G, in coordinate units."""
    require_loopless(cov)
    basis = basis or prym_basis(cov)
    lhs = Fraction(0)
    for record in enumerate_ogods(cov):
        for edges in lifted_cells(cov, record):
            cell = cell_matrix(cov, basis, edges)
            lhs += cell.degree * abs(cell.det) * cov.total.weight(edges)
    return lhs, 2**basis.rank * qq_det(basis.gram)


def degree_patterns(reports: Iterable[BalanceReport]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for report in reports:
        counts[report.kind] = counts.get(report.kind, 0) + 1
    return dict(sorted(counts.items()))
