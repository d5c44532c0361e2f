from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from loguru import logger
from sympy import Matrix

from prymtools.errors import ConsistencyError
from prymtools.graphs.core import (
    Chain,
    Graph,
    first_spanning_tree,
    fundamental_cycle,
    length_pairing,
    require_connected,
    tree_path,
)
from prymtools.graphs.cover import PLUS, FreeDoubleCover, involute_chain, lift_vertex, pushforward_chain
from prymtools.graphs.divisors import group_structure
from prymtools.linalg import leading_minors, qq_det
from prymtools.prym.ogods import vol2_jacobian, vol2_prym


def total_tree(cov: FreeDoubleCover) -> frozenset[int]:
    """Both lifts of every base tree edge, plus the plus lift of e0."""
    lifted = {lift for eid in cov.tree for lift in cov.lifts(eid)}
    return frozenset(lifted | {cov.lift_plus[cov.e0]})


@dataclass(frozen=True, eq=False)
class PrymBasis:
    """Anti-invariant cycles spanning the kernel of the pushforward on cycles.

    ``generators[j]`` is the base edge whose plus lift closes the fundamental
    cycle ``plus_cycles[j]``; ``cycles[j]`` is that cycle minus its involute.
    """

    cover: FreeDoubleCover
    generators: tuple[int, ...]
    plus_cycles: tuple[Chain, ...]
    cycles: tuple[Chain, ...]
    tree: frozenset[int]

    @property
    def rank(self) -> int:
        return len(self.cycles)

    @property
    def e0(self) -> int:
        return self.cover.e0

    @property
    def sigma(self) -> Mapping[int, int]:
        return self.cover.sigma

    @cached_property
    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        return gram_matrix(self.cover, self.cycles)

    @cached_property
    def root(self) -> int:
        return lift_vertex(min(self.cover.base.vertices), PLUS)

    @cached_property
    def root_paths(self) -> dict[int, Chain]:
        """Path inside the total tree from the root to every total vertex."""
        total = self.cover.total
        return {v: tree_path(total, self.tree, self.root, v) for v in total.vertices}


def prym_basis(cov: FreeDoubleCover) -> PrymBasis:
    """
    The Prym basis attached to the cover's tree and distinguished edge.

    Args:
        cov: The cover.

    Returns:
        One anti-invariant cycle per base edge outside the tree other than
        e0, in edge id order.

    Raises:
        ConsistencyError: If a basis element fails to be an anti-invariant cycle.
    """
    require_connected(cov.base)
    tree = total_tree(cov)
    generators = tuple(
        eid for eid in cov.base.edge_ids if eid not in cov.tree and eid != cov.e0
    )
    plus_cycles = tuple(
        fundamental_cycle(cov.total, tree, cov.lift_plus[eid]) for eid in generators
    )
    cycles = tuple(c - involute_chain(cov, c) for c in plus_cycles)
    for eid, cycle in zip(generators, cycles):
        if not cycle.is_cycle(cov.total) or not pushforward_chain(cov, cycle).is_zero():
            raise ConsistencyError(f"basis element for edge {eid} is not an anti-invariant cycle")
    logger.debug(f"Prym basis from edges {list(generators)}, e0={cov.e0}")
    return PrymBasis(cov, generators, plus_cycles, cycles, tree)


def prym_pairing(cov: FreeDoubleCover, c: Chain, d: Chain) -> Fraction:
    return length_pairing(c, d, cov.total) / 2


def gram_matrix(cov: FreeDoubleCover, cycles: Sequence[Chain]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(prym_pairing(cov, a, b) for b in cycles) for a in cycles)


def vol2_prym_gram(cov: FreeDoubleCover, basis: PrymBasis | None = None) -> Fraction:
    basis = basis or prym_basis(cov)
    return qq_det(basis.gram)


def vol2_prym_ratio(cov: FreeDoubleCover) -> Fraction:
    return vol2_jacobian(cov.total) / (2 * vol2_jacobian(cov.base))


def vol2_jacobian_gram(graph: Graph) -> Fraction:
    """Gram determinant of the fundamental cycles of the least spanning tree."""
    tree = first_spanning_tree(graph)
    cycles = [fundamental_cycle(graph, tree, eid) for eid in graph.edge_ids if eid not in tree]
    return qq_det([[length_pairing(a, b, graph) for b in cycles] for a in cycles])


def is_positive_definite(gram: Sequence[Sequence[Fraction]]) -> bool:
    return all(minor > 0 for minor in leading_minors(gram))


def basis_coordinates(basis: PrymBasis) -> Matrix:
    """Coordinates of the basis cycles in the fundamental cycle basis of the total tree.

    The coordinate of a cycle on the fundamental cycle of a non-tree edge is
    its coefficient on that edge.
    """
    chords = [eid for eid in basis.cover.total.edge_ids if eid not in basis.tree]
    if not basis.cycles:
        return Matrix.zeros(len(chords), 0)
    return Matrix([[cycle[eid] for cycle in basis.cycles] for eid in chords])


def is_saturated(basis: PrymBasis) -> bool:
    """Whether the basis spans a saturated sub-lattice of the total cycle lattice.

    The kernel of the pushforward is saturated and has the same rank, so this
    is the same as spanning that kernel over the integers.
    """
    coordinates = basis_coordinates(basis)
    structure = group_structure(coordinates)
    return not structure.invariant_factors and structure.free_rank == coordinates.rows - basis.rank


@dataclass(frozen=True)
class VolumeReport:
    ogod_sum: Fraction
    gram: Fraction
    ratio: Fraction

    @property
    def agreement(self) -> bool:
        return self.ogod_sum == self.gram == self.ratio

    def as_dict(self) -> dict[str, object]:
        return {"ogod_sum": self.ogod_sum, "gram": self.gram, "ratio": self.ratio, "agreement": self.agreement}


def prym_volumes(cov: FreeDoubleCover) -> VolumeReport:
    report = VolumeReport(vol2_prym(cov), vol2_prym_gram(cov), vol2_prym_ratio(cov))
    if report.agreement:
        logger.info(f"Vol^2(Prym) = {report.gram} by ogod sum, Gram determinant and Jacobian ratio")
    else:
        logger.error(f"Prym volume computations disagree: {report}")
    return report
