import pytest

from conftest import complete_graph, cycle_graph
from prymtools.graphs.core import Edge, Graph
from prymtools.graphs.divisors import (
    Divisor,
    chip_fire,
    group_structure,
    jacobian_order,
    jacobian_structure,
    laplacian,
    linearly_equivalent,
    principal_divisor,
    spanning_tree_count,
)
from sympy import Matrix


@pytest.mark.parametrize(
    "graph, factors",
    [
        (complete_graph(4), (4, 4)),
        (cycle_graph(5), (5,)),
        (Graph((1, 2), (Edge(1, 1, 2), Edge(2, 1, 2), Edge(3, 2, 1))), (3,)),
        (Graph((1, 2, 3), (Edge(1, 1, 2), Edge(2, 2, 3))), ()),
        (Graph((1,), (Edge(1, 1, 1),)), ()),
    ],
)
def test_jacobian_structure(graph, factors):
    structure = jacobian_structure(graph)
    assert structure.invariant_factors == factors
    assert structure.free_rank == 0
    assert jacobian_order(graph) == structure.order == spanning_tree_count(graph)


def test_group_structure_canonicalizes():
    assert group_structure(Matrix([[6, 0], [0, 4]])).invariant_factors == (2, 12)
    assert group_structure(Matrix([[2, 0], [0, 0]])).free_rank == 1
    assert group_structure(Matrix([[2, 0], [0, 0]])).order is None


def test_loops_leave_the_laplacian_alone():
    plain = cycle_graph(3)
    looped = Graph(plain.vertices, (*plain.edges, Edge(4, 2, 2)))
    assert laplacian(plain) == laplacian(looped)


def test_linear_equivalence_on_a_cycle():
    graph = cycle_graph(3)
    d1 = Divisor({2: 1, 1: -1})
    d2 = Divisor({3: 1, 2: -1})
    result = linearly_equivalent(graph, d1, d2)
    assert result
    assert chip_fire(graph, d2, Divisor(result.firing)) == d1
    assert not linearly_equivalent(graph, d1, Divisor())
    assert not linearly_equivalent(graph, d1, Divisor({1: 1}))


def test_principal_divisors_have_degree_zero():
    graph = complete_graph(4)
    principal = principal_divisor(graph, Divisor({1: 2, 3: -1}))
    assert principal.degree == 0
    assert principal_divisor(graph, Divisor({v: 1 for v in graph.vertices})).is_zero()
    assert linearly_equivalent(graph, principal, Divisor())
