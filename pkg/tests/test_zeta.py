import pytest

from conftest import bouquet, complete_graph, cycle_graph
from prymtools.errors import DomainError
from prymtools.graphs.core import Edge, Graph
from prymtools.selftest.fixtures import FIXTURE_NAMES, load_fixture
from prymtools.selftest.suite import random_covers
from prymtools.zeta.euler import closed_reduced_counts, euler_product_reciprocal, primitive_counts
from prymtools.zeta.ihara import (
    IntPolynomial,
    ZetaReport,
    artin_L_reciprocal,
    factorization_holds,
    ihara_zeta_reciprocal,
    lfunction_prym_order,
    northshield_jacobian_order,
    prym_order_from_zeta,
    vanishing_order_and_leading,
)


def test_single_loop():
    assert ihara_zeta_reciprocal(bouquet(1)) == IntPolynomial((1, -2, 1))


def test_triangle():
    assert ihara_zeta_reciprocal(cycle_graph(3)).as_list() == [1, 0, 0, -2, 0, 0, 1]


def test_trees_have_no_zeta():
    with pytest.raises(DomainError):
        ihara_zeta_reciprocal(Graph((1, 2), (Edge(1, 1, 2),)))


def test_polynomial_helpers():
    p = IntPolynomial((1, -2, 1, 0, 0))
    assert p.coefficients == (1, -2, 1)
    assert p.degree == 2
    assert p(1) == 0
    assert p.shift(1).as_list() == [0, 0, 1]
    assert vanishing_order_and_leading(p) == (2, 1)
    assert IntPolynomial(()).degree == -1
    assert (p * IntPolynomial((1, 1))).as_list() == [1, -1, -1, 1]


@pytest.mark.parametrize("graph, order", [(complete_graph(4), 16), (bouquet(2), 1), (cycle_graph(3), None)])
def test_class_number_from_zeta(graph, order):
    if order is None:
        with pytest.raises(DomainError):
            northshield_jacobian_order(graph)
    else:
        assert northshield_jacobian_order(graph) == order


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_factorization_and_prym_order(name):
    cov = load_fixture(name)
    assert factorization_holds(cov)
    expected = {"doublecover1": 8, "dumbbell_s1": 6, "dumbbell_s2": 1, "example_big": 49}.get(name)
    if expected is not None:
        assert lfunction_prym_order(cov) == expected
        assert prym_order_from_zeta(cov) == expected


def test_report(doublecover1):
    report = ZetaReport.of(artin_L_reciprocal(doublecover1))
    assert report.order == doublecover1.genus - 1
    assert report.as_dict()["coefficients"] == list(report.coefficients)


def test_euler_product_matches(flipped_bouquet):
    for graph in (cycle_graph(3), bouquet(2), complete_graph(4), flipped_bouquet.base):
        assert euler_product_reciprocal(graph, 10) == ihara_zeta_reciprocal(graph).truncate(10)


def test_prime_counts_of_a_triangle():
    counts = closed_reduced_counts(cycle_graph(3), 6)
    assert counts == [0, 0, 6, 0, 0, 6]
    assert primitive_counts(counts) == [0, 0, 2, 0, 0, 0]


def test_random_covers_factor():
    for cov in random_covers(seed=5, count=8, max_vertices=5, max_genus=4):
        assert factorization_holds(cov)
