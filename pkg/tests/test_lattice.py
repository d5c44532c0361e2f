from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_graph
from prymtools.graphs.core import Chain
from prymtools.graphs.core import is_spanning_tree
from prymtools.graphs.cover import involute_chain, pushforward_chain, with_lengths
from prymtools.prym.lattice import (
    is_positive_definite,
    is_saturated,
    prym_basis,
    prym_volumes,
    total_tree,
    vol2_jacobian_gram,
    vol2_prym_gram,
)
from prymtools.prym.ogods import vol2_jacobian
from prymtools.selftest.fixtures import FIXTURE_NAMES, load_fixture

lengths = st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=12)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_basis_is_anti_invariant_and_saturated(name):
    cov = load_fixture(name)
    basis = prym_basis(cov)
    assert basis.rank == cov.genus - 1
    assert is_spanning_tree(cov.total, total_tree(cov))
    for cycle in basis.cycles:
        assert cycle.is_cycle(cov.total)
        assert involute_chain(cov, cycle) == -cycle
        assert pushforward_chain(cov, cycle).is_zero()
    assert is_saturated(basis)
    assert is_positive_definite(basis.gram)


def test_flipped_bouquet_gram(flipped_bouquet):
    basis = prym_basis(flipped_bouquet)
    assert basis.generators == (2, 3)
    assert basis.gram == ((2, 1), (1, 2))
    assert vol2_prym_gram(flipped_bouquet) == 3


def test_example_big_gram(example_big):
    assert prym_basis(example_big).gram == ((7, 0), (0, 7))


def test_example_big_basis_cycles(example_big):
    basis = prym_basis(example_big)
    assert basis.generators == (1, 7)
    assert basis.plus_cycles == (
        Chain({2: 1, 6: 1, 7: -1, 8: -1, 10: -1}),
        Chain({8: 1, 11: 1, 12: -1, 13: 1, 14: 1}),
    )
    assert basis.cycles[0] == Chain({2: 1, 3: -1, 6: 2, 7: -2, 8: -1, 9: 1, 10: -1, 11: 1})


@settings(deadline=None, max_examples=15)
@given(lengths, lengths, lengths)
def test_dumbbell_volumes(x1, x2, x3):
    s1 = with_lengths(load_fixture("dumbbell_s1"), {1: x1, 2: x2, 3: x3})
    s2 = with_lengths(load_fixture("dumbbell_s2"), {1: x1, 2: x2, 3: x3})
    report = prym_volumes(s1)
    assert report.agreement
    assert report.gram == x1 + x2 + 4 * x3
    assert prym_volumes(s2).gram == x2


def test_jacobian_volume_methods_agree(irregular):
    for graph in (irregular.base, irregular.total, complete_graph(4)):
        assert vol2_jacobian(graph) == vol2_jacobian(graph, "trees") == vol2_jacobian_gram(graph)
    assert vol2_jacobian(complete_graph(4)) == 16
