from itertools import combinations

import pytest

from prymtools.errors import DomainError, InvalidCoverError
from prymtools.graphs.core import Chain, Edge, Graph, genus
from prymtools.graphs.cover import (
    MINUS,
    PLUS,
    build_cover,
    cover_from_voltages,
    involute_chain,
    lift_vertex,
    loopless_model,
    preimage_connected,
    pullback_chain,
    pushforward_chain,
    retree,
    subdivide_cover_edge,
)
from prymtools.graphs.divisors import jacobian_order
from prymtools.selftest.fixtures import load_fixture
from prymtools.selftest.suite import random_covers


def test_total_graph_layout(doublecover1):
    assert doublecover1.genus == 2
    assert len(doublecover1.total.vertices) == 8
    assert len(doublecover1.total.edges) == 10
    assert genus(doublecover1.total) == 3
    assert lift_vertex(3, PLUS) == 6
    assert lift_vertex(3, MINUS) == 7
    assert doublecover1.lifts(4) == (8, 9)


def test_lift_signs_place_plus_lift(example_big):
    assert example_big.e0 == 4
    assert dict(example_big.sigma) == {1: 1, 7: -1}
    loop = example_big.total.edge(example_big.lift_plus[7])
    assert (loop.src, loop.dst) == (9, 8)
    assert not example_big.total.has_loops()


def test_involution_is_free(doublecover1):
    for edge in doublecover1.total.edges:
        partner = doublecover1.involute_edge(edge.id)
        assert partner != edge.id
        assert doublecover1.involute_edge(partner) == edge.id
        assert doublecover1.project_edge(partner) == doublecover1.project_edge(edge.id)


@pytest.mark.parametrize(
    "tree, flips, e0, signs",
    [
        ([3, 4, 5], [], None, {}),
        ([3, 4, 5], [3], None, {}),
        ([1, 2], [4], None, {}),
        ([3, 4, 5], [1, 2], 5, {}),
        ([3, 4, 5], [1, 2], None, {1: MINUS}),
        ([3, 4, 5], [1, 2], None, {3: PLUS}),
    ],
)
def test_invalid_presentations(doublecover1, tree, flips, e0, signs):
    with pytest.raises(InvalidCoverError):
        build_cover(doublecover1.base, tree, flips, e0, signs)


def test_preimage_connectivity_methods_agree():
    cov = load_fixture("dumbbell_s2")
    assert preimage_connected(cov, [1])
    assert not preimage_connected(cov, [2])
    assert preimage_connected(cov, [1, 2, 3])
    assert preimage_connected(cov, [2], method="lift") is False
    with pytest.raises(DomainError):
        preimage_connected(cov, [1, 2])


@pytest.mark.parametrize("seed", [3, 4, 5, 6])
def test_preimage_connectivity_on_every_subgraph(seed):
    for cov in random_covers(seed, 5, max_vertices=5, max_genus=3):
        edge_ids = cov.base.edge_ids
        assert len(edge_ids) <= 8
        for size in range(1, len(edge_ids) + 1):
            for subset in combinations(edge_ids, size):
                try:
                    by_lift = preimage_connected(cov, subset, method="lift")
                except DomainError:
                    continue
                assert by_lift == preimage_connected(cov, subset, method="parity")


def test_push_pull_and_involution(doublecover1):
    chain = Chain({1: 2, 4: -1})
    assert pushforward_chain(doublecover1, pullback_chain(doublecover1, chain)) == 2 * chain
    lifted = Chain({doublecover1.lift_plus[1]: 1})
    assert involute_chain(doublecover1, lifted) == Chain({doublecover1.lift_minus[1]: 1})


def test_cover_from_voltages_switches_to_tree(doublecover1):
    voltages = {1: 1, 2: -1, 3: -1, 4: -1, 5: 1}
    cov, switch = cover_from_voltages(doublecover1.base, voltages, [3, 4, 5])
    assert cov.tree == frozenset({3, 4, 5})
    assert cov.flips == frozenset({1, 2})
    assert all(switch[e.src] * voltages[e.id] * switch[e.dst] == 1 for e in cov.base.edges if e.id in cov.tree)
    assert jacobian_order(cov.total) == jacobian_order(doublecover1.total)


def test_retree_is_an_isomorphism(doublecover1):
    other, iso = retree(doublecover1, [1, 2, 4])
    assert other.tree == frozenset({1, 2, 4})
    assert sorted(iso.edge_map) == sorted(doublecover1.total.edge_ids)
    assert sorted(iso.edge_map.values()) == sorted(other.total.edge_ids)
    assert jacobian_order(other.total) == 64


def test_loopless_model_splits_unflipped_loops():
    cov = load_fixture("dumbbell_s2")
    assert cov.total.has_loops()
    model = loopless_model(cov)
    assert not model.cover.total.has_loops()
    assert model.cover.genus == cov.genus
    assert model.original_base_edge(4) == 2
    assert model.original_total_edge(model.cover.lift_plus[4]) == cov.lift_plus[2]
    assert model.cover.base.edge(1).is_loop


def test_loopless_model_keeps_loopless_covers(example_big):
    assert loopless_model(example_big).cover is example_big


def test_subdivided_cover_keeps_the_genus(irregular):
    finer = subdivide_cover_edge(irregular, 5)
    assert finer.genus == irregular.genus
    assert 5 in finer.flips
    assert jacobian_order(finer.total) % (2 * jacobian_order(finer.base)) == 0


def test_empty_flip_set_is_a_disconnected_cover():
    graph = Graph((1,), (Edge(1, 1, 1),))
    with pytest.raises(InvalidCoverError, match="disconnected"):
        build_cover(graph, [], [])
