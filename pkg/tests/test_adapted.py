from itertools import product
from math import prod

import pytest

from prymtools.errors import DomainError
from prymtools.graphs.cover import loopless_model
from prymtools.prym.abel import cell_degree, lifted_cells
from prymtools.prym.adapted import adapted_cell_matrix
from prymtools.prym.ogods import enumerate_ogods
from prymtools.selftest.suite import random_covers


def test_rank_three_cell(example_big):
    cell = adapted_cell_matrix(example_big, (example_big.lift_plus[3], example_big.lift_plus[6]))
    assert cell.tree == frozenset({3, 4, 6})
    assert cell.e0 == 1
    assert cell.row_edges == (5, 7)
    assert [cell.cover.project_edge(eid) for eid in cell.column_edges] == [3, 6]
    assert cell.is_lower_triangular()
    assert [abs(x) for x in cell.diagonal] == [2, 2]
    assert cell.expected_diagonal() == (2, 2)


def test_every_example_big_cell_is_triangular(example_big):
    for record in enumerate_ogods(example_big):
        for edges in product(*(example_big.lifts(eid) for eid in record.edges)):
            cell = adapted_cell_matrix(example_big, edges)
            assert cell.is_lower_triangular()
            assert tuple(abs(x) for x in cell.diagonal) == cell.expected_diagonal()
            assert abs(cell.diagonal[0] * cell.diagonal[1]) == cell_degree(example_big, edges)


def test_not_an_ogod(example_big):
    with pytest.raises(DomainError):
        adapted_cell_matrix(example_big, (example_big.lift_plus[1], example_big.lift_plus[3]))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_cells_are_triangular(seed):
    for cov in random_covers(seed, 3, max_vertices=5, max_genus=4, min_genus=2):
        model = loopless_model(cov).cover
        for record in enumerate_ogods(model):
            for edges in lifted_cells(model, record):
                cell = adapted_cell_matrix(model, edges)
                assert cell.is_lower_triangular()
                assert tuple(abs(x) for x in cell.diagonal) == cell.expected_diagonal()
                assert prod(abs(x) for x in cell.diagonal) == 2 ** (record.rank - 1)
