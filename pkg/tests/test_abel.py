from fractions import Fraction

import pytest

from prymtools.errors import DomainError, LoopyModelError
from prymtools.graphs.cover import loopless_model
from prymtools.prym.abel import (
    FiberSolver,
    TorsorPoint,
    cell_degree,
    cell_image_volume2,
    cell_matrix,
    codimension_one_scan,
    degree_patterns,
    edge_column,
    global_degree,
    harmonicity_balance,
    lifted_cells,
    outgoing_cochain_vanishes,
    predicted_degree,
    scan_cells,
    torsor_coordinates,
    vertex_balance,
    volume_cover_total,
)
from prymtools.prym.lattice import prym_basis
from prymtools.prym.ogods import enumerate_ogods
from prymtools.selftest.fixtures import load_fixture
from prymtools.selftest.suite import random_covers

F = Fraction


def test_edge_columns(flipped_bouquet):
    basis = prym_basis(flipped_bouquet)
    columns = {eid: edge_column(basis, eid) for eid in flipped_bouquet.total.edge_ids}
    assert columns == {2: (-1, -1), 3: (1, 1), 4: (1, 0), 5: (-1, 0), 6: (0, 1), 7: (0, -1)}


def test_cell_degrees_on_the_bouquet(flipped_bouquet):
    basis = prym_basis(flipped_bouquet)
    assert cell_degree(flipped_bouquet, (4, 6), basis) == 1
    assert cell_degree(flipped_bouquet, (4, 5), basis) == 0
    assert cell_degree(flipped_bouquet, (4, 4), basis) == 0
    cells = scan_cells(flipped_bouquet, basis, workers=2)
    assert len(cells) == 21
    assert sum(1 for cell in cells if cell.degree) == 12
    assert volume_cover_total(flipped_bouquet, basis) == (12, 12)
    assert cell_image_volume2(flipped_bouquet, basis, (4, 6)) == F(1, 3)


def test_example_big_cells(example_big):
    basis = prym_basis(example_big)
    lift = example_big.lift_plus
    assert cell_matrix(example_big, basis, (lift[3], example_big.lift_minus[6])).matrix == ((2, 0), (0, 2))
    assert cell_degree(example_big, (lift[1], lift[3]), basis) == 0
    assert cell_degree(example_big, (lift[6], lift[7]), basis) == 0
    for record in enumerate_ogods(example_big):
        for edges in lifted_cells(example_big, record):
            assert predicted_degree(example_big, edges) == 2 ** (record.rank - 1)
    lhs, rhs = volume_cover_total(example_big, basis)
    assert lhs == rhs == 4 * 49


def test_loopy_models_are_refused():
    cov = load_fixture("dumbbell_s2")
    with pytest.raises(LoopyModelError):
        scan_cells(cov)
    assert scan_cells(loopless_model(cov).cover)


def test_balance_at_a_vertex(flipped_bouquet):
    basis = prym_basis(flipped_bouquet)
    report = vertex_balance(basis, [4], 2)
    assert report.balanced
    assert report.pattern == (1, 1, 1, 1)
    assert report.kind == "four"
    assert report.degree == 2
    assert outgoing_cochain_vanishes(basis, 2)


def test_codimension_one_scan(flipped_bouquet, example_big):
    reports = codimension_one_scan(flipped_bouquet)
    assert len(reports) == 12
    assert all(report.balanced for report in reports)
    patterns = degree_patterns(codimension_one_scan(example_big))
    assert set(patterns) <= {"contracted", "two", "three", "four", "other"}


def test_harmonicity_balance(example_big):
    basis = prym_basis(example_big)
    edges = (example_big.lift_plus[3], example_big.lift_minus[6])
    for drop in (0, 1):
        for end in ("source", "target"):
            assert harmonicity_balance(example_big, basis, edges, drop, end).balanced
    with pytest.raises(DomainError):
        harmonicity_balance(example_big, basis, edges, 2)


def test_torsor_coordinates(flipped_bouquet):
    basis = prym_basis(flipped_bouquet)
    point = torsor_coordinates(flipped_bouquet, basis, [(4, F(2, 7)), (6, F(3, 11))])
    assert point.coords == (F(2, 7), F(3, 11))
    shifted = TorsorPoint((point.coords[0] + 2, point.coords[1] + 1))
    assert shifted.equivalent(point, basis.gram)
    assert not TorsorPoint((point.coords[0] + 1, point.coords[1])).equivalent(point, basis.gram)
    with pytest.raises(DomainError):
        torsor_coordinates(flipped_bouquet, basis, [(4, F(2)), (6, F(0))])
    with pytest.raises(DomainError):
        torsor_coordinates(flipped_bouquet, basis, [(4, F(1, 2))])


def test_irregular_divisors(irregular):
    basis = prym_basis(irregular)
    assert basis.gram == ((3, 0), (0, 6))
    first = [(irregular.lift_plus[1], F(1, 2)), (irregular.lift_plus[2], F(1, 4))]
    second = [(irregular.lift_minus[1], F(3, 4)), (irregular.lift_plus[3], F(3, 2))]
    a = torsor_coordinates(irregular, basis, first)
    b = torsor_coordinates(irregular, basis, second)
    assert {a.coords, b.coords} == {(F(-9, 4), F(-3, 4)), (F(-9, 4), F(-27, 4))}
    assert a.equivalent(b, basis.gram)
    assert cell_degree(irregular, [e for e, _ in first], basis) == 2
    assert cell_degree(irregular, [e for e, _ in second], basis) == 1


def test_fiber_of_a_generic_point(flipped_bouquet):
    solver = FiberSolver(flipped_bouquet)
    points = solver.fiber(TorsorPoint((F(2, 7), F(3, 11))))
    assert sum(point.local_degree for point in points) == 4
    assert any(p.edges == (4, 6) and p.parameters == (F(2, 7), F(3, 11)) for p in points)
    with pytest.raises(DomainError):
        solver.fiber(TorsorPoint((F(1),)))


@pytest.mark.parametrize("name", ["example_big", "dumbbell_s1", "irregular"])
def test_global_degree(name):
    cov = loopless_model(load_fixture(name)).cover
    report = global_degree(cov, targets=5, seed=3)
    assert report.expected == 2 ** (cov.genus - 1)
    assert report.agreement


def test_target_in_the_degree_four_cell_has_one_preimage(example_big):
    basis = prym_basis(example_big)
    cell = (example_big.lift_plus[3], example_big.lift_minus[6])
    target = torsor_coordinates(example_big, basis, [(cell[0], F(3, 11)), (cell[1], F(5, 13))])
    points = FiberSolver(example_big, basis).fiber(target)
    assert len(points) == 1
    assert points[0].edges == cell
    assert points[0].parameters == (F(3, 11), F(5, 13))
    assert points[0].local_degree == 4


def test_irregular_fiber_is_generic(irregular):
    basis = prym_basis(irregular)
    target = torsor_coordinates(irregular, basis, [(irregular.lift_plus[1], F(1, 2)), (irregular.lift_plus[2], F(1, 4))])
    points = FiberSolver(irregular, basis).fiber(target)
    found = sorted((p.edges, p.parameters, p.local_degree) for p in points)
    assert found == [
        ((2, 4), (F(1, 2), F(1, 4)), 2),
        ((3, 6), (F(3, 4), F(3, 2)), 1),
        ((3, 7), (F(3, 4), F(3, 2)), 1),
    ]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_degree_dichotomy_on_random_covers(seed):
    for cov in random_covers(seed, 3, max_vertices=5, max_genus=4, min_genus=2):
        model = loopless_model(cov).cover
        basis = prym_basis(model)
        for cell in scan_cells(model, basis):
            assert cell.degree in (0, *(2**k for k in range(basis.rank)))
            assert cell.degree == predicted_degree(model, cell.edges)
        for record in enumerate_ogods(model):
            for edges in lifted_cells(model, record):
                assert cell_degree(model, edges, basis) == 2 ** (record.rank - 1)
