import pytest

from prymtools.errors import DomainError
from prymtools.prym.lattice import prym_basis
from prymtools.prym.svg import cell_outline, draw_tessellation
from prymtools.selftest.fixtures import load_fixture


def test_cell_outline(flipped_bouquet):
    basis = prym_basis(flipped_bouquet)
    assert cell_outline(flipped_bouquet, basis, (4, 6)) == [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def test_draw_tessellation(tmp_path, flipped_bouquet):
    path = tmp_path / "cells.svg"
    assert draw_tessellation(flipped_bouquet, prym_basis(flipped_bouquet), path) == 12
    assert "<svg" in path.read_text()


def test_only_two_dimensional(tmp_path):
    cov = load_fixture("dumbbell_s1")
    with pytest.raises(DomainError):
        draw_tessellation(cov, prym_basis(cov), tmp_path / "cells.svg")
