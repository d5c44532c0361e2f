from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from loguru import logger

from prymtools.errors import DomainError
from prymtools.graphs.cover import FreeDoubleCover
from prymtools.prym.abel import cell_matrix, lifted_cells, require_loopless, torsor_coordinates
from prymtools.prym.lattice import PrymBasis
from prymtools.prym.ogods import enumerate_ogods

Point = tuple[float, float]


def cell_outline(cov: FreeDoubleCover, basis: PrymBasis, edges: tuple[int, ...]) -> list[Point]:
    """Corners of the parallelogram image of a two-edge cell, in order."""
    corner = torsor_coordinates(cov, basis, [(eid, Fraction(0)) for eid in edges]).coords
    matrix = cell_matrix(cov, basis, edges).matrix
    first, second = (
        [cov.total.length(eid) * matrix[j][i] for j in range(2)] for i, eid in enumerate(edges)
    )
    points = [
        corner,
        [c + a for c, a in zip(corner, first)],
        [c + a + b for c, a, b in zip(corner, first, second)],
        [c + b for c, b in zip(corner, second)],
    ]
    return [(float(x), float(y)) for x, y in points]


def draw_tessellation(cov: FreeDoubleCover, basis: PrymBasis, path: str | Path) -> int:
    """Draw every non-contracted cell image with its degree and save as SVG.

    Only available when the Prym variety has dimension two. Returns the
    number of cells drawn.
    """
    require_loopless(cov)
    if basis.rank != 2:
        raise DomainError(f"tessellation drawing needs g - 1 = 2, got {basis.rank}")

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Polygon

    fig, ax = plt.subplots(figsize=(8, 8))
    count = 0
    for record in enumerate_ogods(cov):
        for edges in lifted_cells(cov, record):
            outline = cell_outline(cov, basis, edges)
            degree = cell_matrix(cov, basis, edges).degree
            ax.add_patch(Polygon(outline, closed=True, alpha=0.25, edgecolor="black", linewidth=0.6))
            cx = sum(x for x, _ in outline) / 4
            cy = sum(y for _, y in outline) / 4
            ax.annotate(str(degree), (cx, cy), ha="center", va="center", fontsize=8)
            count += 1

    gram = basis.gram
    domain = [(0.0, 0.0), (float(gram[0][0]), float(gram[0][1]))]
    domain.append((float(gram[0][0] + gram[1][0]), float(gram[0][1] + gram[1][1])))
    domain.append((float(gram[1][0]), float(gram[1][1])))
    ax.add_patch(Polygon(domain, closed=True, fill=False, edgecolor="red", linewidth=1.5, linestyle="--"))
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(str(path), format="svg", bbox_inches="tight")
    plt.close(fig)
    logger.info(f"wrote {count} cells to {path}")
    return count
