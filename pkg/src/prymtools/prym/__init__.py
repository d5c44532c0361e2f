from prymtools.prym.abel import (
    BalanceReport,
    CellMatrix,
    FiberSolver,
    TorsorPoint,
    cell_degree,
    cell_matrix,
    codimension_one_scan,
    fiber,
    global_degree,
    harmonicity_balance,
    scan_cells,
    torsor_coordinates,
)
from prymtools.prym.adapted import adapted_cell_matrix
from prymtools.prym.group import (
    kernel_norm_structure,
    prym_order,
    prym_orders,
    prym_structure,
    signed_laplacian,
)
from prymtools.prym.lattice import PrymBasis, prym_basis, prym_volumes
from prymtools.prym.ogods import OgodRecord, enumerate_ogods, is_ogod, vol2_jacobian, vol2_prym

__all__ = [
    "BalanceReport",
    "CellMatrix",
    "FiberSolver",
    "OgodRecord",
    "PrymBasis",
    "TorsorPoint",
    "adapted_cell_matrix",
    "cell_degree",
    "cell_matrix",
    "codimension_one_scan",
    "enumerate_ogods",
    "fiber",
    "global_degree",
    "harmonicity_balance",
    "is_ogod",
    "kernel_norm_structure",
    "prym_basis",
    "prym_order",
    "prym_orders",
    "prym_structure",
    "prym_volumes",
    "scan_cells",
    "signed_laplacian",
    "torsor_coordinates",
    "vol2_jacobian",
    "vol2_prym",
]
