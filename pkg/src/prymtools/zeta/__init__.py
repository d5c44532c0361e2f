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

__all__ = [
    "IntPolynomial",
    "ZetaReport",
    "artin_L_reciprocal",
    "closed_reduced_counts",
    "euler_product_reciprocal",
    "factorization_holds",
    "ihara_zeta_reciprocal",
    "lfunction_prym_order",
    "northshield_jacobian_order",
    "primitive_counts",
    "prym_order_from_zeta",
    "vanishing_order_and_leading",
]
