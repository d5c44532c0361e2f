from prymtools.graphs.core import (
    Chain,
    Edge,
    Graph,
    Rat,
    chain_pairing,
    connected_components,
    fundamental_cycle,
    genus,
    length_pairing,
    spanning_trees,
    subdivide_edge,
)
from prymtools.graphs.cover import (
    FreeDoubleCover,
    build_cover,
    cover_from_voltages,
    involute_chain,
    loopless_model,
    preimage_connected,
    pullback_chain,
    pushforward_chain,
    retree,
)
from prymtools.graphs.divisors import (
    AbelianGroupStructure,
    Divisor,
    group_structure,
    jacobian_order,
    laplacian,
    linearly_equivalent,
)

__all__ = [
    "AbelianGroupStructure",
    "Chain",
    "Divisor",
    "Edge",
    "FreeDoubleCover",
    "Graph",
    "Rat",
    "build_cover",
    "chain_pairing",
    "connected_components",
    "cover_from_voltages",
    "fundamental_cycle",
    "genus",
    "group_structure",
    "involute_chain",
    "jacobian_order",
    "laplacian",
    "length_pairing",
    "linearly_equivalent",
    "loopless_model",
    "preimage_connected",
    "pullback_chain",
    "pushforward_chain",
    "retree",
    "spanning_trees",
    "subdivide_edge",
]
