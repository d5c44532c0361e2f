"""JSON documents for graphs, covers and divisors.

A graph document is ``{"vertices": [...], "edges": [{"id", "src", "dst", "len"}]}``
with lengths written as exact ``"p/q"`` strings (omitted means 1). A cover
document is ``{"tree": [...], "flips": [...]}`` and may embed its graph under
``"graph"``, name the distinguished flip edge as ``"e0"`` and give per-edge
``"lift_signs"``; alternatively it may carry a ``"voltages"`` map instead of
tree and flips.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from prymtools.errors import InputFormatError
from prymtools.graphs.core import Edge, Graph
from prymtools.graphs.cover import FreeDoubleCover, build_cover, cover_from_voltages
from prymtools.graphs.divisors import Divisor
from prymtools.utils import format_fraction, parse_fraction


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputFormatError(f"{what} must be an integer, got {value!r}")
    return value


def _int_list(doc: Mapping[str, Any], key: str) -> list[int]:
    values = doc.get(key)
    if not isinstance(values, list):
        raise InputFormatError(f"'{key}' must be a list of integers")
    return [_int(v, key) for v in values]


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: malformed JSON ({e})") from e
    except OSError as e:
        raise InputFormatError(f"{path}: cannot read file ({e})") from e


def parse_graph(doc: Any) -> Graph:
    if not isinstance(doc, Mapping):
        raise InputFormatError("graph document must be a JSON object")
    vertices = _int_list(doc, "vertices")
    raw_edges = doc.get("edges")
    if not isinstance(raw_edges, list):
        raise InputFormatError("'edges' must be a list")
    edges: list[Edge] = []
    lengths = {}
    for raw in raw_edges:
        if not isinstance(raw, Mapping):
            raise InputFormatError("every edge must be a JSON object")
        try:
            edge = Edge(_int(raw["id"], "edge id"), _int(raw["src"], "src"), _int(raw["dst"], "dst"))
        except KeyError as e:
            raise InputFormatError(f"edge is missing field {e}") from e
        edges.append(edge)
        if "len" in raw:
            lengths[edge.id] = parse_fraction(raw["len"], f"length of edge {edge.id}")
    return Graph(tuple(vertices), tuple(edges), lengths)


def dump_graph(graph: Graph) -> dict[str, Any]:
    return {
        "edges": [
            {"dst": e.dst, "id": e.id, "len": str(format_fraction(graph.length(e.id))), "src": e.src}
            for e in graph.edges
        ],
        "vertices": list(graph.vertices),
    }


def graph_to_json(graph: Graph) -> str:
    return json.dumps(dump_graph(graph), sort_keys=True)


def parse_cover(doc: Any, graph: Graph | None = None) -> FreeDoubleCover:
    if not isinstance(doc, Mapping):
        raise InputFormatError("cover document must be a JSON object")
    if "graph" in doc:
        graph = parse_graph(doc["graph"])
    if graph is None:
        raise InputFormatError("cover document needs a graph (embedded or given separately)")
    e0 = _int(doc["e0"], "e0") if "e0" in doc else None
    if "voltages" in doc:
        voltages = {int(k): _int(v, "voltage") for k, v in _mapping(doc, "voltages").items()}
        tree = _int_list(doc, "tree") if "tree" in doc else None
        cover, _ = cover_from_voltages(graph, voltages, tree, e0)
        return cover
    signs = {int(k): _int(v, "lift sign") for k, v in _mapping(doc, "lift_signs").items()}
    return build_cover(graph, _int_list(doc, "tree"), _int_list(doc, "flips"), e0, signs)


def _mapping(doc: Mapping[str, Any], key: str) -> Mapping[str, Any]:
    value = doc.get(key, {})
    if not isinstance(value, Mapping):
        raise InputFormatError(f"'{key}' must be a JSON object")
    try:
        for k in value:
            int(k)
    except ValueError as e:
        raise InputFormatError(f"'{key}' keys must be integer ids") from e
    return value


def dump_cover(cover: FreeDoubleCover, embed_graph: bool = True) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "e0": cover.e0,
        "flips": sorted(cover.flips),
        "lift_signs": {str(k): v for k, v in sorted(cover.sigma.items())},
        "tree": sorted(cover.tree),
    }
    if embed_graph:
        doc["graph"] = dump_graph(cover.base)
    return doc


def parse_divisor(doc: Any) -> Divisor:
    if not isinstance(doc, Mapping):
        raise InputFormatError("divisor document must be a JSON object")
    try:
        return Divisor({int(k): _int(v, "coefficient") for k, v in doc.items()})
    except ValueError as e:
        raise InputFormatError("divisor keys must be vertex ids") from e


def load_graph(path: str | Path) -> Graph:
    return parse_graph(read_json(path))


def load_cover(path: str | Path, graph: Graph | None = None) -> FreeDoubleCover:
    return parse_cover(read_json(path), graph)
