import json
from fractions import Fraction

import pytest

from prymtools.errors import InputFormatError
from prymtools.graphs.documents import (
    dump_cover,
    graph_to_json,
    load_cover,
    load_graph,
    parse_cover,
    parse_divisor,
    parse_graph,
    read_json,
)
from prymtools.selftest.fixtures import FIXTURE_NAMES, fixture_document, load_fixture

GRAPH = {
    "vertices": [1, 2],
    "edges": [
        {"id": 1, "src": 1, "dst": 1, "len": "1/2"},
        {"id": 2, "src": 1, "dst": 2},
        {"id": 3, "src": 2, "dst": 1, "len": 3},
    ],
}


def test_parse_graph_reads_exact_lengths():
    graph = parse_graph(GRAPH)
    assert graph.length(1) == Fraction(1, 2)
    assert graph.length(2) == 1
    assert graph.length(3) == 3


def test_serialized_graph_is_canonical():
    text = graph_to_json(parse_graph(GRAPH))
    assert graph_to_json(parse_graph(json.loads(text))) == text
    assert json.loads(text)["edges"][0] == {"dst": 1, "id": 1, "len": "1/2", "src": 1}


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"vertices": [1], "edges": {}},
        {"vertices": [1, 2], "edges": [{"id": 1, "src": 1}]},
        {"vertices": [1, 2], "edges": [{"id": 1, "src": 1, "dst": 2, "len": 0.5}]},
        {"vertices": [1, 2], "edges": [{"id": 1, "src": 1, "dst": 2, "len": "x"}]},
        {"vertices": ["a"], "edges": []},
    ],
)
def test_malformed_graphs(doc):
    with pytest.raises(InputFormatError):
        parse_graph(doc)


def test_cover_document_with_voltages():
    cov = parse_cover({"graph": GRAPH, "voltages": {"1": -1, "2": 1, "3": 1}})
    assert cov.flips == frozenset({1})
    assert cov.tree == frozenset({2})


def test_cover_needs_a_graph():
    with pytest.raises(InputFormatError):
        parse_cover({"tree": [2], "flips": [1]})


def test_dumped_cover_reloads(tmp_path, example_big):
    path = tmp_path / "cover.json"
    path.write_text(json.dumps(dump_cover(example_big)))
    again = load_cover(path)
    assert again.base == example_big.base
    assert again.tree == example_big.tree
    assert again.e0 == example_big.e0
    assert dict(again.sigma) == dict(example_big.sigma)


def test_separate_graph_file(tmp_path):
    graph_path = tmp_path / "graph.json"
    graph_path.write_text(json.dumps(GRAPH))
    cover_path = tmp_path / "cover.json"
    cover_path.write_text(json.dumps({"tree": [2], "flips": [1, 3]}))
    cov = load_cover(cover_path, load_graph(graph_path))
    assert cov.e0 == 1
    assert cov.genus == 2


def test_unreadable_files(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(InputFormatError):
        read_json(broken)
    with pytest.raises(InputFormatError):
        read_json(tmp_path / "missing.json")


def test_parse_divisor():
    assert parse_divisor({"1": 2, "3": -1}).degree == 1
    with pytest.raises(InputFormatError):
        parse_divisor({"v": 1})


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_load(name):
    assert fixture_document(name)["name"] == name
    assert load_fixture(name).genus >= 2


def test_unknown_fixture():
    with pytest.raises(InputFormatError):
        load_fixture("nope")
