import json

import pytest

from prymtools.cli import run
from prymtools.graphs.documents import dump_cover
from prymtools.selftest.fixtures import load_fixture


def invoke(capsys, *args):
    code = run(list(args))
    out = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(out[-1])


def test_genus(capsys):
    code, report = invoke(capsys, "genus", "--fixture", "doublecover1")
    assert code == 0
    assert report["command"] == "genus"
    assert report["results"] == {"base": 2, "total": 3}
    assert report["agreement"] is True
    assert isinstance(report["timing_ms"], int)


def test_jacobian(capsys):
    code, report = invoke(capsys, "jacobian", "--fixture", "doublecover1")
    assert code == 0
    assert report["results"]["order"] == 4
    assert report["results"]["spanning_trees"] == 4


def test_prym_order(capsys):
    code, report = invoke(capsys, "prym", "order", "--fixture", "example_big")
    assert code == 0
    assert report["command"] == "prym order"
    assert report["results"]["ratio"] == report["results"]["ogod_sum"] == 49


@pytest.mark.parametrize(
    ("spelling", "key"),
    [("ratio", "ratio"), ("signed-det", "signed_det"), ("ogod", "ogod_sum"), ("signed_det", "signed_det")],
)
def test_prym_order_method_spellings(capsys, spelling, key):
    code, report = invoke(capsys, "prym", "order", "--fixture", "doublecover1", "--method", spelling)
    assert code == 0
    assert report["inputs"]["method"] == spelling
    assert report["results"][key] == 8
    assert report["results"]["kernel_norm"]["order"] == 16


def test_prym_volume_from_a_file(capsys, tmp_path):
    path = tmp_path / "cover.json"
    path.write_text(json.dumps(dump_cover(load_fixture("dumbbell_s1"))))
    code, report = invoke(capsys, "prym", "volume", "--cover", str(path))
    assert code == 0
    assert report["results"]["gram"] == 6


def test_ogods(capsys):
    code, report = invoke(capsys, "ogods", "--fixture", "example_big")
    assert code == 0
    assert report["results"]["count"] == 13
    assert report["results"]["rank_counts"] == {"1": 5, "2": 7, "3": 1}


@pytest.mark.parametrize("command", ["zeta", "lfunction"])
def test_zeta_commands(capsys, command):
    code, report = invoke(capsys, command, "--fixture", "dumbbell_s1")
    assert code == 0
    assert report["agreement"] is True


def test_cells_with_picture(capsys, tmp_path):
    svg = tmp_path / "cells.svg"
    code, report = invoke(capsys, "abel-prym", "cells", "--fixture", "example_big", "--svg", str(svg))
    assert code == 0
    assert svg.exists()
    assert report["results"]["volume_cover"]["cells"] == 196


def test_harmonicity(capsys):
    code, report = invoke(capsys, "abel-prym", "harmonicity", "--fixture", "dumbbell_s2")
    assert code == 0
    assert report["results"]["balanced"] == report["results"]["cells"]


def test_fiber(capsys):
    code, report = invoke(capsys, "abel-prym", "fiber", "--fixture", "example_big", "--seed", "4")
    assert code == 0
    assert report["results"]["degree_sum"] == 4


def test_global_degree(capsys):
    code, report = invoke(capsys, "abel-prym", "global-degree", "--fixture", "dumbbell_s1", "--cases", "3")
    assert code == 0
    assert report["results"]["sums"] == [2, 2, 2]


def test_same_seed_same_report(capsys):
    _, first = invoke(capsys, "abel-prym", "fiber", "--fixture", "irregular", "--seed", "8")
    _, second = invoke(capsys, "abel-prym", "fiber", "--fixture", "irregular", "--seed", "8")
    first.pop("timing_ms")
    second.pop("timing_ms")
    assert first == second


def test_input_errors(capsys):
    code, report = invoke(capsys, "prym", "order", "--fixture", "nope")
    assert code == 1
    assert report["error"]["code"] == "input"
    code, report = invoke(capsys, "prym", "order")
    assert code == 1
    code, report = invoke(capsys, "prym", "order", "--fixture", "example_big", "--method", "bogus")
    assert code == 1


def test_unknown_command(capsys):
    code, report = invoke(capsys, "frobnicate")
    assert code == 1
    assert report["error"]["code"] == "usage"
    assert report["command"] == "frobnicate"


def test_unknown_option_is_a_usage_error(capsys):
    code, report = invoke(capsys, "prym", "order", "--fixture", "doublecover1", "--frobnicate")
    assert code == 1
    assert report["error"]["code"] == "usage"
    assert report["command"] == "prym order"


def test_non_loopless_cells_go_through_the_model(capsys):
    code, report = invoke(capsys, "abel-prym", "cells", "--fixture", "dumbbell_s2")
    assert code == 0
    assert report["agreement"] is True
