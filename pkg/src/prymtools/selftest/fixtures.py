from __future__ import annotations

import json
from importlib import resources
from typing import Any

from loguru import logger

from prymtools.errors import InputFormatError
from prymtools.graphs.cover import FreeDoubleCover
from prymtools.graphs.documents import parse_cover

FIXTURE_NAMES = ("doublecover1", "dumbbell_s1", "dumbbell_s2", "example_big", "irregular")


def fixture_document(name: str) -> dict[str, Any]:
    if name not in FIXTURE_NAMES:
        raise InputFormatError(f"unknown fixture {name!r}, choose from {', '.join(FIXTURE_NAMES)}")
    text = resources.files("prymtools.fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")
    document: dict[str, Any] = json.loads(text)
    return document


def load_fixture(name: str) -> FreeDoubleCover:
    logger.info(f"Loading fixture {name}")
    cover = parse_cover(fixture_document(name))
    logger.info(f"Loaded {name} (genus {cover.genus}, {len(cover.base.edges)} edges)")
    return cover
