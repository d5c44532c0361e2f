from __future__ import annotations

import time
from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from fractions import Fraction
from typing import Any

from prymtools.errors import InputFormatError


def parse_fraction(value: Any, what: str = "value") -> Fraction:
    """Parse "p/q", "p" or an integer into an exact fraction.

    Floats are refused: every quantity that enters the toolkit stays exact.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise InputFormatError(f"{what} must be an integer or a 'p/q' string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputFormatError(f"{what} is not an exact fraction: {value!r}") from e
    raise InputFormatError(f"{what} must be an integer or a 'p/q' string, got {value!r}")


def format_fraction(value: Fraction | int) -> int | str:
    if isinstance(value, int):
        return value
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def to_json_value(value: Any) -> Any:
    """Recursively convert results into JSON-safe values without floats."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return format_fraction(value)
    if hasattr(value, "as_dict"):
        return to_json_value(value.as_dict())
    if isinstance(value, Mapping):
        return {str(key): to_json_value(item) for key, item in value.items()}
    if isinstance(value, (set, frozenset)):
        return [to_json_value(item) for item in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [to_json_value(item) for item in value]
    if isinstance(value, float):
        raise TypeError("floating point values are not allowed in reports")
    raise TypeError(f"cannot serialize {type(value).__name__}")


@contextmanager
def elapsed_ms() -> Iterator[list[int]]:
    """Context manager yielding a one-slot list that receives elapsed milliseconds."""
    box = [0]
    start = time.perf_counter_ns()
    try:
        yield box
    finally:
        box[0] = (time.perf_counter_ns() - start) // 1_000_000
