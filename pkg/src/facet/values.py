"""JSON value model shared across the package.

Values are plain Python objects (None/bool/int/float/str/list/dict) in the
shape json.loads produces. Numbers are 64-bit floats with exact integers kept
as int, so 199.0 and 199 canonicalize to the same value.
"""
from __future__ import annotations

import json
import math
from typing import Any

JsonValue = Any  # None | bool | int | float | str | list | dict


class ValueError_(ValueError):
    """A value is outside the JSON model (NaN, infinity, non-string keys...)."""


def canonicalize(value: JsonValue) -> JsonValue:
    """Normalize a JSON value: integral floats become int, containers recurse.

    Raises ValueError_ for NaN/infinity and for dicts with non-string keys.
    """
    if value is None or isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            raise ValueError_(f"non-finite number not representable: {value!r}")
        if value.is_integer() and abs(value) <= 2**53:
            return int(value)
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return [canonicalize(v) for v in value]
    if isinstance(value, tuple):
        return [canonicalize(v) for v in value]
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if not isinstance(k, str):
                raise ValueError_(f"object key must be a string, got {k!r}")
            out[k] = canonicalize(v)
        return out
    raise ValueError_(f"not a JSON value: {value!r}")


def values_equal(a: JsonValue, b: JsonValue) -> bool:
    """Structural equality after canonicalization (1 == 1.0, True != 1)."""
    return _key(canonicalize(a)) == _key(canonicalize(b))


def _key(value: JsonValue) -> Any:
    # bool is an int subclass; tag types so True and 1 stay distinct.
    if value is None:
        return ("null",)
    if isinstance(value, bool):
        return ("bool", value)
    if isinstance(value, (int, float)):
        return ("num", float(value))
    if isinstance(value, str):
        return ("str", value)
    if isinstance(value, list):
        return ("arr", tuple(_key(v) for v in value))
    return ("obj", tuple(sorted((k, _key(v)) for k, v in value.items())))


def value_key(value: JsonValue) -> Any:
    """Hashable identity for a canonicalized value (multiset membership)."""
    return _key(canonicalize(value))


def dumps_canonical(value: JsonValue) -> str:
    """Compact, key-stable JSON text for signatures and class descriptors."""
    return json.dumps(canonicalize(value), sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"))


def type_name(value: JsonValue) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    if isinstance(value, dict):
        return "object"
    return type(value).__name__
