"""JSON export and import for every value type of the package."""

from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from fractions import Fraction
from typing import Any

from .errors import ParseError
from .indexset import IndexSet
from .partitions import PartitionDesc
from .perm import FinPerm

__all__ = ["to_jsonable", "export", "import_", "dumps"]


def to_jsonable(obj: Any):
    """Plain JSON data for ``obj`` (recursing into containers)."""
    from .groups import GroupDesc

    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (FinPerm, IndexSet, PartitionDesc, GroupDesc)):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, compact separators."""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


_KINDS = {
    FinPerm: "perm",
    IndexSet: "indexset",
    PartitionDesc: "partition",
}


def export(value) -> bytes:
    """Tagged JSON bytes for a perm, index set, partition or group description."""
    from .groups import GroupDesc

    if isinstance(value, GroupDesc):
        kind = "group"
    else:
        kind = _KINDS.get(type(value))
        if kind is None:
            raise TypeError(f"no export format for {type(value).__name__}")
    return json.dumps({"kind": kind, "value": value.to_json()}, sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def import_(data: bytes | str):
    """Inverse of :func:`export`.  Untagged input is read as a permutation."""
    from .groups import group_from_json

    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid JSON: {exc}", f"offset {getattr(exc, 'pos', 0)}") from None
    if isinstance(doc, list):
        return FinPerm.from_json(doc)
    if not isinstance(doc, dict) or "kind" not in doc or "value" not in doc:
        raise ParseError("expected an object with 'kind' and 'value'")
    kind, value = doc["kind"], doc["value"]
    if kind == "perm":
        return FinPerm.from_json(value)
    if kind == "indexset":
        return IndexSet.from_json(value)
    if kind == "partition":
        return PartitionDesc.from_json(value)
    if kind == "group":
        return group_from_json(value)
    raise ParseError(f"unknown kind {kind!r}", "kind")
