"""Deterministic JSON manifests: stable key order, 17-significant-digit floats.

The stdlib encoder formats floats with shortest-roundtrip repr, which is
stable but version-sensitive in odd corners; manifests pin %.17g so a
manifest diff is meaningful across platforms.  Key order is insertion
order, fixed by construction.
"""

from __future__ import annotations

import json
import math


def _format(value, indent: int) -> str:
    pad = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value in manifest: {value}")
        return f"{value:.17g}"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ",\n".join("  " * (indent + 1) + _format(v, indent + 1) for v in value)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = []
        for k, v in value.items():
            items.append("  " * (indent + 1) + json.dumps(str(k)) + ": "
                         + _format(v, indent + 1))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"unsupported manifest value type: {type(value)!r}")


def manifest_json(manifest: dict) -> str:
    return _format(manifest, 0) + "\n"


def write_manifest(manifest: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(manifest_json(manifest))
