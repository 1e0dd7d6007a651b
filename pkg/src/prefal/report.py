"""Deterministic JSON and text rendering of analysis reports."""

from __future__ import annotations

import json
from typing import Any

SCHEMA_VERSION = 1


def to_json(body: dict) -> str:
    """Sorted keys, fixed indentation, schema tag; no timestamps."""
    return json.dumps({"schema": SCHEMA_VERSION, **body}, sort_keys=True, indent=2,
                      ensure_ascii=False)


def to_text(body: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key in sorted(body):
        value = body[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(to_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(value):
                lines.append(f"{pad}  [{i}]")
                lines.append(to_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return "\n".join(lines)


def _scalar(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(_scalar(v) for v in value) if value else "-"
    if value is None:
        return "-"
    return str(value)
