"""Deterministic CSV emission: fixed column order, 12 significant digits."""
from __future__ import annotations

import os
from typing import Any, Iterable, Sequence

__all__ = ["format_cell", "render_csv", "emit_csv"]


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Header plus rows; floats rendered with 12 significant digits."""
    lines = [",".join(columns)]
    ncol = len(columns)
    for row in rows:
        if len(row) != ncol:
            raise ValueError(f"row width {len(row)} does not match schema width {ncol}")
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    text = render_csv(columns, rows)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
