"""Delimited and JSON report writers.

CSV layout: '#'-prefixed metadata lines (key = value), one '# columns:' line
naming the fields, then bare comma-separated rows with 12 significant digits.
No timestamps anywhere, so fixed inputs give bit-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path


def _format_value(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int,)):
        return str(x)
    return f"{float(x):.12g}"


def write_csv(path, columns: list[str], rows, metadata: dict,
              footer: dict | None = None) -> Path:
    path = Path(path)
    lines = []
    for key, value in metadata.items():
        lines.append(f"# {key} = {value}")
    lines.append("# columns: " + ",".join(columns))
    for row in rows:
        lines.append(",".join(_format_value(x) for x in row))
    for key, value in (footer or {}).items():
        lines.append(f"# {key} = {_format_value(value)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_json(path, payload: dict) -> Path:
    """Single-document alternative to the CSV report."""
    path = Path(path)

    def default(obj):
        try:
            return float(obj)
        except (TypeError, ValueError):
            return str(obj)

    path.write_text(json.dumps(payload, indent=2, default=default) + "\n",
                    encoding="utf-8")
    return path


def rows_payload(columns: list[str], rows, metadata: dict,
                 footer: dict | None = None) -> dict:
    """The JSON shape mirroring one CSV table."""
    payload = {
        "metadata": {k: str(v) for k, v in metadata.items()},
        "columns": list(columns),
        "rows": [[x if isinstance(x, bool) else float(x) for x in row]
                 for row in rows],
    }
    if footer:
        payload["summary"] = {k: float(v) for k, v in footer.items()}
    return payload
