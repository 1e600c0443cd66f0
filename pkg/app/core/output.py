"""CSV and JSON table writers shared by every command.

Reals are written with ``repr`` so that a table reads back to the same
doubles; infinity is written as ``inf`` in both formats.
"""
from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import click

from ..models import OutputFormat

SCHEMA_VERSION = 1


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_cell(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render_csv(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def parse_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def render_json(command: str, payload: dict[str, Any]) -> str:
    document = {"schema": SCHEMA_VERSION, "command": command, **payload}
    return json.dumps(_jsonable(document), sort_keys=True, indent=2, allow_nan=False) + "\n"


def render_table(
    fmt: OutputFormat,
    command: str,
    columns: Sequence[str],
    rows: Sequence[dict[str, Any]],
    extra: Optional[dict[str, Any]] = None,
) -> str:
    if fmt == OutputFormat.JSON:
        payload = {"columns": list(columns), "rows": [{c: row.get(c) for c in columns} for row in rows]}
        payload.update(extra or {})
        return render_json(command, payload)
    return render_csv(columns, rows)


def emit(text: str, out: Optional[str]) -> None:
    """Write to the --out path, or to stdout when none was given."""
    if out:
        target = Path(out)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
