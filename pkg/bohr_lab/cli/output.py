"""Report emitters for the bohr-lab CLI.

Three formats:
  - json: UTF-8, keys in insertion order, floats in shortest round-trip form.
  - csv: header row, comma separated, LF line endings, floats at 17
    significant digits.
  - text: a Rich table rendered without color.

Non-finite floats are written as "inf", "-inf" or "nan" in every format.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

from rich.console import Console
from rich.table import Table

from bohr_lab.errors import ParameterError

FORMATS = ("json", "csv", "text")
TABLE_WIDTH = 120

Row = Mapping[str, Any]


def format_number(value: Any) -> str:
    """Render one cell: floats at 17 significant digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
        return f"{value:.17g}"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_number(value)
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render_json(payload: Any) -> str:
    """Serialize a record or list of records as indented JSON."""
    return json.dumps(_jsonable(payload), indent=2, ensure_ascii=False) + "\n"


def render_csv(rows: Sequence[Row]) -> str:
    """Serialize rows sharing the first row's columns."""
    buffer = io.StringIO()
    if not rows:
        return ""
    columns = list(rows[0].keys())
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row.get(column)) for column in columns])
    return buffer.getvalue()


def render_table(rows: Sequence[Row], title: str | None = None) -> str:
    """Render rows as a plain-text Rich table."""
    table = Table(title=title, show_lines=False)
    columns = list(rows[0].keys()) if rows else []
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(format_number(row.get(column)) for column in columns))
    console = Console(
        file=io.StringIO(), width=TABLE_WIDTH, color_system=None, force_terminal=False
    )
    console.print(table)
    return console.file.getvalue()  # type: ignore[attr-defined]


def render(
    payload: Row | Sequence[Row],
    fmt: str,
    *,
    rows: Sequence[Row] | None = None,
    title: str | None = None,
) -> str:
    """Render a payload in the requested format.

    Args:
        payload: What JSON output contains, a record or a list of records.
        fmt: One of FORMATS.
        rows: Tabular view for csv and text; defaults to the payload itself.
        title: Table title for text output.

    Raises:
        ParameterError: For an unknown format.

    """
    if fmt not in FORMATS:
        raise ParameterError(f"Unknown format {fmt!r}; expected one of {FORMATS}")
    if fmt == "json":
        return render_json(payload)
    if rows is None:
        rows = [payload] if isinstance(payload, Mapping) else list(payload)
    if fmt == "csv":
        return render_csv(rows)
    return render_table(rows, title)


def emit(text: str, output: str | None) -> None:
    """Write rendered text to a file (UTF-8, LF) or to stdout."""
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ParameterError(f"Cannot write output file {output}: {exc}") from None
