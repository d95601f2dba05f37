"""Tab-separated output tables.

One fixed dialect everywhere: a single header row prefixed with ``#``,
tab separators, LF line endings, floats in scientific notation with six
significant digits, integers verbatim, ``None`` as an empty field.
Byte-identical output for identical inputs.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Sequence

__all__ = ["SweepTable", "format_field", "write_tsv"]


@dataclass
class SweepTable:
    """Ordered rows of (abscissa, value columns) destined for TSV output."""

    columns: list[str]
    rows: list[tuple] = field(default_factory=list)

    def append(self, row: Sequence) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} fields, expected {len(self.columns)}")
        self.rows.append(tuple(row))

    def to_tsv(self) -> str:
        out = io.StringIO()
        write_tsv(self, out)
        return out.getvalue()


def format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.5e}"


def write_tsv(table: SweepTable, dest) -> None:
    """Write ``table`` to a path or text file object."""
    if hasattr(dest, "write"):
        _write(table, dest)
    else:
        with open(dest, "w", encoding="ascii", newline="") as handle:
            _write(table, handle)


def _write(table: SweepTable, handle) -> None:
    handle.write("# " + "\t".join(table.columns) + "\n")
    for row in table.rows:
        handle.write("\t".join(format_field(v) for v in row) + "\n")
