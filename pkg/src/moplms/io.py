"""CSV matrices and small file helpers for the command line.

Files hold one header row followed by comma-separated reals. Values are
written with 17 significant digits, which round-trips float64 exactly.
"""

import csv
import os

import numpy as np


class CSVFormatError(ValueError):
    """A CSV file does not hold a rectangular numeric matrix."""


def read_csv(path):
    """Read a numeric matrix, skipping the header row.

    Raises
    ------
    CSVFormatError
        On a missing file, an empty body, a ragged row or a non-numeric
        cell. Row numbers in messages count file lines from 1, header
        included; columns count from 1.
    """
    try:
        handle = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise CSVFormatError(f"{path}: file not found") from None
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise CSVFormatError(f"{path}: file is empty (expected a header row)")
        width = len(header)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise CSVFormatError(
                    f"{path}: row {lineno} has {len(row)} columns, expected {width}")
            values = []
            for col, cell in enumerate(row, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise CSVFormatError(
                        f"{path}: row {lineno}, column {col}: non-numeric cell {cell!r}"
                    ) from None
            rows.append(values)
    if not rows:
        raise CSVFormatError(f"{path}: no data rows (0-row matrix)")
    m = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        r, c = np.argwhere(~np.isfinite(m))[0]
        raise CSVFormatError(f"{path}: row {r + 2}, column {c + 1}: non-finite value")
    return m


def format_csv(matrix, header=None):
    """Render a matrix as CSV text with a header row."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim == 1:
        m = m[:, None]
    if header is None:
        header = [f"c{j}" for j in range(m.shape[1])]
    lines = [",".join(header)]
    lines.extend(",".join("%.17g" % v for v in row) for row in m)
    return "\n".join(lines) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_csv(matrix, path, header=None):
    write_text(path, format_csv(matrix, header))


def format_table(header, rows):
    """CSV text for a table of mixed strings and numbers."""
    def cell(v):
        if isinstance(v, float):
            return "%.17g" % v
        return str(v)
    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


class Outputs:
    """Track files written by a command so a failure can remove them."""

    def __init__(self):
        self.paths = []

    def write(self, path, text):
        self.paths.append(path)
        write_text(path, text)

    def discard(self):
        for path in self.paths:
            try:
                os.remove(path)
            except FileNotFoundError:
                pass
        self.paths = []
