"""Error-field CSV input.

The solver side writes one row per (point, method) with the fixed
header below; everything here reads that format and nothing else.
"""

import csv
from dataclasses import dataclass

import numpy as np

HEADER = ["x", "y", "tstar", "eps", "method", "value", "exact", "abs_error"]
_FLOAT_COLS = (0, 1, 2, 3, 5, 6, 7)


class ParseError(ValueError):
    """Input file does not conform to the error-field schema."""


@dataclass
class Field:
    x: np.ndarray
    y: np.ndarray
    tstar: np.ndarray
    eps: np.ndarray
    method: np.ndarray
    value: np.ndarray
    exact: np.ndarray
    abs_error: np.ndarray

    def methods(self):
        """Method names in first-appearance order."""
        seen = []
        for m in self.method:
            if m not in seen:
                seen.append(m)
        return seen

    def mask(self, method):
        return self.method == method


def read_field(path):
    """Parse an error-field CSV. Raises ParseError naming the offending
    line (1-based, header is line 1) on any schema violation."""
    try:
        fh = open(path, newline="")
    except OSError as e:
        raise ParseError(str(e)) from e
    with fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != HEADER:
        raise ParseError("%s: line 1: expected header %s" % (path, ",".join(HEADER)))
    if len(rows) == 1:
        raise ParseError("%s: no data rows" % path)
    cols = [[] for _ in HEADER]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(HEADER):
            raise ParseError(
                "%s: line %d: expected %d fields, got %d"
                % (path, lineno, len(HEADER), len(row))
            )
        for i in _FLOAT_COLS:
            try:
                cols[i].append(float(row[i]))
            except ValueError:
                raise ParseError(
                    "%s: line %d: bad number %r in column %s"
                    % (path, lineno, row[i], HEADER[i])
                ) from None
        cols[4].append(row[4])
    arrays = [
        np.array(c) if i != 4 else np.array(c, dtype=object)
        for i, c in enumerate(cols)
    ]
    return Field(*arrays)
