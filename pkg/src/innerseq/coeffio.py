"""Read and write the ``n,re,im`` coefficient CSV format."""
from __future__ import annotations

import csv
import io
import os

from .seq import CoeffSeq

HEADER = ("n", "re", "im")


class CoeffFormatError(ValueError):
    """Malformed coefficient file; ``line`` is 1-based (header is line 1)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def fmt_float(x: float) -> str:
    x = float(x) + 0.0  # drop negative zero
    return format(x, ".17g")


def parse_coeffs(text: str, finite: bool = True) -> CoeffSeq:
    """Parse CSV text.  Rows must run n = 0, 1, 2, ... with no gaps or repeats.

    ``finite=True`` reads the file as the whole sequence (a polynomial);
    pass False when the file is a truncation with unknown tail.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [(reader.line_num, r) for r in reader if any(f.strip() for f in r)]
    if not rows:
        raise CoeffFormatError("empty coefficient file")
    line, header = rows[0]
    if tuple(f.strip() for f in header) != HEADER:
        raise CoeffFormatError(f"expected header 'n,re,im', got {','.join(header)!r}", line)
    values = []
    for line, row in rows[1:]:
        if len(row) != 3:
            raise CoeffFormatError(f"expected 3 fields, got {len(row)}", line)
        try:
            n = int(row[0].strip())
        except ValueError:
            raise CoeffFormatError(f"index {row[0]!r} is not an integer", line) from None
        expected = len(values)
        if n != expected:
            if n < expected:
                what = "duplicate" if n == expected - 1 else "non-monotone"
                raise CoeffFormatError(f"{what} index n={n} (expected {expected})", line)
            raise CoeffFormatError(f"gap in indices: n={n} follows n={expected - 1}", line)
        try:
            re, im = float(row[1]), float(row[2])
        except ValueError:
            raise CoeffFormatError(f"non-numeric value in {row!r}", line) from None
        values.append(complex(re, im))
    if not values:
        raise CoeffFormatError("no coefficient rows", rows[0][0])
    try:
        return CoeffSeq(values, finite=finite)
    except ValueError as exc:
        raise CoeffFormatError(str(exc)) from None


def read_coeffs(path: str | os.PathLike, finite: bool = True) -> CoeffSeq:
    with open(path, newline="") as fh:
        return parse_coeffs(fh.read(), finite=finite)


def format_coeffs(s: CoeffSeq) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for n, v in enumerate(s.coeffs):
        w.writerow((n, fmt_float(v.real), fmt_float(v.imag)))
    return buf.getvalue()


def write_coeffs(path: str | os.PathLike, s: CoeffSeq) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_coeffs(s))
